#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "discovery/experts.hpp"
#include "discovery/policies.hpp"
#include "discovery/rng.hpp"

namespace discovery {

/// Lazily extended, pre-drawn sample paths of one replicate: entry (e, s) is
/// the s-th draw of the stream owned by (expert e, replicate). Every policy run
/// against the same cache sees the same entries.
class SamplePathCache {
 public:
  static constexpr std::size_t kBlock = 4096;

  SamplePathCache(const ProblemInstance& instance, std::uint64_t master_seed, std::uint64_t replicate);

  /// Draw number `s` (0-based) of expert e, extending the path if needed.
  ItemId at(std::size_t e, std::size_t s);

  /// Entries drawn so far for expert e.
  std::span<const ItemId> drawn(std::size_t e) const { return paths_.at(e); }

  std::uint64_t replicate() const noexcept { return replicate_; }

 private:
  const ProblemInstance* instance_;
  std::uint64_t replicate_;
  std::vector<RngStream> streams_;
  std::vector<std::vector<ItemId>> paths_;
};

/// Record of one episode.
struct Trajectory {
  std::size_t num_experts = 0;
  std::vector<std::uint32_t> pulls;       // expert chosen at t = 1..horizon
  std::vector<std::uint8_t> discoveries;  // 1 when step t found a new interesting item
  std::vector<std::uint64_t> f_curve;     // F(t), t = 1..horizon
  std::vector<std::uint32_t> n_matrix;    // row t-1 holds n_{e,t} for e = 0..K-1
  std::vector<double> max_mass;           // max_e missing mass after t steps, t = 0..horizon
  std::vector<double> mass_trace;         // optional, row t-1 holds the K masses after step t

  std::size_t horizon() const noexcept { return pulls.size(); }
  std::uint32_t pulls_of(std::size_t e, std::size_t t) const { return n_matrix[(t - 1) * num_experts + e]; }
};

struct EpisodeOptions {
  bool record_mass_trace = false;
};

/// Runs `horizon` steps of `policy` on the coupled paths. Throws
/// HorizonTooShort for Good-UCB when horizon < K, and InvalidInstance when an
/// open-loop allocation does not sum to the horizon.
Trajectory run_episode(const ProblemInstance& instance, const PolicyKind& policy, std::size_t horizon,
                       SamplePathCache& paths, EpisodeOptions options = {});

/// First t (0 allowed) at which every expert's missing mass is <= lambda;
/// nullopt when the horizon ends first.
std::optional<std::uint64_t> waiting_time(std::span<const double> max_mass, double lambda);

inline std::optional<std::uint64_t> waiting_time(const Trajectory& trajectory, double lambda) {
  return waiting_time(trajectory.max_mass, lambda);
}

struct MonteCarloOptions {
  std::size_t threads = 1;
  /// Times (1-based, <= horizon) at which F and the pull counts are kept.
  std::vector<std::uint64_t> time_grid;
  bool record_mass_trace = false;
};

struct PolicyAggregate {
  std::string name;
  // [replicate][grid point]
  std::vector<std::vector<std::uint64_t>> f_at_grid;
  // [replicate][grid point * K + e]
  std::vector<std::vector<std::uint32_t>> pulls_at_grid;
  // [replicate][lambda]
  std::vector<std::vector<std::optional<std::uint64_t>>> waiting;
  // Per grid point, over replicates.
  std::vector<double> f_mean, f_median, f_q05, f_q95;
};

struct AggregateReport {
  std::size_t num_experts = 0;
  std::size_t replicates = 0;
  std::vector<double> lambdas;
  std::vector<std::uint64_t> time_grid;
  std::vector<PolicyAggregate> policies;
  /// [replicate][lambda] omniscient waiting time; empty unless supports are disjoint.
  std::vector<std::vector<std::uint64_t>> omniscient;

  /// T_policy(lambda) - T*(lambda) for one replicate; nullopt when not reached.
  std::optional<std::int64_t> coupled_gap(std::size_t policy, std::size_t replicate, std::size_t lambda) const;
};

/// Runs every policy on every replicate's coupled paths. Replicates run on
/// `threads` workers; results depend only on master_seed.
AggregateReport monte_carlo(const ProblemInstance& instance, const std::vector<PolicyKind>& policies,
                            std::size_t horizon, const std::vector<double>& lambdas, std::size_t replicates,
                            std::uint64_t master_seed, const MonteCarloOptions& options = {});

/// 1, 2, ..., horizon when stride is 1; otherwise multiples of stride plus the horizon.
std::vector<std::uint64_t> stride_grid(std::uint64_t horizon, std::uint64_t stride);

}  // namespace discovery
