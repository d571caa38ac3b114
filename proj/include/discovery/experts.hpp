#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <unordered_set>
#include <utility>
#include <variant>
#include <vector>

#include "discovery/rng.hpp"

namespace discovery {

/// Opaque item label. For disjoint uniform instances an item of expert e
/// (0-based) with local index x is encoded as e * N + x.
struct ItemId {
  std::uint64_t value = 0;
  friend constexpr auto operator<=>(ItemId, ItemId) = default;
};

struct ItemIdHash {
  std::size_t operator()(ItemId id) const noexcept { return std::hash<std::uint64_t>{}(id.value); }
};

using ItemSet = std::unordered_set<ItemId, ItemIdHash>;

// Expert sampling distributions.

/// Uniform over N local items; the first `interesting` local indices are in A.
struct UniformDisjoint {
  std::uint64_t support = 0;
  std::uint64_t interesting = 0;
};

/// P(x) = p (1-p)^(x-1) on {1, 2, ...} with p = 1/mean.
struct Geometric {
  double mean = 1.0;
};

/// Finite distribution over items 0..m-1.
struct Categorical {
  std::vector<double> probabilities;
};

using ExpertSpec = std::variant<UniformDisjoint, Geometric, Categorical>;

/// Throws InvalidInstance when a spec breaks its invariants.
void validate(const ExpertSpec& spec);

// Interesting-set predicates.

/// Item e*N + x is interesting iff x < Q_e. Requires all experts UniformDisjoint with one N.
struct DisjointPrefix {};
struct Primes {};
struct ExplicitItems {
  ItemSet items;
};

using InterestingRule = std::variant<DisjointPrefix, Primes, ExplicitItems>;

/// Deterministic Miller-Rabin, exact for every 64-bit input.
bool is_prime(std::uint64_t n) noexcept;

/// Set of experts, their distributions and the interesting predicate.
/// Immutable after construction; safe to share across threads.
class ProblemInstance {
 public:
  static constexpr double kDefaultTruncationEpsilon = 1e-12;

  ProblemInstance(std::vector<ExpertSpec> experts, InterestingRule rule,
                  double truncation_epsilon = kDefaultTruncationEpsilon);

  /// K uniform experts over disjoint supports of size N with Q_e interesting items each.
  static ProblemInstance uniform_disjoint(std::uint64_t support,
                                          const std::vector<std::uint64_t>& interesting_counts);

  /// Geometric experts with the given means; interesting items are the primes.
  static ProblemInstance geometric_primes(const std::vector<double>& means,
                                          double truncation_epsilon = kDefaultTruncationEpsilon);

  /// Categorical experts over a shared item space with an explicit interesting set.
  static ProblemInstance categorical(std::vector<std::vector<double>> probabilities,
                                     const std::vector<std::uint64_t>& interesting);

  std::size_t num_experts() const noexcept { return experts_.size(); }
  const ExpertSpec& expert(std::size_t e) const { return experts_.at(e); }
  const InterestingRule& rule() const noexcept { return rule_; }
  double truncation_epsilon() const noexcept { return truncation_epsilon_; }

  bool is_interesting(ItemId item) const;

  /// P_e(item).
  double probability(std::size_t e, ItemId item) const;

  /// One i.i.d. draw from P_e; consumes one logical draw of `stream`.
  ItemId sample(std::size_t e, RngStream& stream) const;

  /// Largest item label enumerated for expert e; beyond it the remaining
  /// probability is tail_mass(e) < truncation_epsilon (zero for finite supports).
  std::uint64_t support_cutoff(std::size_t e) const { return cutoff_.at(e); }
  double tail_mass(std::size_t e) const { return tail_.at(e); }

  /// Interesting items with positive probability under P_e, up to the cutoff.
  std::span<const ItemId> interesting_items(std::size_t e) const { return interesting_.at(e); }

  /// Missing mass of expert e before any draw (upper bound within truncation_epsilon).
  double initial_missing_mass(std::size_t e) const { return initial_mass_.at(e); }

  /// Whether every expert has a finite support (exact enumeration possible).
  bool finite_supports() const noexcept { return finite_; }

  /// Interesting supports are pairwise disjoint across experts.
  bool disjoint_interesting_supports() const noexcept { return disjoint_; }

  /// For DisjointPrefix instances: the common support size N. Zero otherwise.
  std::uint64_t uniform_support() const noexcept { return uniform_support_; }

  /// Per-expert interesting proportions Q_e / N for DisjointPrefix instances.
  std::vector<double> interesting_proportions() const;

 private:
  void precompute();

  std::vector<ExpertSpec> experts_;
  InterestingRule rule_;
  double truncation_epsilon_;
  std::uint64_t uniform_support_ = 0;
  bool finite_ = true;
  bool disjoint_ = true;
  std::vector<std::vector<double>> cumulative_;  // per categorical expert
  std::vector<std::uint64_t> cutoff_;
  std::vector<double> tail_;
  std::vector<std::vector<ItemId>> interesting_;
  std::vector<double> initial_mass_;
};

/// Seven disjoint uniform experts with proportions 0.512, 0.256, ..., 0.008 of
/// interesting items: Q_e = round(q_e * N). Rejects N for which some Q_e is 0.
ProblemInstance make_seven_expert_instance(std::uint64_t support);

/// The seven proportions used by make_seven_expert_instance.
std::vector<double> seven_expert_proportions();

ProblemInstance make_prime_instance(const std::vector<double>& means);

/// Sum over interesting x not in `discovered` of P_e(x). For infinite supports
/// the enumeration stops at support_cutoff(e) and the tail mass is added, so
/// the result is an upper bound within truncation_epsilon.
double true_missing_mass(const ProblemInstance& instance, std::size_t e, const ItemSet& discovered);

/// Incrementally maintained per-expert missing mass of the globally
/// undiscovered interesting items (the general, intersecting-support form).
class MissingMassTracker {
 public:
  explicit MissingMassTracker(const ProblemInstance& instance);

  /// Registers a draw. Returns true iff it is a first discovery of an interesting item.
  bool observe(ItemId item);

  double mass(std::size_t e) const { return masses_[e]; }
  std::span<const double> masses() const noexcept { return masses_; }
  double max_mass() const noexcept;
  std::size_t found() const noexcept { return discovered_.size(); }
  const ItemSet& discovered() const noexcept { return discovered_; }

 private:
  const ProblemInstance* instance_;
  ItemSet discovered_;
  bool prefix_rule_;
  std::vector<double> masses_;
  // Undiscovered enumerated interesting items per expert.
  std::vector<std::uint64_t> remaining_;
};

}  // namespace discovery
