#pragma once

#include <cstddef>
#include <cstdint>
#include <numbers>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "discovery/estimator.hpp"
#include "discovery/experts.hpp"
#include "discovery/macroscopic.hpp"

namespace discovery {

class SamplePathCache;

// Expert indices are 0-based throughout; time steps t are 1-based.

/// Confidence scale used by the experiments.
inline constexpr double kDefaultUcbScale = 0.5;
/// Scale under which the cumulative regret bound is stated: (1 + sqrt 2) sqrt 3.
inline constexpr double kTheoreticalUcbScale = (1.0 + std::numbers::sqrt2) * std::numbers::sqrt3;

struct GoodUcb {
  double c = kDefaultUcbScale;
};
/// Greedy on the true missing masses.
struct OracleClosedLoop {};
struct UniformCycle {};
/// Fixed pull counts, consumed in expert order.
struct OpenLoopOracle {
  std::vector<std::uint64_t> allocation;
};

using PolicyKind = std::variant<GoodUcb, OracleClosedLoop, UniformCycle, OpenLoopOracle>;

/// Stable label used in CSV output, e.g. "good_ucb(C=0.5)", "ocl", "uniform", "ool".
std::string policy_name(const PolicyKind& policy);

/// Index of the largest value; ties go to the lowest index.
std::size_t argmax_lowest(std::span<const double> values);

/// Good-UCB choice at time t: expert t-1 for t <= K, else the argmax of the index.
std::size_t good_ucb_select(const HapaxTracker& tracker, std::uint64_t t, double c);

std::size_t ocl_select(std::span<const double> masses);

/// (t-1) mod K.
std::size_t uniform_select(std::uint64_t t, std::size_t num_experts);

/// T*(lambda) = sum_e T_e*(lambda), where T_e*(lambda) is the number of draws
/// along expert e's own path before its missing mass drops to lambda (0 when
/// it starts there). Paths are extended on demand. Throws AssumptionViolated
/// unless interesting supports are disjoint.
std::uint64_t omniscient_waiting_time(const ProblemInstance& instance, SamplePathCache& paths,
                                      double lambda);

/// T*(lambda) for several thresholds with one pass over each path.
std::vector<std::uint64_t> omniscient_waiting_times(const ProblemInstance& instance, SamplePathCache& paths,
                                                    std::span<const double> lambdas);

/// Same computation over fixed path prefixes (one per expert). Throws
/// PathExhausted when a prefix ends before its threshold is met.
std::uint64_t omniscient_waiting_time(const ProblemInstance& instance,
                                      std::span<const std::vector<ItemId>> prefixes, double lambda);

/// Optimal macroscopic open-loop allocation nu*(t): t/I + ln(q_i / g_I) on the
/// first I(t) experts, zero beyond.
std::vector<double> ool_allocation(const MacroscopicProfile& profile, double t);

/// Integer pull counts summing to `horizon` that realise the macroscopic
/// allocation for a disjoint uniform instance of support N (largest remainder rounding).
std::vector<std::uint64_t> discrete_ool_allocation(const MacroscopicProfile& profile, std::uint64_t support,
                                                   std::uint64_t horizon);

// Exact expected number of interesting items found after `horizon` pulls,
// by dynamic programming over discovered-set states. Finite supports with at
// most 64 interesting items only.

/// Best value over all (history-dependent) policies.
double exact_expected_found_optimal(const ProblemInstance& instance, std::size_t horizon);

/// Value of the greedy true-missing-mass policy (lowest-index ties).
double exact_expected_found_ocl(const ProblemInstance& instance, std::size_t horizon);

/// Value of a fixed sequence of experts.
double exact_expected_found_sequence(const ProblemInstance& instance, std::span<const std::size_t> experts);

}  // namespace discovery
