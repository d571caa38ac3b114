#include "discovery/policies.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <optional>
#include <string>

#include "discovery/errors.hpp"
#include "discovery/simulator.hpp"

namespace discovery {
namespace {

std::string shortest(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

void require_disjoint(const ProblemInstance& instance) {
  if (!instance.disjoint_interesting_supports())
    throw AssumptionViolated("omniscient waiting time needs disjoint interesting supports");
}

// Walks expert e's path with `next(s)` (returns nullopt when the path ends)
// until its missing mass is <= lowest; T_e for every lambda is read off the way.
template <class Next>
void scan_expert(const ProblemInstance& instance, std::size_t e, std::span<const double> lambdas,
                 std::vector<std::uint64_t>& totals, Next&& next) {
  const double lowest = *std::min_element(lambdas.begin(), lambdas.end());
  if (lowest < instance.tail_mass(e))
    throw InvalidLambda("threshold below the truncated tail mass can never be met");
  MissingMassTracker tracker(instance);
  std::vector<bool> done(lambdas.size(), false);
  std::uint64_t s = 0;
  while (true) {
    const double mass = tracker.mass(e);
    bool all_done = true;
    for (std::size_t l = 0; l < lambdas.size(); ++l) {
      if (!done[l] && mass <= lambdas[l]) {
        done[l] = true;
        totals[l] += s;
      }
      all_done = all_done && done[l];
    }
    if (all_done) return;
    const std::optional<ItemId> item = next(s);
    if (!item) throw PathExhausted("sample path of expert " + std::to_string(e) + " ended before the threshold");
    tracker.observe(*item);
    ++s;
  }
}

}  // namespace

std::string policy_name(const PolicyKind& policy) {
  if (const auto* g = std::get_if<GoodUcb>(&policy)) return "good_ucb(C=" + shortest(g->c) + ")";
  if (std::holds_alternative<OracleClosedLoop>(policy)) return "ocl";
  if (std::holds_alternative<UniformCycle>(policy)) return "uniform";
  return "ool";
}

std::size_t argmax_lowest(std::span<const double> values) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] > values[best]) best = i;
  }
  return best;
}

std::size_t good_ucb_select(const HapaxTracker& tracker, std::uint64_t t, double c) {
  const std::size_t k = tracker.num_experts();
  if (t <= k) return static_cast<std::size_t>(t - 1);
  std::size_t best = 0;
  double best_index = ucb_index(tracker, 0, t, c);
  for (std::size_t e = 1; e < k; ++e) {
    const double index = ucb_index(tracker, e, t, c);
    if (index > best_index) {
      best_index = index;
      best = e;
    }
  }
  return best;
}

std::size_t ocl_select(std::span<const double> masses) { return argmax_lowest(masses); }

std::size_t uniform_select(std::uint64_t t, std::size_t num_experts) {
  return static_cast<std::size_t>((t - 1) % num_experts);
}

std::vector<std::uint64_t> omniscient_waiting_times(const ProblemInstance& instance, SamplePathCache& paths,
                                                    std::span<const double> lambdas) {
  require_disjoint(instance);
  std::vector<std::uint64_t> totals(lambdas.size(), 0);
  if (lambdas.empty()) return totals;
  for (std::size_t e = 0; e < instance.num_experts(); ++e) {
    scan_expert(instance, e, lambdas, totals,
                [&](std::uint64_t s) -> std::optional<ItemId> { return paths.at(e, s); });
  }
  return totals;
}

std::uint64_t omniscient_waiting_time(const ProblemInstance& instance, SamplePathCache& paths, double lambda) {
  const double lambdas[] = {lambda};
  return omniscient_waiting_times(instance, paths, lambdas).front();
}

std::uint64_t omniscient_waiting_time(const ProblemInstance& instance,
                                      std::span<const std::vector<ItemId>> prefixes, double lambda) {
  require_disjoint(instance);
  if (prefixes.size() != instance.num_experts())
    throw InvalidInstance("one path prefix per expert is required");
  const double lambdas[] = {lambda};
  std::vector<std::uint64_t> totals(1, 0);
  for (std::size_t e = 0; e < instance.num_experts(); ++e) {
    const auto& prefix = prefixes[e];
    scan_expert(instance, e, lambdas, totals, [&](std::uint64_t s) -> std::optional<ItemId> {
      if (s >= prefix.size()) return std::nullopt;
      return prefix[s];
    });
  }
  return totals.front();
}

std::vector<double> ool_allocation(const MacroscopicProfile& profile, double t) {
  if (!(t >= 0.0)) throw InvalidProfile("allocation budget must be non-negative");
  std::vector<double> nu(profile.size(), 0.0);
  if (t == 0.0) return nu;
  const std::size_t active = active_index(profile, t);
  const double ad = static_cast<double>(active);
  const double log_g = std::log(profile.geomean(active));
  for (std::size_t i = 0; i < active; ++i) {
    nu[i] = std::max(0.0, t / ad + std::log(profile.q(i)) - log_g);
  }
  return nu;
}

std::vector<std::uint64_t> discrete_ool_allocation(const MacroscopicProfile& profile, std::uint64_t support,
                                                   std::uint64_t horizon) {
  const double n = static_cast<double>(support);
  const auto nu = ool_allocation(profile, static_cast<double>(horizon) / n);
  std::vector<std::uint64_t> counts(nu.size());
  std::vector<double> remainder(nu.size());
  std::uint64_t assigned = 0;
  for (std::size_t i = 0; i < nu.size(); ++i) {
    const double exact = nu[i] * n;
    counts[i] = static_cast<std::uint64_t>(std::floor(exact));
    remainder[i] = exact - std::floor(exact);
    assigned += counts[i];
  }
  // Round-off can overshoot by a pull; take it back from the largest count.
  while (assigned > horizon) {
    auto it = std::max_element(counts.begin(), counts.end());
    --*it;
    --assigned;
  }
  std::vector<std::size_t> order(nu.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return remainder[a] > remainder[b]; });
  for (std::size_t k = 0; assigned < horizon; k = (k + 1) % order.size()) {
    ++counts[order[k]];
    ++assigned;
  }
  return counts;
}

}  // namespace discovery
