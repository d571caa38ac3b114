#include "discovery/estimator.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "discovery/errors.hpp"

namespace discovery {

HapaxTracker::HapaxTracker(std::size_t num_experts) : pulls_(num_experts, 0), hapaxes_(num_experts, 0) {}

void HapaxTracker::record(std::size_t expert, ItemId item, bool is_interesting) {
  ++pulls_.at(expert);
  if (!is_interesting) return;
  Occurrence& occ = seen_[item];
  ++occ.count;
  if (occ.count == 1) {
    occ.first_expert = expert;
    ++hapaxes_[expert];
  } else if (occ.count == 2) {
    // The hapax is lost by whichever expert held it, possibly not `expert`.
    --hapaxes_[occ.first_expert];
  }
}

std::uint64_t HapaxTracker::occurrences(ItemId item) const {
  const auto it = seen_.find(item);
  return it == seen_.end() ? 0 : it->second.count;
}

double HapaxTracker::estimate(std::size_t expert) const {
  const std::uint64_t n = pulls_.at(expert);
  if (n == 0)
    throw UndefinedEstimate("missing-mass estimate of expert " + std::to_string(expert) +
                            " requested before any pull");
  return static_cast<double>(hapaxes_[expert]) / static_cast<double>(n);
}

MassEstimate confidence_interval(double r_hat, std::uint64_t n, double delta) {
  if (!(delta > 0.0 && delta < 1.0)) throw InvalidDelta("delta must lie in (0,1)");
  if (n == 0) throw UndefinedEstimate("confidence interval needs at least one observation");
  const double nd = static_cast<double>(n);
  const double width = (1.0 + std::numbers::sqrt2) * std::sqrt(std::log(4.0 / delta) / nd);
  return MassEstimate{r_hat, n, r_hat - 1.0 / nd - width, r_hat + width, delta};
}

double ucb_index(double r_hat, std::uint64_t n, std::uint64_t t, double c) {
  return r_hat + c * std::sqrt(std::log(4.0 * static_cast<double>(t)) / static_cast<double>(n));
}

double ucb_index(const HapaxTracker& tracker, std::size_t expert, std::uint64_t t, double c) {
  return ucb_index(tracker.estimate(expert), tracker.pulls(expert), t, c);
}

}  // namespace discovery
