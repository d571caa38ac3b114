#pragma once

#include <cstddef>
#include <cstdint>
#include <unordered_map>
#include <vector>

#include "discovery/experts.hpp"

namespace discovery {

/// Good-Turing bookkeeping for K experts.
///
/// An interesting item is a hapax of expert i when it was seen exactly once
/// by i and exactly once over all experts. Only interesting items are stored;
/// other draws just bump the pull count.
class HapaxTracker {
 public:
  explicit HapaxTracker(std::size_t num_experts);

  void record(std::size_t expert, ItemId item, bool is_interesting);

  std::size_t num_experts() const noexcept { return pulls_.size(); }
  std::uint64_t pulls(std::size_t expert) const { return pulls_.at(expert); }
  std::uint64_t hapaxes(std::size_t expert) const { return hapaxes_.at(expert); }

  /// Global occurrence count of an interesting item.
  std::uint64_t occurrences(ItemId item) const;

  /// U_i / n_i. Throws UndefinedEstimate when expert i was never pulled.
  double estimate(std::size_t expert) const;

 private:
  struct Occurrence {
    std::uint64_t count = 0;
    std::size_t first_expert = 0;
  };

  std::vector<std::uint64_t> pulls_;
  std::vector<std::uint64_t> hapaxes_;
  std::unordered_map<ItemId, Occurrence, ItemIdHash> seen_;
};

/// Two-sided deviation interval around a Good-Turing estimate:
///   upper = r_hat + w,  lower = r_hat - 1/n - w,  w = (1 + sqrt 2) sqrt(ln(4/delta) / n).
/// Values are not clamped to [0,1].
struct MassEstimate {
  double r_hat = 0.0;
  std::uint64_t n = 0;
  double lower = 0.0;
  double upper = 0.0;
  double delta = 0.0;

  bool contains(double mass) const noexcept { return lower <= mass && mass <= upper; }
};

/// Throws InvalidDelta unless 0 < delta < 1, UndefinedEstimate if n == 0.
MassEstimate confidence_interval(double r_hat, std::uint64_t n, double delta);

/// r_hat + C sqrt(ln(4t) / n).
double ucb_index(double r_hat, std::uint64_t n, std::uint64_t t, double c);

/// Good-UCB index of `expert` at time t computed from the tracker.
double ucb_index(const HapaxTracker& tracker, std::size_t expert, std::uint64_t t, double c);

}  // namespace discovery
