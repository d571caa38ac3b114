#include <algorithm>
#include <cstdint>
#include <unordered_map>
#include <vector>

#include "discovery/errors.hpp"
#include "discovery/policies.hpp"

namespace discovery {
namespace {

// Interesting outcomes of each expert as (bit, probability); everything else
// is lumped into one "nothing new" outcome.
struct OutcomeTable {
  struct Outcome {
    unsigned bit;
    double probability;
  };
  std::vector<std::vector<Outcome>> interesting;
  std::vector<double> other;
};

OutcomeTable build_table(const ProblemInstance& instance) {
  if (!instance.finite_supports()) throw InvalidInstance("exact values need finite supports");
  std::unordered_map<ItemId, unsigned, ItemIdHash> bits;
  OutcomeTable table;
  table.interesting.resize(instance.num_experts());
  table.other.resize(instance.num_experts());
  for (std::size_t e = 0; e < instance.num_experts(); ++e) {
    double total = 0.0;
    for (ItemId id : instance.interesting_items(e)) {
      auto [it, inserted] = bits.emplace(id, static_cast<unsigned>(bits.size()));
      if (bits.size() > 64) throw InvalidInstance("exact values support at most 64 interesting items");
      const double p = instance.probability(e, id);
      table.interesting[e].push_back({it->second, p});
      total += p;
    }
    table.other[e] = 1.0 - total;
  }
  return table;
}

double missing_mass(const OutcomeTable& table, std::size_t e, std::uint64_t mask) {
  double mass = 0.0;
  for (const auto& o : table.interesting[e]) {
    if ((mask >> o.bit & 1U) == 0) mass += o.probability;
  }
  return mass;
}

class Solver {
 public:
  enum class Mode { kOptimal, kGreedy };

  Solver(const ProblemInstance& instance, Mode mode, std::size_t horizon)
      : table_(build_table(instance)), mode_(mode), memo_(horizon + 1) {}

  double value(std::uint64_t mask, std::size_t remaining) {
    if (remaining == 0) return 0.0;
    auto& level = memo_[remaining];
    if (auto it = level.find(mask); it != level.end()) return it->second;
    double result;
    if (mode_ == Mode::kOptimal) {
      result = 0.0;
      for (std::size_t e = 0; e < table_.interesting.size(); ++e) {
        result = std::max(result, pull_value(e, mask, remaining));
      }
    } else {
      std::vector<double> masses(table_.interesting.size());
      for (std::size_t e = 0; e < masses.size(); ++e) masses[e] = missing_mass(table_, e, mask);
      result = pull_value(ocl_select(masses), mask, remaining);
    }
    level.emplace(mask, result);
    return result;
  }

 private:
  double pull_value(std::size_t e, std::uint64_t mask, std::size_t remaining) {
    double v = table_.other[e] * value(mask, remaining - 1);
    for (const auto& o : table_.interesting[e]) {
      const std::uint64_t bit = std::uint64_t{1} << o.bit;
      const double gain = (mask & bit) ? 0.0 : 1.0;
      v += o.probability * (gain + value(mask | bit, remaining - 1));
    }
    return v;
  }

  OutcomeTable table_;
  Mode mode_;
  std::vector<std::unordered_map<std::uint64_t, double>> memo_;
};

}  // namespace

double exact_expected_found_optimal(const ProblemInstance& instance, std::size_t horizon) {
  return Solver(instance, Solver::Mode::kOptimal, horizon).value(0, horizon);
}

double exact_expected_found_ocl(const ProblemInstance& instance, std::size_t horizon) {
  return Solver(instance, Solver::Mode::kGreedy, horizon).value(0, horizon);
}

double exact_expected_found_sequence(const ProblemInstance& instance, std::span<const std::size_t> experts) {
  const OutcomeTable table = build_table(instance);
  // Distribution over discovered sets, pushed forward one pull at a time.
  std::unordered_map<std::uint64_t, double> states{{0, 1.0}};
  double expected = 0.0;
  for (std::size_t e : experts) {
    if (e >= table.interesting.size()) throw InvalidInstance("expert index out of range");
    std::unordered_map<std::uint64_t, double> next;
    for (const auto& [mask, weight] : states) {
      next[mask] += weight * table.other[e];
      for (const auto& o : table.interesting[e]) {
        const std::uint64_t bit = std::uint64_t{1} << o.bit;
        if ((mask & bit) == 0) expected += weight * o.probability;
        next[mask | bit] += weight * o.probability;
      }
    }
    states = std::move(next);
  }
  return expected;
}

}  // namespace discovery
