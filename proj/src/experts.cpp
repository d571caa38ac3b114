#include "discovery/experts.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <unordered_map>

#include "discovery/errors.hpp"

namespace discovery {
namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<__uint128_t>(a) * b % m);
}

std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
  std::uint64_t result = 1;
  base %= m;
  while (exp > 0) {
    if (exp & 1U) result = mul_mod(result, base, m);
    base = mul_mod(base, base, m);
    exp >>= 1U;
  }
  return result;
}

double geometric_success(const Geometric& g) { return 1.0 / g.mean; }

double geometric_pmf(const Geometric& g, std::uint64_t x) {
  if (x == 0) return 0.0;
  const double p = geometric_success(g);
  if (p >= 1.0) return x == 1 ? 1.0 : 0.0;
  return p * std::exp(static_cast<double>(x - 1) * std::log1p(-p));
}

}  // namespace

bool is_prime(std::uint64_t n) noexcept {
  if (n < 2) return false;
  static constexpr std::uint64_t kWitnesses[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
  for (std::uint64_t p : kWitnesses) {
    if (n % p == 0) return n == p;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1U) == 0) {
    d >>= 1U;
    ++s;
  }
  for (std::uint64_t a : kWitnesses) {
    std::uint64_t x = pow_mod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = mul_mod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

void validate(const ExpertSpec& spec) {
  std::visit(overloaded{
                 [](const UniformDisjoint& u) {
                   if (u.support == 0) throw InvalidInstance("uniform expert needs a non-empty support");
                   if (u.interesting > u.support)
                     throw InvalidInstance("uniform expert: interesting count exceeds support size");
                 },
                 [](const Geometric& g) {
                   if (!(g.mean >= 1.0) || !std::isfinite(g.mean))
                     throw InvalidInstance("geometric expert: mean must be >= 1");
                 },
                 [](const Categorical& c) {
                   if (c.probabilities.empty()) throw InvalidInstance("categorical expert: empty distribution");
                   double total = 0.0;
                   for (double p : c.probabilities) {
                     if (!(p >= 0.0) || !std::isfinite(p))
                       throw InvalidInstance("categorical expert: negative or non-finite probability");
                     total += p;
                   }
                   if (std::abs(total - 1.0) > 1e-12)
                     throw InvalidInstance("categorical expert: probabilities do not sum to 1");
                 },
             },
             spec);
}

ProblemInstance::ProblemInstance(std::vector<ExpertSpec> experts, InterestingRule rule,
                                 double truncation_epsilon)
    : experts_(std::move(experts)), rule_(std::move(rule)), truncation_epsilon_(truncation_epsilon) {
  if (experts_.empty()) throw InvalidInstance("an instance needs at least one expert");
  if (!(truncation_epsilon_ > 0.0 && truncation_epsilon_ < 1.0))
    throw InvalidInstance("truncation epsilon must lie in (0,1)");
  for (const auto& spec : experts_) {
    validate(spec);
    if (const auto* u = std::get_if<UniformDisjoint>(&spec)) {
      if (uniform_support_ == 0) uniform_support_ = u->support;
      if (u->support != uniform_support_)
        throw InvalidInstance("uniform experts in one instance must share the support size");
    }
  }
  if (std::holds_alternative<DisjointPrefix>(rule_)) {
    for (const auto& spec : experts_) {
      if (!std::holds_alternative<UniformDisjoint>(spec))
        throw InvalidInstance("prefix interesting sets require uniform disjoint experts");
    }
  }
  precompute();
}

void ProblemInstance::precompute() {
  const std::size_t k = experts_.size();
  cumulative_.assign(k, {});
  cutoff_.assign(k, 0);
  tail_.assign(k, 0.0);
  interesting_.assign(k, {});
  initial_mass_.assign(k, 0.0);

  for (std::size_t e = 0; e < k; ++e) {
    const ExpertSpec& spec = experts_[e];
    std::vector<ItemId>& items = interesting_[e];
    if (const auto* u = std::get_if<UniformDisjoint>(&spec)) {
      const std::uint64_t base = e * u->support;
      cutoff_[e] = base + u->support - 1;
      for (std::uint64_t x = 0; x < u->support; ++x) {
        const ItemId id{base + x};
        if (is_interesting(id)) items.push_back(id);
      }
    } else if (const auto* g = std::get_if<Geometric>(&spec)) {
      finite_ = false;
      const auto cutoff =
          static_cast<std::uint64_t>(std::ceil(g->mean * std::log(1.0 / truncation_epsilon_)));
      cutoff_[e] = std::max<std::uint64_t>(cutoff, 1);
      const double p = geometric_success(*g);
      tail_[e] = p >= 1.0 ? 0.0 : std::exp(static_cast<double>(cutoff_[e]) * std::log1p(-p));
      for (std::uint64_t x = 1; x <= cutoff_[e]; ++x) {
        if (is_interesting(ItemId{x})) items.push_back(ItemId{x});
      }
    } else {
      const auto& c = std::get<Categorical>(spec);
      cutoff_[e] = c.probabilities.size() - 1;
      auto& cum = cumulative_[e];
      cum.resize(c.probabilities.size());
      double running = 0.0;
      for (std::size_t x = 0; x < c.probabilities.size(); ++x) {
        running += c.probabilities[x];
        cum[x] = running;
        if (c.probabilities[x] > 0.0 && is_interesting(ItemId{x})) items.push_back(ItemId{x});
      }
    }

    if (std::holds_alternative<DisjointPrefix>(rule_)) {
      initial_mass_[e] = static_cast<double>(items.size()) / static_cast<double>(uniform_support_);
    } else {
      double mass = 0.0;
      for (ItemId id : items) mass += probability(e, id);
      initial_mass_[e] = mass + tail_[e];
    }
  }

  if (!finite_) {
    disjoint_ = k == 1;
  } else {
    std::unordered_map<ItemId, std::size_t, ItemIdHash> owner;
    disjoint_ = true;
    for (std::size_t e = 0; e < k && disjoint_; ++e) {
      for (ItemId id : interesting_[e]) {
        auto [it, inserted] = owner.emplace(id, e);
        if (!inserted && it->second != e) {
          disjoint_ = false;
          break;
        }
      }
    }
  }
}

ProblemInstance ProblemInstance::uniform_disjoint(std::uint64_t support,
                                                  const std::vector<std::uint64_t>& interesting_counts) {
  std::vector<ExpertSpec> experts;
  experts.reserve(interesting_counts.size());
  for (std::uint64_t q : interesting_counts) experts.emplace_back(UniformDisjoint{support, q});
  return ProblemInstance(std::move(experts), DisjointPrefix{});
}

ProblemInstance ProblemInstance::geometric_primes(const std::vector<double>& means,
                                                  double truncation_epsilon) {
  std::vector<ExpertSpec> experts;
  experts.reserve(means.size());
  for (double m : means) experts.emplace_back(Geometric{m});
  return ProblemInstance(std::move(experts), Primes{}, truncation_epsilon);
}

ProblemInstance ProblemInstance::categorical(std::vector<std::vector<double>> probabilities,
                                             const std::vector<std::uint64_t>& interesting) {
  std::vector<ExpertSpec> experts;
  experts.reserve(probabilities.size());
  for (auto& p : probabilities) experts.emplace_back(Categorical{std::move(p)});
  ExplicitItems rule;
  for (std::uint64_t x : interesting) rule.items.insert(ItemId{x});
  return ProblemInstance(std::move(experts), std::move(rule));
}

bool ProblemInstance::is_interesting(ItemId item) const {
  return std::visit(overloaded{
                        [&](const DisjointPrefix&) {
                          const std::uint64_t e = item.value / uniform_support_;
                          if (e >= experts_.size()) return false;
                          const auto& u = std::get<UniformDisjoint>(experts_[e]);
                          return item.value % uniform_support_ < u.interesting;
                        },
                        [&](const Primes&) { return is_prime(item.value); },
                        [&](const ExplicitItems& s) { return s.items.contains(item); },
                    },
                    rule_);
}

double ProblemInstance::probability(std::size_t e, ItemId item) const {
  return std::visit(overloaded{
                        [&](const UniformDisjoint& u) {
                          return item.value / u.support == e ? 1.0 / static_cast<double>(u.support) : 0.0;
                        },
                        [&](const Geometric& g) { return geometric_pmf(g, item.value); },
                        [&](const Categorical& c) {
                          return item.value < c.probabilities.size() ? c.probabilities[item.value] : 0.0;
                        },
                    },
                    experts_.at(e));
}

ItemId ProblemInstance::sample(std::size_t e, RngStream& stream) const {
  return std::visit(overloaded{
                        [&](const UniformDisjoint& u) {
                          return ItemId{e * u.support + stream.next_below(u.support)};
                        },
                        [&](const Geometric& g) {
                          const double u = stream.next_unit();
                          const double p = geometric_success(g);
                          if (p >= 1.0) return ItemId{1};
                          const double k = std::floor(std::log(u) / std::log1p(-p));
                          return ItemId{1 + static_cast<std::uint64_t>(k)};
                        },
                        [&](const Categorical& c) {
                          const double u = stream.next_unit();
                          const auto& cum = cumulative_[e];
                          auto it = std::upper_bound(cum.begin(), cum.end(), u);
                          if (it == cum.end()) {
                            // u fell in the rounding gap above the final partial sum
                            std::size_t last = c.probabilities.size() - 1;
                            while (last > 0 && c.probabilities[last] == 0.0) --last;
                            return ItemId{last};
                          }
                          return ItemId{static_cast<std::uint64_t>(it - cum.begin())};
                        },
                    },
                    experts_.at(e));
}

std::vector<double> ProblemInstance::interesting_proportions() const {
  if (!std::holds_alternative<DisjointPrefix>(rule_))
    throw InvalidInstance("interesting proportions are defined for uniform disjoint instances only");
  std::vector<double> q;
  q.reserve(experts_.size());
  for (const auto& spec : experts_) {
    const auto& u = std::get<UniformDisjoint>(spec);
    q.push_back(static_cast<double>(u.interesting) / static_cast<double>(u.support));
  }
  return q;
}

std::vector<double> seven_expert_proportions() {
  return {0.512, 0.256, 0.128, 0.064, 0.032, 0.016, 0.008};
}

ProblemInstance make_seven_expert_instance(std::uint64_t support) {
  std::vector<std::uint64_t> counts;
  for (double q : seven_expert_proportions()) {
    const auto count = static_cast<std::uint64_t>(std::llround(q * static_cast<double>(support)));
    if (count == 0)
      throw InvalidInstance("support size " + std::to_string(support) +
                            " leaves an expert without interesting items");
    counts.push_back(count);
  }
  return ProblemInstance::uniform_disjoint(support, counts);
}

ProblemInstance make_prime_instance(const std::vector<double>& means) {
  return ProblemInstance::geometric_primes(means);
}

double true_missing_mass(const ProblemInstance& instance, std::size_t e, const ItemSet& discovered) {
  if (std::holds_alternative<DisjointPrefix>(instance.rule())) {
    std::uint64_t remaining = 0;
    for (ItemId id : instance.interesting_items(e)) remaining += discovered.contains(id) ? 0 : 1;
    return static_cast<double>(remaining) / static_cast<double>(instance.uniform_support());
  }
  double mass = 0.0;
  for (ItemId id : instance.interesting_items(e)) {
    if (!discovered.contains(id)) mass += instance.probability(e, id);
  }
  return mass + instance.tail_mass(e);
}

MissingMassTracker::MissingMassTracker(const ProblemInstance& instance)
    : instance_(&instance), prefix_rule_(std::holds_alternative<DisjointPrefix>(instance.rule())) {
  const std::size_t k = instance.num_experts();
  masses_.resize(k);
  remaining_.resize(k);
  for (std::size_t e = 0; e < k; ++e) {
    masses_[e] = instance.initial_missing_mass(e);
    remaining_[e] = instance.interesting_items(e).size();
  }
}

bool MissingMassTracker::observe(ItemId item) {
  if (!instance_->is_interesting(item)) return false;
  if (!discovered_.insert(item).second) return false;
  if (prefix_rule_) {
    const std::size_t owner = item.value / instance_->uniform_support();
    --remaining_[owner];
    masses_[owner] =
        static_cast<double>(remaining_[owner]) / static_cast<double>(instance_->uniform_support());
    return true;
  }
  for (std::size_t e = 0; e < masses_.size(); ++e) {
    if (item.value > instance_->support_cutoff(e)) continue;
    const double p = instance_->probability(e, item);
    if (p <= 0.0) continue;
    // once every enumerated item is found only the tail is left; avoids round-off residue
    masses_[e] = --remaining_[e] == 0 ? instance_->tail_mass(e) : std::max(0.0, masses_[e] - p);
  }
  return true;
}

double MissingMassTracker::max_mass() const noexcept {
  return *std::max_element(masses_.begin(), masses_.end());
}

}  // namespace discovery
