#include "discovery/simulator.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <thread>

#include "discovery/errors.hpp"

namespace discovery {

SamplePathCache::SamplePathCache(const ProblemInstance& instance, std::uint64_t master_seed,
                                 std::uint64_t replicate)
    : instance_(&instance), replicate_(replicate), paths_(instance.num_experts()) {
  streams_.reserve(instance.num_experts());
  for (std::size_t e = 0; e < instance.num_experts(); ++e) streams_.emplace_back(master_seed, replicate, e);
}

ItemId SamplePathCache::at(std::size_t e, std::size_t s) {
  auto& path = paths_.at(e);
  if (s >= path.size()) {
    const std::size_t target = (s / kBlock + 1) * kBlock;
    path.reserve(target);
    while (path.size() < target) path.push_back(instance_->sample(e, streams_[e]));
  }
  return path[s];
}

namespace {

// Which expert the policy pulls next; holds whatever per-episode state it needs.
class Selector {
 public:
  Selector(const PolicyKind& policy, std::size_t num_experts, std::size_t horizon)
      : policy_(&policy), num_experts_(num_experts) {
    if (const auto* g = std::get_if<GoodUcb>(&policy)) {
      if (!(g->c > 0.0)) throw std::invalid_argument("Good-UCB needs a positive confidence scale");
      if (horizon < num_experts)
        throw HorizonTooShort("Good-UCB needs a horizon of at least K = " + std::to_string(num_experts));
    }
    if (const auto* o = std::get_if<OpenLoopOracle>(&policy)) {
      if (o->allocation.size() != num_experts)
        throw InvalidInstance("open-loop allocation needs one entry per expert");
      const auto total = std::accumulate(o->allocation.begin(), o->allocation.end(), std::uint64_t{0});
      if (total != horizon) throw InvalidInstance("open-loop allocation must sum to the horizon");
      remaining_ = o->allocation;
    }
  }

  std::size_t next(std::uint64_t t, const HapaxTracker& tracker, const MissingMassTracker& masses) {
    if (const auto* g = std::get_if<GoodUcb>(policy_)) return good_ucb_select(tracker, t, g->c);
    if (std::holds_alternative<OracleClosedLoop>(*policy_)) return ocl_select(masses.masses());
    if (std::holds_alternative<UniformCycle>(*policy_)) return uniform_select(t, num_experts_);
    while (remaining_[cursor_] == 0) ++cursor_;
    --remaining_[cursor_];
    return cursor_;
  }

  bool needs_hapaxes() const { return std::holds_alternative<GoodUcb>(*policy_); }

 private:
  const PolicyKind* policy_;
  std::size_t num_experts_;
  std::vector<std::uint64_t> remaining_;
  std::size_t cursor_ = 0;
};

double quantile(std::vector<double> values, double p) {
  std::sort(values.begin(), values.end());
  const double pos = p * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (pos - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

}  // namespace

Trajectory run_episode(const ProblemInstance& instance, const PolicyKind& policy, std::size_t horizon,
                       SamplePathCache& paths, EpisodeOptions options) {
  const std::size_t k = instance.num_experts();
  Selector selector(policy, k, horizon);
  HapaxTracker hapaxes(k);
  MissingMassTracker masses(instance);
  std::vector<std::uint32_t> counts(k, 0);

  Trajectory traj;
  traj.num_experts = k;
  traj.pulls.reserve(horizon);
  traj.discoveries.reserve(horizon);
  traj.f_curve.reserve(horizon);
  traj.n_matrix.reserve(horizon * k);
  traj.max_mass.reserve(horizon + 1);
  if (options.record_mass_trace) traj.mass_trace.reserve(horizon * k);
  traj.max_mass.push_back(masses.max_mass());

  std::uint64_t found = 0;
  for (std::uint64_t t = 1; t <= horizon; ++t) {
    const std::size_t e = selector.next(t, hapaxes, masses);
    const ItemId item = paths.at(e, counts[e]);
    ++counts[e];
    const bool is_new = masses.observe(item);
    if (selector.needs_hapaxes()) hapaxes.record(e, item, instance.is_interesting(item));
    found += is_new ? 1 : 0;

    traj.pulls.push_back(static_cast<std::uint32_t>(e));
    traj.discoveries.push_back(is_new ? 1 : 0);
    traj.f_curve.push_back(found);
    traj.n_matrix.insert(traj.n_matrix.end(), counts.begin(), counts.end());
    traj.max_mass.push_back(masses.max_mass());
    if (options.record_mass_trace) {
      const auto m = masses.masses();
      traj.mass_trace.insert(traj.mass_trace.end(), m.begin(), m.end());
    }
  }
  return traj;
}

std::optional<std::uint64_t> waiting_time(std::span<const double> max_mass, double lambda) {
  for (std::size_t t = 0; t < max_mass.size(); ++t) {
    if (max_mass[t] <= lambda) return t;
  }
  return std::nullopt;
}

std::optional<std::int64_t> AggregateReport::coupled_gap(std::size_t policy, std::size_t replicate,
                                                         std::size_t lambda) const {
  const auto& t_policy = policies.at(policy).waiting.at(replicate).at(lambda);
  if (!t_policy || omniscient.empty()) return std::nullopt;
  return static_cast<std::int64_t>(*t_policy) - static_cast<std::int64_t>(omniscient.at(replicate).at(lambda));
}

std::vector<std::uint64_t> stride_grid(std::uint64_t horizon, std::uint64_t stride) {
  if (stride == 0) throw std::invalid_argument("grid stride must be positive");
  std::vector<std::uint64_t> grid;
  for (std::uint64_t t = stride; t <= horizon; t += stride) grid.push_back(t);
  if (grid.empty() || grid.back() != horizon) grid.push_back(horizon);
  return grid;
}

AggregateReport monte_carlo(const ProblemInstance& instance, const std::vector<PolicyKind>& policies,
                            std::size_t horizon, const std::vector<double>& lambdas, std::size_t replicates,
                            std::uint64_t master_seed, const MonteCarloOptions& options) {
  if (replicates == 0) throw std::invalid_argument("at least one replicate is required");
  const std::size_t k = instance.num_experts();

  AggregateReport report;
  report.num_experts = k;
  report.replicates = replicates;
  report.lambdas = lambdas;
  report.time_grid = options.time_grid.empty()
                         ? stride_grid(horizon, std::max<std::uint64_t>(1, horizon / 1000))
                         : options.time_grid;
  for (std::uint64_t t : report.time_grid) {
    if (t == 0 || t > horizon) throw std::invalid_argument("time grid points must lie in [1, horizon]");
  }
  const bool coupled = instance.disjoint_interesting_supports() && !lambdas.empty();
  if (coupled) report.omniscient.assign(replicates, {});

  for (const auto& policy : policies) {
    PolicyAggregate agg;
    agg.name = policy_name(policy);
    agg.f_at_grid.resize(replicates);
    agg.pulls_at_grid.resize(replicates);
    agg.waiting.resize(replicates);
    report.policies.push_back(std::move(agg));
  }

  auto run_replicate = [&](std::size_t r) {
    SamplePathCache paths(instance, master_seed, r);
    for (std::size_t p = 0; p < policies.size(); ++p) {
      const Trajectory traj = run_episode(instance, policies[p], horizon, paths, {options.record_mass_trace});
      auto& agg = report.policies[p];
      auto& f = agg.f_at_grid[r];
      auto& n = agg.pulls_at_grid[r];
      f.reserve(report.time_grid.size());
      n.reserve(report.time_grid.size() * k);
      for (std::uint64_t t : report.time_grid) {
        f.push_back(traj.f_curve[t - 1]);
        for (std::size_t e = 0; e < k; ++e) n.push_back(traj.pulls_of(e, t));
      }
      auto& w = agg.waiting[r];
      for (double lambda : lambdas) w.push_back(waiting_time(traj, lambda));
    }
    if (coupled) report.omniscient[r] = omniscient_waiting_times(instance, paths, lambdas);
  };

  const std::size_t workers = std::max<std::size_t>(1, std::min(options.threads, replicates));
  if (workers == 1) {
    for (std::size_t r = 0; r < replicates; ++r) run_replicate(r);
  } else {
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t r = next++; r < replicates; r = next++) {
          try {
            run_replicate(r);
          } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
            next = replicates;
          }
        }
      });
    }
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
  }

  // Reduction in replicate order; independent of which worker ran what.
  for (auto& agg : report.policies) {
    const std::size_t g = report.time_grid.size();
    agg.f_mean.resize(g);
    agg.f_median.resize(g);
    agg.f_q05.resize(g);
    agg.f_q95.resize(g);
    std::vector<double> column(replicates);
    for (std::size_t i = 0; i < g; ++i) {
      double sum = 0.0;
      for (std::size_t r = 0; r < replicates; ++r) {
        column[r] = static_cast<double>(agg.f_at_grid[r][i]);
        sum += column[r];
      }
      agg.f_mean[i] = sum / static_cast<double>(replicates);
      agg.f_median[i] = quantile(column, 0.5);
      agg.f_q05[i] = quantile(column, 0.05);
      agg.f_q95[i] = quantile(column, 0.95);
    }
  }
  return report;
}

}  // namespace discovery
