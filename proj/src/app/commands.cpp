#include "discovery/app/commands.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <ostream>
#include <thread>

#include "discovery/app/csv.hpp"
#include "discovery/app/svg.hpp"
#include "discovery/errors.hpp"
#include "discovery/estimator.hpp"
#include "discovery/macroscopic.hpp"

namespace discovery::app {
namespace {

std::vector<std::string> header_with_experts(std::vector<std::string> head, const std::string& prefix,
                                             std::size_t k) {
  for (std::size_t e = 1; e <= k; ++e) head.push_back(prefix + std::to_string(e));
  return head;
}

std::string mass_trace_csv(const ExperimentConfig& config, const ProblemInstance& instance,
                           const std::vector<PolicyKind>& policies) {
  const std::size_t k = instance.num_experts();
  CsvTable table(header_with_experts({"t", "policy", "replicate"}, "R_", k));
  const auto grid = stride_grid(config.horizon, config.csv_stride);
  SamplePathCache paths(instance, config.master_seed, 0);
  for (const auto& policy : policies) {
    const Trajectory traj = run_episode(instance, policy, config.horizon, paths, {true});
    const std::string name = policy_name(policy);
    for (std::uint64_t t : grid) {
      table.cell(t).cell(name).cell(std::uint64_t{0});
      for (std::size_t e = 0; e < k; ++e) table.cell(traj.mass_trace[(t - 1) * k + e]);
      table.end_row();
    }
  }
  return table.text();
}

}  // namespace

std::string trajectory_csv(const AggregateReport& report) {
  const std::size_t k = report.num_experts;
  CsvTable table(header_with_experts({"t", "policy", "replicate", "F"}, "n_", k));
  for (const auto& agg : report.policies) {
    for (std::size_t r = 0; r < report.replicates; ++r) {
      for (std::size_t g = 0; g < report.time_grid.size(); ++g) {
        table.cell(report.time_grid[g]).cell(agg.name).cell(std::uint64_t{r}).cell(agg.f_at_grid[r][g]);
        for (std::size_t e = 0; e < k; ++e) table.cell(std::uint64_t{agg.pulls_at_grid[r][g * k + e]});
        table.end_row();
      }
    }
  }
  return table.text();
}

std::string summary_csv(const AggregateReport& report) {
  CsvTable table({"policy", "lambda", "replicate", "T"});
  for (const auto& agg : report.policies) {
    for (std::size_t l = 0; l < report.lambdas.size(); ++l) {
      for (std::size_t r = 0; r < report.replicates; ++r) {
        table.cell(agg.name).cell(report.lambdas[l]).cell(std::uint64_t{r}).cell(agg.waiting[r][l]);
        table.end_row();
      }
    }
  }
  if (!report.omniscient.empty()) {
    for (std::size_t l = 0; l < report.lambdas.size(); ++l) {
      for (std::size_t r = 0; r < report.replicates; ++r) {
        table.cell("omniscient").cell(report.lambdas[l]).cell(std::uint64_t{r}).cell(report.omniscient[r][l]);
        table.end_row();
      }
    }
  }
  return table.text();
}

std::string f_stats_csv(const AggregateReport& report) {
  CsvTable table({"t", "policy", "mean", "median", "q05", "q95"});
  for (const auto& agg : report.policies) {
    for (std::size_t g = 0; g < report.time_grid.size(); ++g) {
      table.cell(report.time_grid[g]).cell(agg.name).cell(agg.f_mean[g]).cell(agg.f_median[g]);
      table.cell(agg.f_q05[g]).cell(agg.f_q95[g]);
      table.end_row();
    }
  }
  return table.text();
}

std::string f_plot_svg(const ExperimentConfig& config, const AggregateReport& report) {
  Plot plot;
  const bool single = report.replicates == 1;
  plot.title = config.name + (single ? " (single run)" : " (mean of " + std::to_string(report.replicates) + " runs)");
  plot.x_label = "t";
  plot.y_label = single ? "items found F(t)" : "mean items found F(t)";
  for (const auto& agg : report.policies) {
    Series s;
    s.label = agg.name;
    s.style = style_for_policy(agg.name);
    s.x.push_back(0.0);
    s.y.push_back(0.0);
    for (std::size_t g = 0; g < report.time_grid.size(); ++g) {
      s.x.push_back(static_cast<double>(report.time_grid[g]));
      s.y.push_back(single ? static_cast<double>(agg.f_at_grid[0][g]) : agg.f_mean[g]);
    }
    plot.series.push_back(std::move(s));
  }
  return render_svg(plot);
}

std::vector<std::filesystem::path> run_experiment(const ExperimentConfig& config, std::ostream& log) {
  const ProblemInstance instance = config.instance.build();
  std::vector<PolicyKind> policies;
  for (const auto& spec : config.policies) policies.push_back(spec.resolve(instance, config.horizon));

  MonteCarloOptions options;
  options.threads = config.threads;
  options.time_grid = stride_grid(config.horizon, config.csv_stride);
  const AggregateReport report = monte_carlo(instance, policies, config.horizon, config.lambdas,
                                             config.replicates, config.master_seed, options);

  std::vector<std::filesystem::path> written;
  auto emit = [&](const std::string& suffix, const std::string& text) {
    const auto path = config.output_dir / (config.name + suffix);
    write_file(path, text);
    written.push_back(path);
  };
  emit("_trajectory.csv", trajectory_csv(report));
  emit("_summary.csv", summary_csv(report));
  if (config.replicates > 1) emit("_f_stats.csv", f_stats_csv(report));
  if (config.emit_mass_trace) emit("_mass_trace.csv", mass_trace_csv(config, instance, policies));
  if (config.emit_svg) emit("_F.svg", f_plot_svg(config, report));
  for (const auto& p : written) log << "wrote " << p.string() << '\n';
  return written;
}

int cmd_simulate(const SimulateConfig& config, std::ostream& log) {
  for (const auto& experiment : config.experiments) run_experiment(experiment, log);
  return kExitOk;
}

int cmd_macroscopic(const MacroscopicConfig& config, std::ostream& log) {
  const MacroscopicProfile profile(config.profile);

  CsvTable lambda_table({"lambda", "T_limit", "T_uniform_limit"});
  for (double lambda : config.lambdas) {
    lambda_table.cell(lambda).cell(limit_T(profile, lambda)).cell(limit_T_uniform(profile, lambda));
    lambda_table.end_row();
  }
  CsvTable t_table({"t", "I", "F_limit", "r_star", "Lambda"});
  for (double t : config.t_grid) {
    t_table.cell(t).cell(std::uint64_t{active_index(profile, t)}).cell(limit_F(profile, t));
    t_table.cell(r_star(profile, t)).cell(lambda_of_t(profile, t));
    t_table.end_row();
  }
  CsvTable breakpoint_table({"i", "t_i"});
  const auto breaks = profile.breakpoints();
  for (std::size_t i = 0; i < breaks.size(); ++i) {
    breakpoint_table.cell(std::uint64_t{i + 1}).cell(breaks[i]);
    breakpoint_table.end_row();
  }

  const auto dir = config.output_dir;
  lambda_table.write(dir / "macroscopic_lambda.csv");
  t_table.write(dir / "macroscopic_t.csv");
  breakpoint_table.write(dir / "macroscopic_breakpoints.csv");
  for (const char* name : {"macroscopic_lambda.csv", "macroscopic_t.csv", "macroscopic_breakpoints.csv"})
    log << "wrote " << (dir / name).string() << '\n';
  return kExitOk;
}

double CoverageCell::threshold() const {
  const double se = std::sqrt(delta * (1.0 - delta) / static_cast<double>(trials));
  return 1.0 - delta - 3.0 * se;
}

std::vector<CoverageCell> coverage_experiment(const ProblemInstance& instance,
                                              const std::vector<std::uint64_t>& sample_sizes,
                                              const std::vector<double>& deltas, std::uint64_t replicates,
                                              std::uint64_t master_seed, std::size_t threads) {
  if (!instance.disjoint_interesting_supports())
    throw AssumptionViolated("coverage runs need disjoint interesting supports");
  if (replicates == 0) throw std::invalid_argument("at least one replicate is required");
  for (double d : deltas) {
    if (!(d > 0.0 && d < 1.0)) throw InvalidDelta("delta must lie in (0,1)");
  }
  std::vector<std::uint64_t> sizes;
  for (std::uint64_t n : sample_sizes) {
    if (n > 0) sizes.push_back(n);
  }
  std::sort(sizes.begin(), sizes.end());
  sizes.erase(std::unique(sizes.begin(), sizes.end()), sizes.end());

  const std::size_t k = instance.num_experts();
  const std::size_t cells = sizes.size() * deltas.size();
  // covered[r][cell] counts experts whose interval held; summed in replicate order below.
  std::vector<std::vector<std::uint32_t>> covered(replicates, std::vector<std::uint32_t>(cells, 0));

  auto run_replicate = [&](std::uint64_t r) {
    for (std::size_t e = 0; e < k; ++e) {
      RngStream stream(master_seed, r, e);
      HapaxTracker hapaxes(1);
      MissingMassTracker masses(instance);
      std::uint64_t drawn = 0;
      for (std::size_t s = 0; s < sizes.size(); ++s) {
        for (; drawn < sizes[s]; ++drawn) {
          const ItemId item = instance.sample(e, stream);
          hapaxes.record(0, item, instance.is_interesting(item));
          masses.observe(item);
        }
        const double truth = masses.mass(e);
        const double r_hat = hapaxes.estimate(0);
        for (std::size_t d = 0; d < deltas.size(); ++d) {
          if (confidence_interval(r_hat, sizes[s], deltas[d]).contains(truth)) ++covered[r][s * deltas.size() + d];
        }
      }
    }
  };

  const std::size_t workers = std::max<std::size_t>(1, std::min<std::uint64_t>(threads, replicates));
  if (workers == 1) {
    for (std::uint64_t r = 0; r < replicates; ++r) run_replicate(r);
  } else {
    std::atomic<std::uint64_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::uint64_t r = next++; r < replicates; r = next++) {
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

  std::vector<CoverageCell> result;
  for (std::size_t s = 0; s < sizes.size(); ++s) {
    for (std::size_t d = 0; d < deltas.size(); ++d) {
      CoverageCell cell{sizes[s], deltas[d], 0, replicates * k};
      for (std::uint64_t r = 0; r < replicates; ++r) cell.covered += covered[r][s * deltas.size() + d];
      result.push_back(cell);
    }
  }
  return result;
}

std::string coverage_csv(const std::vector<CoverageCell>& cells) {
  CsvTable table({"n", "delta", "empirical_coverage", "replicates"});
  for (const auto& c : cells) {
    table.cell(c.n).cell(c.delta).cell(c.coverage()).cell(c.trials);
    table.end_row();
  }
  return table.text();
}

int cmd_concentration(const ConcentrationConfig& config, std::ostream& log) {
  const ProblemInstance instance = config.instance.build();
  const auto cells = coverage_experiment(instance, config.sample_sizes, config.deltas, config.replicates,
                                         config.master_seed, config.threads);
  const auto path = config.output_dir / "concentration.csv";
  write_file(path, coverage_csv(cells));
  log << "wrote " << path.string() << '\n';
  int status = kExitOk;
  for (const auto& c : cells) {
    if (!c.passes()) {
      log << "coverage violation: n=" << c.n << " delta=" << format_double(c.delta)
          << " coverage=" << format_double(c.coverage()) << " threshold=" << format_double(c.threshold()) << '\n';
      status = kExitCheckFailed;
    }
  }
  return status;
}

int guarded(const std::function<int()>& body, std::ostream& err) {
  try {
    return body();
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntimeError;
  }
}

}  // namespace discovery::app
