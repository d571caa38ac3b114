#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "discovery/app/config.hpp"
#include "discovery/experts.hpp"
#include "discovery/simulator.hpp"

namespace discovery::app {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitRuntimeError = 3;
inline constexpr int kExitCheckFailed = 4;

// CSV/SVG text for one experiment. Trajectory rows are ordered by policy,
// replicate, then t on the stride grid.
std::string trajectory_csv(const AggregateReport& report);
std::string summary_csv(const AggregateReport& report);
std::string f_stats_csv(const AggregateReport& report);
std::string f_plot_svg(const ExperimentConfig& config, const AggregateReport& report);

/// Runs one experiment and writes <output_dir>/<name>_*.csv (and .svg).
/// Returns the paths written.
std::vector<std::filesystem::path> run_experiment(const ExperimentConfig& config, std::ostream& log);

int cmd_simulate(const SimulateConfig& config, std::ostream& log);
int cmd_macroscopic(const MacroscopicConfig& config, std::ostream& log);
int cmd_concentration(const ConcentrationConfig& config, std::ostream& log);

/// One (n, delta) cell of the interval coverage experiment. `trials` counts
/// replicates times experts; every expert's n-sample estimate is one trial.
struct CoverageCell {
  std::uint64_t n = 0;
  double delta = 0.0;
  std::uint64_t covered = 0;
  std::uint64_t trials = 0;

  double coverage() const { return static_cast<double>(covered) / static_cast<double>(trials); }
  /// 1 - delta minus three binomial standard errors at the nominal level.
  double threshold() const;
  bool passes() const { return coverage() >= threshold(); }
};

/// For every replicate and expert, draws max(sample_sizes) items from the
/// expert's own stream and checks whether the interval around the
/// Good-Turing estimate after n draws contains the true missing mass.
/// n = 0 entries are skipped. Needs disjoint interesting supports.
std::vector<CoverageCell> coverage_experiment(const ProblemInstance& instance,
                                              const std::vector<std::uint64_t>& sample_sizes,
                                              const std::vector<double>& deltas, std::uint64_t replicates,
                                              std::uint64_t master_seed, std::size_t threads = 1);

std::string coverage_csv(const std::vector<CoverageCell>& cells);

/// Calls `body`, mapping ConfigError to 2 and any other exception to 3 after
/// printing a diagnostic to `err`.
int guarded(const std::function<int()>& body, std::ostream& err);

}  // namespace discovery::app
