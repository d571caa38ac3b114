#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "discovery/experts.hpp"
#include "discovery/policies.hpp"

namespace discovery::app {

/// Invalid or unreadable configuration; maps to exit status 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Instance section of a config file.
///
///   {"kind": "seven_expert", "N": 1000}
///   {"kind": "uniform_disjoint", "N": 1000, "Q": [512, 256]}
///   {"kind": "prime", "means": [100, 300, 500, 700, 900]}
///   {"kind": "categorical", "probabilities": [[...], ...], "interesting": [1, 2]}
struct InstanceDescription {
  std::string kind;
  std::uint64_t support = 0;
  std::vector<std::uint64_t> interesting_counts;
  std::vector<double> means;
  std::vector<std::vector<double>> probabilities;
  std::vector<std::uint64_t> interesting_items;

  ProblemInstance build() const;
};

/// One policy entry: {"kind": "good_ucb", "C": 0.5} | {"kind": "ocl"} |
/// {"kind": "uniform"} | {"kind": "ool"}. "C" may also be the string
/// "theoretical" for (1 + sqrt 2) sqrt 3.
struct PolicySpec {
  std::string kind;
  double c = kDefaultUcbScale;

  /// The open-loop allocation is derived from the instance profile and horizon.
  PolicyKind resolve(const ProblemInstance& instance, std::uint64_t horizon) const;
};

struct ExperimentConfig {
  std::string name = "experiment";
  InstanceDescription instance;
  std::vector<PolicySpec> policies;
  std::uint64_t horizon = 0;
  std::uint64_t replicates = 1;
  std::vector<double> lambdas;
  std::uint64_t master_seed = 1;
  std::filesystem::path output_dir = "out";
  bool emit_svg = false;
  bool emit_mass_trace = false;
  std::uint64_t csv_stride = 1;
  std::size_t threads = 1;
};

struct SimulateConfig {
  std::vector<ExperimentConfig> experiments;
};

struct MacroscopicConfig {
  std::vector<double> profile;
  std::vector<double> lambdas;
  std::vector<double> t_grid;
  std::filesystem::path output_dir = "out";
};

struct ConcentrationConfig {
  InstanceDescription instance;
  std::vector<std::uint64_t> sample_sizes;
  std::vector<double> deltas;
  std::uint64_t replicates = 10000;
  std::uint64_t master_seed = 1;
  std::filesystem::path output_dir = "out";
  std::size_t threads = 1;
};

/// Command-line overrides applied on top of a parsed config.
struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::filesystem::path> output_dir;
  std::optional<std::size_t> threads;
  bool svg = false;
};

// Parsers reject unknown keys, wrong types and out-of-range values with ConfigError.
SimulateConfig parse_simulate_config(std::string_view json_text);
MacroscopicConfig parse_macroscopic_config(std::string_view json_text);
ConcentrationConfig parse_concentration_config(std::string_view json_text);

std::string read_text_file(const std::filesystem::path& path);

void apply(const Overrides& overrides, SimulateConfig& config);
void apply(const Overrides& overrides, MacroscopicConfig& config);
void apply(const Overrides& overrides, ConcentrationConfig& config);

}  // namespace discovery::app
