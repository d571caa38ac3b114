#include "discovery/app/presets.hpp"

#include <array>
#include <utility>

namespace discovery::app {
namespace {

// Byte-identical copies of configs/*.json; a unit test keeps them in sync.
constexpr std::string_view kFig1 = R"json({
  "experiments": [
    {
      "name": "fig1_N128",
      "instance": {"kind": "seven_expert", "N": 128},
      "policies": [{"kind": "good_ucb", "C": 0.5}, {"kind": "ocl"}, {"kind": "uniform"}],
      "horizon": 768,
      "replicates": 1,
      "lambdas": [0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 0.35, 0.4, 0.45, 0.5],
      "master_seed": 20111,
      "output_dir": "out/fig1",
      "emit_svg": true,
      "csv_stride": 1
    },
    {
      "name": "fig1_N500",
      "instance": {"kind": "seven_expert", "N": 500},
      "policies": [{"kind": "good_ucb", "C": 0.5}, {"kind": "ocl"}, {"kind": "uniform"}],
      "horizon": 3000,
      "replicates": 1,
      "lambdas": [0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 0.35, 0.4, 0.45, 0.5],
      "master_seed": 20111,
      "output_dir": "out/fig1",
      "emit_svg": true,
      "csv_stride": 5
    },
    {
      "name": "fig1_N1000",
      "instance": {"kind": "seven_expert", "N": 1000},
      "policies": [{"kind": "good_ucb", "C": 0.5}, {"kind": "ocl"}, {"kind": "uniform"}],
      "horizon": 6000,
      "replicates": 1,
      "lambdas": [0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 0.35, 0.4, 0.45, 0.5],
      "master_seed": 20111,
      "output_dir": "out/fig1",
      "emit_svg": true,
      "csv_stride": 10
    },
    {
      "name": "fig1_N10000",
      "instance": {"kind": "seven_expert", "N": 10000},
      "policies": [{"kind": "good_ucb", "C": 0.5}, {"kind": "ocl"}, {"kind": "uniform"}],
      "horizon": 60000,
      "replicates": 1,
      "lambdas": [0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 0.35, 0.4, 0.45, 0.5],
      "master_seed": 20111,
      "output_dir": "out/fig1",
      "emit_svg": true,
      "csv_stride": 100
    }
  ]
}
)json";

constexpr std::string_view kFig2 = R"json({
  "experiments": [
    {
      "name": "fig2_C0.1",
      "instance": {"kind": "prime", "means": [100, 300, 500, 700, 900]},
      "policies": [{"kind": "good_ucb", "C": 0.1}, {"kind": "ocl"}, {"kind": "uniform"}],
      "horizon": 200000,
      "replicates": 1,
      "master_seed": 20111,
      "output_dir": "out/fig2",
      "emit_svg": true,
      "csv_stride": 1000
    },
    {
      "name": "fig2_C0.02",
      "instance": {"kind": "prime", "means": [100, 300, 500, 700, 900]},
      "policies": [{"kind": "good_ucb", "C": 0.02}, {"kind": "ocl"}, {"kind": "uniform"}],
      "horizon": 200000,
      "replicates": 1,
      "master_seed": 20111,
      "output_dir": "out/fig2",
      "emit_svg": true,
      "csv_stride": 1000
    }
  ]
}
)json";

constexpr std::string_view kMacro7 = R"json({
  "profile": [0.512, 0.256, 0.128, 0.064, 0.032, 0.016, 0.008],
  "lambdas": [0.01, 0.02, 0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 0.35, 0.4, 0.45, 0.5],
  "t_grid": {"start": 0, "stop": 12, "count": 121},
  "output_dir": "out/macro7"
}
)json";

constexpr std::string_view kCoverage = R"json({
  "instance": {"kind": "uniform_disjoint", "N": 1000, "Q": [512]},
  "sample_sizes": [10, 100, 1000],
  "deltas": [0.01, 0.05, 0.1],
  "replicates": 10000,
  "master_seed": 20111,
  "output_dir": "out/coverage"
}
)json";

constexpr std::array<std::pair<std::string_view, std::string_view>, 4> kPresets{{
    {"fig1", kFig1}, {"fig2", kFig2}, {"macro7", kMacro7}, {"coverage", kCoverage}}};

}  // namespace

std::optional<std::string_view> preset_text(std::string_view name) {
  for (const auto& [key, text] : kPresets) {
    if (key == name) return text;
  }
  return std::nullopt;
}

std::vector<std::string_view> preset_names() {
  std::vector<std::string_view> names;
  for (const auto& entry : kPresets) names.push_back(entry.first);
  return names;
}

}  // namespace discovery::app
