#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include "discovery/app/commands.hpp"
#include "discovery/app/config.hpp"
#include "discovery/app/csv.hpp"
#include "discovery/app/presets.hpp"
#include "discovery/app/svg.hpp"

using namespace discovery;
using namespace discovery::app;

namespace {

namespace fs = std::filesystem;

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("discovery_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::size_t start = 0;
  while (start < text.size()) {
    const auto end = text.find('\n', start);
    if (end == std::string::npos) throw std::runtime_error("last line not LF-terminated");
    std::vector<std::string> cells;
    std::stringstream line(text.substr(start, end - start));
    std::string cell;
    while (std::getline(line, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
    start = end + 1;
  }
  return rows;
}

// Minimal structural XML check: every start tag is closed in order,
// attributes are quoted, and no external references appear.
bool well_formed_svg(const std::string& svg, std::string& why) {
  if (svg.find("href") != std::string::npos || svg.find("url(") != std::string::npos ||
      svg.find("<script") != std::string::npos) {
    why = "external reference or script";
    return false;
  }
  std::vector<std::string> stack;
  std::size_t pos = 0;
  bool saw_root = false;
  while ((pos = svg.find('<', pos)) != std::string::npos) {
    const auto close = svg.find('>', pos);
    if (close == std::string::npos) {
      why = "unterminated tag";
      return false;
    }
    std::string tag = svg.substr(pos + 1, close - pos - 1);
    pos = close + 1;
    if (tag.starts_with("?")) continue;
    if (tag.starts_with("/")) {
      if (stack.empty() || stack.back() != tag.substr(1)) {
        why = "mismatched </" + tag.substr(1) + ">";
        return false;
      }
      stack.pop_back();
      continue;
    }
    const bool self_closing = tag.ends_with("/");
    const std::string name = tag.substr(0, tag.find_first_of(" /"));
    if (!std::regex_match(name, std::regex("[a-z]+"))) {
      why = "bad tag name " + name;
      return false;
    }
    if (std::count(tag.begin(), tag.end(), '"') % 2 != 0) {
      why = "unbalanced quotes in <" + name + ">";
      return false;
    }
    if (stack.empty()) {
      if (saw_root || name != "svg") {
        why = "root element must be a single <svg>";
        return false;
      }
      saw_root = true;
    }
    if (!self_closing) stack.push_back(name);
  }
  if (!stack.empty()) {
    why = "unclosed <" + stack.back() + ">";
    return false;
  }
  return saw_root;
}

const char* kSmallConfig = R"({
  "name": "small",
  "instance": {"kind": "seven_expert", "N": 128},
  "policies": [{"kind": "good_ucb"}, {"kind": "ocl"}, {"kind": "uniform"}, {"kind": "ool"}],
  "horizon": 900,
  "replicates": 4,
  "lambdas": [0.1, 0.3],
  "master_seed": 5,
  "csv_stride": 10,
  "emit_svg": true,
  "emit_mass_trace": true
})";

}  // namespace

TEST(Config, ParsesSingleExperiment) {
  const auto cfg = parse_simulate_config(kSmallConfig);
  ASSERT_EQ(cfg.experiments.size(), 1u);
  const auto& e = cfg.experiments[0];
  EXPECT_EQ(e.name, "small");
  EXPECT_EQ(e.policies.size(), 4u);
  EXPECT_DOUBLE_EQ(e.policies[0].c, 0.5);
  EXPECT_EQ(e.horizon, 900u);
  EXPECT_EQ(e.replicates, 4u);
  EXPECT_TRUE(e.emit_mass_trace);
}

TEST(Config, TheoreticalScale) {
  const auto cfg = parse_simulate_config(R"({"instance": {"kind": "seven_expert", "N": 128},
    "policies": [{"kind": "good_ucb", "C": "theoretical"}], "horizon": 10})");
  EXPECT_DOUBLE_EQ(cfg.experiments[0].policies[0].c, (1 + std::sqrt(2.0)) * std::sqrt(3.0));
}

TEST(Config, RejectsInvalidInput) {
  const std::vector<std::string> bad{
      R"({"instance": {"kind": "seven_expert", "N": 128}, "policies": [], "horizon": 10})",
      R"({"instance": {"kind": "seven_expert", "N": 128}, "policies": [{"kind": "ocl"}], "horizon": 10, "seed": 3})",
      R"({"instance": {"kind": "seven_expert", "N": 128, "Q": [1]}, "policies": [{"kind": "ocl"}], "horizon": 10})",
      R"({"instance": {"kind": "seven_expert", "N": 10}, "policies": [{"kind": "ocl"}], "horizon": 10})",
      R"({"instance": {"kind": "nope"}, "policies": [{"kind": "ocl"}], "horizon": 10})",
      R"({"instance": {"kind": "seven_expert", "N": 128}, "policies": [{"kind": "good_ucb", "C": -1}], "horizon": 10})",
      R"({"instance": {"kind": "seven_expert", "N": 128}, "policies": [{"kind": "good_ucb"}], "horizon": 3})",
      R"({"instance": {"kind": "seven_expert", "N": 128}, "policies": [{"kind": "ocl"}], "horizon": 0})",
      R"({"instance": {"kind": "seven_expert", "N": 128}, "policies": [{"kind": "ocl"}], "horizon": "10"})",
      R"({"instance": {"kind": "seven_expert", "N": 128}, "policies": [{"kind": "ocl"}], "horizon": 10, "lambdas": [1.5]})",
      R"({"instance": {"kind": "prime", "means": [10]}, "policies": [{"kind": "ool"}], "horizon": 10})",
      R"({"instance": {"kind": "seven_expert", "N": 128}, "policies": [{"kind": "ocl"}])",
      R"({"experiments": []})",
  };
  for (const auto& text : bad) EXPECT_THROW(parse_simulate_config(text), ConfigError) << text;

  EXPECT_THROW(parse_macroscopic_config(R"({"profile": [0.2, 0.5]})"), ConfigError);
  EXPECT_THROW(parse_macroscopic_config(R"({"profile": [0.5], "lambdas": [0.7]})"), ConfigError);
  EXPECT_THROW(parse_macroscopic_config(R"({"profile": [0.5], "tgrid": [1]})"), ConfigError);
  EXPECT_THROW(parse_concentration_config(R"({"instance": {"kind": "prime", "means": [10, 20]},
    "sample_sizes": [10], "deltas": [0.1]})"), ConfigError);
  EXPECT_THROW(parse_concentration_config(R"({"instance": {"kind": "uniform_disjoint", "N": 10, "Q": [5]},
    "sample_sizes": [10], "deltas": [0.0]})"), ConfigError);
}

TEST(Config, OverridesApply) {
  auto cfg = parse_simulate_config(kSmallConfig);
  Overrides o;
  o.seed = 99;
  o.threads = 3;
  o.output_dir = "elsewhere";
  apply(o, cfg);
  EXPECT_EQ(cfg.experiments[0].master_seed, 99u);
  EXPECT_EQ(cfg.experiments[0].threads, 3u);
  EXPECT_EQ(cfg.experiments[0].output_dir, fs::path("elsewhere"));
}

TEST(Presets, MatchShippedConfigFiles) {
  for (const auto name : preset_names()) {
    const fs::path file = fs::path(DISCOVERY_SOURCE_DIR) / "configs" / (std::string(name) + ".json");
    ASSERT_TRUE(fs::exists(file)) << file;
    EXPECT_EQ(slurp(file), std::string(*preset_text(name))) << name;
  }
  EXPECT_FALSE(preset_text("fig3").has_value());
}

TEST(Presets, ParseAndDescribeTheFigures) {
  const auto fig1 = parse_simulate_config(*preset_text("fig1"));
  ASSERT_EQ(fig1.experiments.size(), 4u);
  const std::vector<std::uint64_t> sizes{128, 500, 1000, 10000};
  for (std::size_t i = 0; i < 4; ++i) {
    const auto& e = fig1.experiments[i];
    EXPECT_EQ(e.instance.kind, "seven_expert");
    EXPECT_EQ(e.instance.support, sizes[i]);
    EXPECT_EQ(e.replicates, 1u);
    ASSERT_EQ(e.policies.size(), 3u);
    EXPECT_EQ(e.policies[0].kind, "good_ucb");
    EXPECT_DOUBLE_EQ(e.policies[0].c, 0.5);
    EXPECT_EQ(e.policies[1].kind, "ocl");
    EXPECT_EQ(e.policies[2].kind, "uniform");
  }
  const auto fig2 = parse_simulate_config(*preset_text("fig2"));
  ASSERT_EQ(fig2.experiments.size(), 2u);
  EXPECT_DOUBLE_EQ(fig2.experiments[0].policies[0].c, 0.1);
  EXPECT_DOUBLE_EQ(fig2.experiments[1].policies[0].c, 0.02);
  EXPECT_EQ(fig2.experiments[0].instance.means, (std::vector<double>{100, 300, 500, 700, 900}));
  EXPECT_NO_THROW(parse_macroscopic_config(*preset_text("macro7")));
  EXPECT_NO_THROW(parse_concentration_config(*preset_text("coverage")));
}

TEST(Csv, FormatAndRowChecks) {
  CsvTable t({"a", "b", "c"});
  t.cell(0.1).cell(std::uint64_t{7}).cell(std::optional<std::uint64_t>{});
  t.end_row();
  EXPECT_EQ(t.text(), "a,b,c\n0.1,7,NA\n");
  t.cell("x");
  EXPECT_THROW(t.end_row(), std::logic_error);
  EXPECT_EQ(format_double(2.8200217754744132), "2.8200217754744132");
  EXPECT_EQ(format_double(1e-12), "1e-12");
}

TEST(Simulate, WritesWellFormedOutputs) {
  auto cfg = parse_simulate_config(kSmallConfig);
  const auto dir = scratch_dir("simulate");
  cfg.experiments[0].output_dir = dir;
  std::ostringstream log;
  ASSERT_EQ(cmd_simulate(cfg, log), kExitOk);

  const auto traj = parse_csv(slurp(dir / "small_trajectory.csv"));
  ASSERT_FALSE(traj.empty());
  const std::vector<std::string> header{"t", "policy", "replicate", "F", "n_1", "n_2", "n_3", "n_4", "n_5", "n_6", "n_7"};
  EXPECT_EQ(traj[0], header);
  EXPECT_EQ(traj.size(), 1 + 4 * 4 * 90u);
  for (const auto& row : traj) ASSERT_EQ(row.size(), header.size());
  EXPECT_EQ(traj[1][0], "10");
  EXPECT_EQ(traj[1][1], "good_ucb(C=0.5)");

  const auto summary = parse_csv(slurp(dir / "small_summary.csv"));
  EXPECT_EQ(summary[0], (std::vector<std::string>{"policy", "lambda", "replicate", "T"}));
  EXPECT_EQ(summary.size(), 1 + 5 * 2 * 4u);  // four policies plus omniscient
  EXPECT_EQ(summary.back()[0], "omniscient");

  const auto stats = parse_csv(slurp(dir / "small_f_stats.csv"));
  EXPECT_EQ(stats[0], (std::vector<std::string>{"t", "policy", "mean", "median", "q05", "q95"}));
  const auto trace = parse_csv(slurp(dir / "small_mass_trace.csv"));
  EXPECT_EQ(trace[0].size(), 10u);

  std::string why;
  EXPECT_TRUE(well_formed_svg(slurp(dir / "small_F.svg"), why)) << why;
}

TEST(Simulate, ByteIdenticalAcrossThreadCounts) {
  auto a = parse_simulate_config(kSmallConfig);
  auto b = a;
  const auto da = scratch_dir("threads_a"), db = scratch_dir("threads_b");
  a.experiments[0].output_dir = da;
  b.experiments[0].output_dir = db;
  b.experiments[0].threads = 3;
  std::ostringstream log;
  cmd_simulate(a, log);
  cmd_simulate(b, log);
  for (const char* f : {"small_trajectory.csv", "small_summary.csv", "small_f_stats.csv", "small_mass_trace.csv", "small_F.svg"})
    EXPECT_EQ(slurp(da / f), slurp(db / f)) << f;
}

TEST(Svg, EscapesAndStyles) {
  Plot plot;
  plot.title = "a<b & \"c\"";
  plot.series.push_back({"good_ucb(C=0.5)", {0, 1, 2}, {0, 1, 1}, style_for_policy("good_ucb(C=0.5)")});
  plot.series.push_back({"ocl", {0, 1, 2}, {0, 1, 2}, style_for_policy("ocl")});
  plot.series.push_back({"uniform", {0, 1, 2}, {0, 0, 1}, style_for_policy("uniform")});
  const auto svg = render_svg(plot);
  std::string why;
  EXPECT_TRUE(well_formed_svg(svg, why)) << why;
  EXPECT_NE(svg.find("a&lt;b &amp; &quot;c&quot;"), std::string::npos);
  EXPECT_NE(svg.find("stroke-dasharray=\"8 5\""), std::string::npos);
  EXPECT_NE(svg.find("stroke-dasharray=\"2 4\""), std::string::npos);
  EXPECT_EQ(style_for_policy("ool"), LineStyle::DashDot);
}

TEST(Svg, NiceTicksCoverRange) {
  const auto ticks = nice_ticks(0, 60000);
  ASSERT_GE(ticks.size(), 3u);
  EXPECT_EQ(ticks.front(), 0.0);
  EXPECT_LE(ticks.back(), 60000.0);
}

TEST(Macroscopic, TablesContainKnownRows) {
  const auto dir = scratch_dir("macro");
  MacroscopicConfig cfg;
  cfg.profile = seven_expert_proportions();
  cfg.lambdas = {0.1};
  cfg.t_grid = {0.0, 1.0};
  cfg.output_dir = dir;
  std::ostringstream log;
  ASSERT_EQ(cmd_macroscopic(cfg, log), kExitOk);
  const auto lam = parse_csv(slurp(dir / "macroscopic_lambda.csv"));
  EXPECT_EQ(lam[0], (std::vector<std::string>{"lambda", "T_limit", "T_uniform_limit"}));
  EXPECT_EQ(lam[1][0], "0.1");
  EXPECT_NEAR(std::stod(lam[1][1]), 2.82002, 5e-6);
  EXPECT_NEAR(std::stod(lam[1][2]), 11.43203, 1e-4);
  const auto ts = parse_csv(slurp(dir / "macroscopic_t.csv"));
  EXPECT_EQ(ts[0], (std::vector<std::string>{"t", "I", "F_limit", "r_star", "Lambda"}));
  EXPECT_EQ(ts[1][0], "0");
  EXPECT_EQ(ts[1][1], "1");
  EXPECT_EQ(ts[1][2], "0");
  EXPECT_EQ(ts[2][1], "2");

  MacroscopicConfig two;
  two.profile = {0.5, 0.25};
  two.output_dir = dir;
  ASSERT_EQ(cmd_macroscopic(two, log), kExitOk);
  const auto bp = parse_csv(slurp(dir / "macroscopic_breakpoints.csv"));
  EXPECT_EQ(bp[0], (std::vector<std::string>{"i", "t_i"}));
  ASSERT_EQ(bp.size(), 2u);
  EXPECT_EQ(bp[1][0], "1");
  EXPECT_NEAR(std::stod(bp[1][1]), 0.69315, 5e-6);
}

TEST(Concentration, SkipsZeroAndPassesTrivialDelta) {
  const auto inst = ProblemInstance::uniform_disjoint(1000, {512});
  const auto cells = coverage_experiment(inst, {0, 100}, {0.999, 0.05}, 500, 3);
  ASSERT_EQ(cells.size(), 2u);
  EXPECT_EQ(cells[0].n, 100u);
  for (const auto& c : cells) {
    EXPECT_EQ(c.trials, 500u);
    EXPECT_TRUE(c.passes());
  }
  EXPECT_GE(cells[0].coverage(), 0.001);
  const auto csv = parse_csv(coverage_csv(cells));
  EXPECT_EQ(csv[0], (std::vector<std::string>{"n", "delta", "empirical_coverage", "replicates"}));
}

TEST(Concentration, CommandExitStatus) {
  ConcentrationConfig cfg;
  cfg.instance = parse_concentration_config(*preset_text("coverage")).instance;
  cfg.sample_sizes = {10, 100};
  cfg.deltas = {0.1};
  cfg.replicates = 200;
  cfg.output_dir = scratch_dir("conc");
  std::ostringstream log;
  EXPECT_EQ(cmd_concentration(cfg, log), kExitOk);
  EXPECT_TRUE(fs::exists(cfg.output_dir / "concentration.csv"));
}

TEST(Guarded, MapsExceptionsToExitCodes) {
  std::ostringstream err;
  EXPECT_EQ(guarded([] { return 0; }, err), kExitOk);
  EXPECT_EQ(guarded([]() -> int { throw ConfigError("x"); }, err), kExitConfigError);
  EXPECT_EQ(guarded([]() -> int { throw IoError("y"); }, err), kExitRuntimeError);
}

TEST(Cli, ExitCodes) {
  const auto dir = scratch_dir("cli");
  const std::string cli = DISCOVERY_CLI_PATH;
  auto run = [&](const std::string& args) {
    const int status = std::system((cli + " " + args + " > " + (dir / "log.txt").string() + " 2>&1").c_str());
    return WEXITSTATUS(status);
  };
  std::ofstream(dir / "bad.json") << R"({"instance": {"kind": "seven_expert", "N": 128}, "policies": [], "horizon": 10})";
  std::ofstream(dir / "ok.json") << R"({"name": "ok", "instance": {"kind": "seven_expert", "N": 128},
    "policies": [{"kind": "ocl"}], "horizon": 100})";
  EXPECT_EQ(run("simulate --config " + (dir / "bad.json").string()), 2);
  EXPECT_EQ(run("simulate --config " + (dir / "ok.json").string() + " --out " + dir.string() + " --svg"), 0);
  EXPECT_TRUE(fs::exists(dir / "ok_trajectory.csv"));
  EXPECT_TRUE(fs::exists(dir / "ok_F.svg"));
  EXPECT_EQ(run("macroscopic --out " + (dir / "m").string()), 0);
  EXPECT_TRUE(fs::exists(dir / "m" / "macroscopic_lambda.csv"));
  EXPECT_EQ(run("reproduce fig3"), 2);
  EXPECT_EQ(run("frobnicate"), 2);
  // Output directory blocked by a regular file.
  std::ofstream(dir / "blocker") << "x";
  EXPECT_EQ(run("macroscopic --out " + (dir / "blocker").string()), 3);
}
