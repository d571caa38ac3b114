// discovery: runs discovery simulations, macroscopic limit tables and
// interval coverage checks from JSON configs or the bundled presets.
//
//   discovery simulate --config configs/fig1.json --threads 4 --svg
//   discovery reproduce fig2 --out out
//   discovery macroscopic                  (macro7 preset)
//   discovery concentration --seed 7       (coverage preset)

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "discovery/app/commands.hpp"
#include "discovery/app/config.hpp"
#include "discovery/app/presets.hpp"

namespace {

using namespace discovery::app;

struct CommonFlags {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<std::size_t> threads;
  bool svg = false;

  Overrides overrides() const {
    Overrides o;
    o.seed = seed;
    if (out) o.output_dir = *out;
    o.threads = threads;
    o.svg = svg;
    return o;
  }
};

void add_common_flags(CLI::App* cmd, CommonFlags& flags, bool with_config) {
  if (with_config) cmd->add_option("--config", flags.config_path, "JSON config file")->check(CLI::ExistingFile);
  cmd->add_option("--seed", flags.seed, "master seed override");
  cmd->add_option("--out", flags.out, "output directory override");
  cmd->add_option("--threads", flags.threads, "worker threads")->check(CLI::PositiveNumber);
  cmd->add_flag("--svg", flags.svg, "also write SVG plots");
}

std::string config_text(const CommonFlags& flags, const char* preset) {
  if (!flags.config_path.empty()) return read_text_file(flags.config_path);
  return std::string(*preset_text(preset));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Discovery with probabilistic expert advice: simulations and limit tables"};
  app.require_subcommand(1);

  CommonFlags flags;
  std::string figure;

  auto* simulate = app.add_subcommand("simulate", "run the experiments of a config file");
  add_common_flags(simulate, flags, true);
  simulate->get_option("--config")->required();

  auto* macroscopic = app.add_subcommand("macroscopic", "tabulate macroscopic limits (default: macro7 preset)");
  add_common_flags(macroscopic, flags, true);

  auto* concentration =
      app.add_subcommand("concentration", "empirical interval coverage (default: coverage preset)");
  add_common_flags(concentration, flags, true);

  auto* reproduce = app.add_subcommand("reproduce", "run a bundled figure preset");
  reproduce->add_option("figure", figure, "fig1 or fig2")->required()->check(CLI::IsMember({"fig1", "fig2"}));
  add_common_flags(reproduce, flags, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfigError;
  }

  return guarded(
      [&]() -> int {
        if (simulate->parsed() || reproduce->parsed()) {
          const std::string text =
              simulate->parsed() ? read_text_file(flags.config_path) : std::string(*preset_text(figure));
          auto config = parse_simulate_config(text);
          apply(flags.overrides(), config);
          return cmd_simulate(config, std::cout);
        }
        if (macroscopic->parsed()) {
          auto config = parse_macroscopic_config(config_text(flags, "macro7"));
          apply(flags.overrides(), config);
          return cmd_macroscopic(config, std::cout);
        }
        auto config = parse_concentration_config(config_text(flags, "coverage"));
        apply(flags.overrides(), config);
        return cmd_concentration(config, std::cout);
      },
      std::cerr);
}
