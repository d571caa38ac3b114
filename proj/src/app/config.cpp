#include "discovery/app/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "discovery/errors.hpp"
#include "discovery/macroscopic.hpp"

namespace discovery::app {
namespace {

using nlohmann::json;

void require_object(const json& j, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + ": expected an object");
}

void reject_unknown_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  for (const auto& [key, value] : j.items()) {
    if (!allowed.contains(key)) throw ConfigError(where + ": unknown key '" + key + "'");
  }
}

const json& required(const json& j, const std::string& key, const std::string& where) {
  const auto it = j.find(key);
  if (it == j.end()) throw ConfigError(where + ": missing required key '" + key + "'");
  return *it;
}

std::uint64_t as_u64(const json& v, const std::string& where) {
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0))
    throw ConfigError(where + ": expected a non-negative integer");
  return v.get<std::uint64_t>();
}

double as_double(const json& v, const std::string& where) {
  if (!v.is_number()) throw ConfigError(where + ": expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw ConfigError(where + ": expected a finite number");
  return d;
}

bool as_bool(const json& v, const std::string& where) {
  if (!v.is_boolean()) throw ConfigError(where + ": expected true or false");
  return v.get<bool>();
}

std::string as_string(const json& v, const std::string& where) {
  if (!v.is_string()) throw ConfigError(where + ": expected a string");
  return v.get<std::string>();
}

template <class F>
auto as_list(const json& v, const std::string& where, F&& element) {
  if (!v.is_array()) throw ConfigError(where + ": expected a list");
  std::vector<decltype(element(v, where))> out;
  out.reserve(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(element(v[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

json parse_json(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("malformed JSON: ") + e.what());
  }
}

InstanceDescription parse_instance(const json& j, const std::string& where) {
  require_object(j, where);
  InstanceDescription d;
  d.kind = as_string(required(j, "kind", where), where + ".kind");
  if (d.kind == "seven_expert") {
    reject_unknown_keys(j, {"kind", "N"}, where);
    d.support = as_u64(required(j, "N", where), where + ".N");
  } else if (d.kind == "uniform_disjoint") {
    reject_unknown_keys(j, {"kind", "N", "Q"}, where);
    d.support = as_u64(required(j, "N", where), where + ".N");
    d.interesting_counts = as_list(required(j, "Q", where), where + ".Q", as_u64);
  } else if (d.kind == "prime") {
    reject_unknown_keys(j, {"kind", "means"}, where);
    d.means = as_list(required(j, "means", where), where + ".means", as_double);
  } else if (d.kind == "categorical") {
    reject_unknown_keys(j, {"kind", "probabilities", "interesting"}, where);
    d.probabilities = as_list(required(j, "probabilities", where), where + ".probabilities",
                              [](const json& row, const std::string& w) { return as_list(row, w, as_double); });
    d.interesting_items = as_list(required(j, "interesting", where), where + ".interesting", as_u64);
  } else {
    throw ConfigError(where + ".kind: unknown instance kind '" + d.kind + "'");
  }
  // Build once so invalid parameters surface as config errors before any run.
  try {
    (void)d.build();
  } catch (const InvalidInstance& e) {
    throw ConfigError(where + ": " + e.what());
  }
  return d;
}

PolicySpec parse_policy(const json& j, const std::string& where) {
  require_object(j, where);
  PolicySpec p;
  p.kind = as_string(required(j, "kind", where), where + ".kind");
  if (p.kind == "good_ucb") {
    reject_unknown_keys(j, {"kind", "C"}, where);
    if (const auto it = j.find("C"); it != j.end()) {
      if (it->is_string()) {
        if (it->get<std::string>() != "theoretical")
          throw ConfigError(where + ".C: expected a number or \"theoretical\"");
        p.c = kTheoreticalUcbScale;
      } else {
        p.c = as_double(*it, where + ".C");
      }
    }
    if (!(p.c > 0.0)) throw ConfigError(where + ".C: must be positive");
  } else if (p.kind == "ocl" || p.kind == "uniform" || p.kind == "ool") {
    reject_unknown_keys(j, {"kind"}, where);
  } else {
    throw ConfigError(where + ".kind: unknown policy '" + p.kind + "'");
  }
  return p;
}

ExperimentConfig parse_experiment(const json& j, const std::string& where) {
  require_object(j, where);
  reject_unknown_keys(j,
                      {"name", "instance", "policies", "horizon", "replicates", "lambdas", "master_seed",
                       "output_dir", "emit_svg", "emit_mass_trace", "csv_stride", "threads"},
                      where);
  ExperimentConfig c;
  if (j.contains("name")) c.name = as_string(j["name"], where + ".name");
  if (c.name.empty() || c.name.find_first_of("/\\") != std::string::npos)
    throw ConfigError(where + ".name: must be a non-empty file-name-safe string");
  c.instance = parse_instance(required(j, "instance", where), where + ".instance");
  c.policies = as_list(required(j, "policies", where), where + ".policies", parse_policy);
  if (c.policies.empty()) throw ConfigError(where + ".policies: at least one policy is required");
  c.horizon = as_u64(required(j, "horizon", where), where + ".horizon");
  if (c.horizon == 0) throw ConfigError(where + ".horizon: must be positive");
  if (j.contains("replicates")) c.replicates = as_u64(j["replicates"], where + ".replicates");
  if (c.replicates == 0) throw ConfigError(where + ".replicates: must be positive");
  if (j.contains("lambdas")) c.lambdas = as_list(j["lambdas"], where + ".lambdas", as_double);
  for (double l : c.lambdas) {
    if (!(l > 0.0 && l < 1.0)) throw ConfigError(where + ".lambdas: values must lie in (0,1)");
  }
  if (j.contains("master_seed")) c.master_seed = as_u64(j["master_seed"], where + ".master_seed");
  if (j.contains("output_dir")) c.output_dir = as_string(j["output_dir"], where + ".output_dir");
  if (j.contains("emit_svg")) c.emit_svg = as_bool(j["emit_svg"], where + ".emit_svg");
  if (j.contains("emit_mass_trace")) c.emit_mass_trace = as_bool(j["emit_mass_trace"], where + ".emit_mass_trace");
  if (j.contains("csv_stride")) c.csv_stride = as_u64(j["csv_stride"], where + ".csv_stride");
  if (c.csv_stride == 0) throw ConfigError(where + ".csv_stride: must be positive");
  if (j.contains("threads")) c.threads = as_u64(j["threads"], where + ".threads");
  if (c.threads == 0) throw ConfigError(where + ".threads: must be positive");

  const ProblemInstance instance = c.instance.build();
  for (std::size_t i = 0; i < c.policies.size(); ++i) {
    const auto& p = c.policies[i];
    const std::string pw = where + ".policies[" + std::to_string(i) + "]";
    if (p.kind == "good_ucb" && c.horizon < instance.num_experts())
      throw ConfigError(pw + ": Good-UCB needs horizon >= number of experts");
    if (p.kind == "ool" && !std::holds_alternative<DisjointPrefix>(instance.rule()))
      throw ConfigError(pw + ": the open-loop oracle needs a uniform disjoint instance");
  }
  if (!c.lambdas.empty() && instance.disjoint_interesting_supports()) {
    for (double l : c.lambdas) {
      for (std::size_t e = 0; e < instance.num_experts(); ++e) {
        if (l < instance.tail_mass(e)) throw ConfigError(where + ".lambdas: below truncation tail mass");
      }
    }
  }
  return c;
}

std::vector<double> parse_t_grid(const json& j, const std::string& where) {
  if (j.is_array()) return as_list(j, where, as_double);
  require_object(j, where);
  reject_unknown_keys(j, {"start", "stop", "count"}, where);
  const double start = as_double(required(j, "start", where), where + ".start");
  const double stop = as_double(required(j, "stop", where), where + ".stop");
  const std::uint64_t count = as_u64(required(j, "count", where), where + ".count");
  if (count < 2 || !(stop > start)) throw ConfigError(where + ": need count >= 2 and stop > start");
  std::vector<double> grid(count);
  for (std::uint64_t i = 0; i < count; ++i)
    grid[i] = start + (stop - start) * static_cast<double>(i) / static_cast<double>(count - 1);
  return grid;
}

}  // namespace

ProblemInstance InstanceDescription::build() const {
  if (kind == "seven_expert") return make_seven_expert_instance(support);
  if (kind == "uniform_disjoint") return ProblemInstance::uniform_disjoint(support, interesting_counts);
  if (kind == "prime") return make_prime_instance(means);
  if (kind == "categorical") return ProblemInstance::categorical(probabilities, interesting_items);
  throw ConfigError("unknown instance kind '" + kind + "'");
}

PolicyKind PolicySpec::resolve(const ProblemInstance& instance, std::uint64_t horizon) const {
  if (kind == "good_ucb") return GoodUcb{c};
  if (kind == "ocl") return OracleClosedLoop{};
  if (kind == "uniform") return UniformCycle{};
  if (kind == "ool") {
    auto q = instance.interesting_proportions();
    std::vector<std::size_t> order(q.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return q[a] > q[b]; });
    std::vector<double> sorted;
    for (std::size_t i : order) sorted.push_back(q[i]);
    try {
      const MacroscopicProfile profile(sorted);
      const auto by_rank = discrete_ool_allocation(profile, instance.uniform_support(), horizon);
      std::vector<std::uint64_t> allocation(q.size());
      for (std::size_t r = 0; r < order.size(); ++r) allocation[order[r]] = by_rank[r];
      return OpenLoopOracle{allocation};
    } catch (const InvalidProfile& e) {
      throw ConfigError(std::string("open-loop oracle: ") + e.what());
    }
  }
  throw ConfigError("unknown policy '" + kind + "'");
}

SimulateConfig parse_simulate_config(std::string_view json_text) {
  const json j = parse_json(json_text);
  require_object(j, "config");
  SimulateConfig config;
  if (j.contains("experiments")) {
    reject_unknown_keys(j, {"experiments"}, "config");
    const json& list = j["experiments"];
    if (!list.is_array() || list.empty()) throw ConfigError("config.experiments: expected a non-empty list");
    for (std::size_t i = 0; i < list.size(); ++i)
      config.experiments.push_back(parse_experiment(list[i], "experiments[" + std::to_string(i) + "]"));
  } else {
    config.experiments.push_back(parse_experiment(j, "config"));
  }
  std::set<std::string> names;
  for (const auto& e : config.experiments) {
    if (!names.insert(e.name).second) throw ConfigError("duplicate experiment name '" + e.name + "'");
  }
  return config;
}

MacroscopicConfig parse_macroscopic_config(std::string_view json_text) {
  const json j = parse_json(json_text);
  require_object(j, "config");
  reject_unknown_keys(j, {"profile", "lambdas", "t_grid", "output_dir"}, "config");
  MacroscopicConfig c;
  c.profile = as_list(required(j, "profile", "config"), "config.profile", as_double);
  try {
    (void)MacroscopicProfile(c.profile);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config.profile: ") + e.what());
  }
  if (j.contains("lambdas")) c.lambdas = as_list(j["lambdas"], "config.lambdas", as_double);
  for (double l : c.lambdas) {
    if (!(l > 0.0 && l < c.profile.front())) throw ConfigError("config.lambdas: values must lie in (0, q_1)");
  }
  if (j.contains("t_grid")) c.t_grid = parse_t_grid(j["t_grid"], "config.t_grid");
  for (double t : c.t_grid) {
    if (!(t >= 0.0)) throw ConfigError("config.t_grid: times must be non-negative");
  }
  if (j.contains("output_dir")) c.output_dir = as_string(j["output_dir"], "config.output_dir");
  return c;
}

ConcentrationConfig parse_concentration_config(std::string_view json_text) {
  const json j = parse_json(json_text);
  require_object(j, "config");
  reject_unknown_keys(j, {"instance", "sample_sizes", "deltas", "replicates", "master_seed", "output_dir", "threads"},
                      "config");
  ConcentrationConfig c;
  c.instance = parse_instance(required(j, "instance", "config"), "config.instance");
  if (!c.instance.build().disjoint_interesting_supports())
    throw ConfigError("config.instance: coverage runs need disjoint interesting supports");
  c.sample_sizes = as_list(required(j, "sample_sizes", "config"), "config.sample_sizes", as_u64);
  c.deltas = as_list(required(j, "deltas", "config"), "config.deltas", as_double);
  for (double d : c.deltas) {
    if (!(d > 0.0 && d < 1.0)) throw ConfigError("config.deltas: values must lie in (0,1)");
  }
  if (j.contains("replicates")) c.replicates = as_u64(j["replicates"], "config.replicates");
  if (c.replicates == 0) throw ConfigError("config.replicates: must be positive");
  if (j.contains("master_seed")) c.master_seed = as_u64(j["master_seed"], "config.master_seed");
  if (j.contains("output_dir")) c.output_dir = as_string(j["output_dir"], "config.output_dir");
  if (j.contains("threads")) c.threads = as_u64(j["threads"], "config.threads");
  if (c.threads == 0) throw ConfigError("config.threads: must be positive");
  return c;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void apply(const Overrides& overrides, SimulateConfig& config) {
  for (auto& e : config.experiments) {
    if (overrides.seed) e.master_seed = *overrides.seed;
    if (overrides.output_dir) e.output_dir = *overrides.output_dir;
    if (overrides.threads) e.threads = *overrides.threads;
    if (overrides.svg) e.emit_svg = true;
  }
}

void apply(const Overrides& overrides, MacroscopicConfig& config) {
  if (overrides.output_dir) config.output_dir = *overrides.output_dir;
}

void apply(const Overrides& overrides, ConcentrationConfig& config) {
  if (overrides.seed) config.master_seed = *overrides.seed;
  if (overrides.output_dir) config.output_dir = *overrides.output_dir;
  if (overrides.threads) config.threads = *overrides.threads;
}

}  // namespace discovery::app
