#include <fstream>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "avw/simharness.hpp"

namespace avw::sim {

namespace {

std::string at_line(const YAML::Node& node) {
  const auto mark = node.Mark();
  if (mark.line < 0) return "";
  return "line " + std::to_string(mark.line + 1) + ": ";
}

[[noreturn]] void fail(const YAML::Node& node, const std::string& message) {
  throw ConfigError(at_line(node) + message);
}

void reject_unknown_keys(const YAML::Node& map, const std::set<std::string>& allowed,
                         const std::string& where) {
  for (const auto& kv : map) {
    const auto key = kv.first.as<std::string>();
    if (!allowed.contains(key)) fail(kv.first, "unknown key '" + key + "' in " + where);
  }
}

template <class T>
T scalar(const YAML::Node& node, const std::string& key) {
  if (!node.IsScalar()) fail(node, "'" + key + "' must be a scalar");
  try {
    return node.as<T>();
  } catch (const YAML::Exception&) {
    fail(node, "'" + key + "' has an invalid value '" + node.Scalar() + "'");
  }
}

template <class T>
std::vector<T> scalar_or_list(const YAML::Node& node, const std::string& key) {
  std::vector<T> out;
  if (node.IsSequence()) {
    for (const auto& item : node) out.push_back(scalar<T>(item, key));
    if (out.empty()) fail(node, "'" + key + "' sweep must not be empty");
  } else {
    out.push_back(scalar<T>(node, key));
  }
  return out;
}

numerics::Family parse_family(const YAML::Node& node) {
  const auto name = scalar<std::string>(node, "family");
  if (name == "normal") return numerics::Family::Normal;
  if (name == "uniform") return numerics::Family::Uniform;
  if (name == "cauchy") return numerics::Family::Cauchy;
  if (name == "gamma") return numerics::Family::Gamma;
  if (name == "pareto") return numerics::Family::Pareto;
  fail(node, "unknown family '" + name + "' (normal, uniform, cauchy, gamma, pareto)");
}

DistributionTemplate parse_distribution(const YAML::Node& node, const std::string& key) {
  if (!node.IsMap()) fail(node, "'" + key + "' must be a mapping");
  reject_unknown_keys(node,
                      {"family", "location", "location_first", "variance", "variance_first",
                       "correlation", "lower", "upper", "shape", "scale"},
                      key);
  DistributionTemplate t;
  if (!node["family"]) fail(node, "'" + key + "' needs a family");
  t.family = parse_family(node["family"]);
  if (node["location"]) t.location = scalar<double>(node["location"], "location");
  if (node["location_first"]) {
    t.location_first = scalar<double>(node["location_first"], "location_first");
  }
  if (node["variance"]) t.variance = scalar<double>(node["variance"], "variance");
  if (node["variance_first"]) {
    t.variance_first = scalar<double>(node["variance_first"], "variance_first");
  }
  if (node["correlation"]) {
    const auto c = scalar<std::string>(node["correlation"], "correlation");
    if (c == "inverse_distance") {
      t.inverse_distance_correlation = true;
    } else if (c != "none") {
      fail(node["correlation"], "correlation must be none or inverse_distance");
    }
  }
  if (node["lower"]) t.lower = scalar<double>(node["lower"], "lower");
  if (node["upper"]) t.upper = scalar<double>(node["upper"], "upper");
  if (node["shape"]) t.shape = scalar<double>(node["shape"], "shape");
  if (node["scale"]) t.scale = scalar<double>(node["scale"], "scale");
  try {
    t.build(1);
  } catch (const std::invalid_argument& e) {
    fail(node, e.what());
  }
  return t;
}

TestSpec parse_test(const YAML::Node& node) {
  TestSpec t;
  if (node.IsScalar()) {
    t.kind = TestKind::Avw;
    try {
      t.p1 = tests::parse_p1_choice(node.Scalar());
    } catch (const std::invalid_argument& e) {
      fail(node, e.what());
    }
    return t;
  }
  if (!node.IsMap()) fail(node, "each test must be a mapping");
  reject_unknown_keys(node, {"id", "p1", "direction", "label"}, "test");
  if (!node["id"]) fail(node, "test needs an id");
  const auto id = scalar<std::string>(node["id"], "id");
  if (id == "avw") {
    t.kind = TestKind::Avw;
  } else if (id == "independent_wilcoxon") {
    t.kind = TestKind::IndependentWilcoxon;
  } else if (id == "hotelling") {
    t.kind = TestKind::Hotelling;
  } else {
    fail(node["id"], "unknown test id '" + id + "' (avw, independent_wilcoxon, hotelling)");
  }
  try {
    if (node["p1"]) {
      if (t.kind != TestKind::Avw) fail(node["p1"], "p1 applies to avw tests only");
      t.p1 = tests::parse_p1_choice(scalar<std::string>(node["p1"], "p1"));
    }
    if (node["direction"]) {
      t.direction = tests::parse_direction(scalar<std::string>(node["direction"], "direction"));
      if (t.direction == tests::Direction::Both) {
        fail(node["direction"], "scenario tests take direction xx or yy");
      }
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    fail(node, e.what());
  }
  if (node["label"]) t.label = scalar<std::string>(node["label"], "label");
  return t;
}

ScenarioSpec parse_scenario(const YAML::Node& node) {
  if (!node.IsMap()) fail(node, "a scenario must be a mapping");
  reject_unknown_keys(node,
                      {"name", "study", "null_dist", "alt_dist", "n", "m", "dim", "metric",
                       "tests", "reps", "alpha", "base_seed", "workers"},
                      "scenario");
  ScenarioSpec s;
  if (!node["name"]) fail(node, "scenario needs a name");
  s.name = scalar<std::string>(node["name"], "name");
  if (s.name.find_first_of("/\\") != std::string::npos || s.name.empty()) {
    fail(node["name"], "scenario name must be a plain file stem");
  }
  if (node["study"]) {
    const auto study = scalar<std::string>(node["study"], "study");
    if (study == "level") {
      s.study = StudyKind::Level;
    } else if (study == "power") {
      s.study = StudyKind::Power;
    } else if (study == "dimension_sweep") {
      s.study = StudyKind::DimensionSweep;
    } else {
      fail(node["study"], "study must be level, power or dimension_sweep");
    }
  }
  if (!node["null_dist"]) fail(node, "scenario needs null_dist");
  s.null_dist = parse_distribution(node["null_dist"], "null_dist");
  if (node["alt_dist"]) s.alt_dist = parse_distribution(node["alt_dist"], "alt_dist");
  if (node["n"]) s.n = scalar_or_list<std::int64_t>(node["n"], "n");
  if (node["m"]) s.m = scalar_or_list<std::int64_t>(node["m"], "m");
  if (node["dim"]) s.dim = scalar_or_list<int>(node["dim"], "dim");
  if (node["metric"]) {
    try {
      s.metric = geometry::MetricSpec::parse(scalar<std::string>(node["metric"], "metric"));
    } catch (const std::invalid_argument& e) {
      fail(node["metric"], e.what());
    }
  }
  if (!node["tests"] || !node["tests"].IsSequence()) fail(node, "scenario needs a tests list");
  for (const auto& t : node["tests"]) s.tests.push_back(parse_test(t));
  if (node["reps"]) s.reps = scalar<std::int64_t>(node["reps"], "reps");
  if (node["alpha"]) s.alpha = scalar<double>(node["alpha"], "alpha");
  if (node["base_seed"]) s.base_seed = scalar<std::uint64_t>(node["base_seed"], "base_seed");
  if (node["workers"]) s.workers = scalar<int>(node["workers"], "workers");

  if (s.study == StudyKind::Power && !s.alt_dist) fail(node, "power study needs alt_dist");
  try {
    s.validate();
  } catch (const std::invalid_argument& e) {
    fail(node, e.what());
  }
  return s;
}

}  // namespace

std::vector<ScenarioSpec> parse_scenarios(const std::string& text) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw ConfigError("line " + std::to_string(e.mark.line + 1) + ": " + e.msg);
  }
  std::vector<ScenarioSpec> out;
  if (root.IsMap() && root["scenarios"]) {
    reject_unknown_keys(root, {"scenarios"}, "top level");
    const YAML::Node list = root["scenarios"];
    if (!list.IsSequence() || list.size() == 0) fail(list, "'scenarios' must be a nonempty list");
    for (const auto& s : list) out.push_back(parse_scenario(s));
  } else if (root.IsMap()) {
    out.push_back(parse_scenario(root));
  } else {
    throw ConfigError("config must be a scenario mapping or {scenarios: [...]}");
  }
  std::set<std::string> names;
  for (const auto& s : out) {
    if (!names.insert(s.name).second) throw ConfigError("duplicate scenario name '" + s.name + "'");
  }
  return out;
}

std::vector<ScenarioSpec> load_scenarios(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_scenarios(buf.str());
}

}  // namespace avw::sim
