#include "avw/cli/commands.hpp"

#include <CLI11.hpp>
#include <charconv>
#include <cstdint>
#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "avw/cli/csv.hpp"
#include "avw/nullmodel.hpp"
#include "avw/simharness.hpp"
#include "avw/two_sample_tests.hpp"

namespace avw::cli {

namespace {

using Json = nlohmann::ordered_json;

constexpr std::uint64_t kDefaultSeed = 20240917;

struct TestArgs {
  std::string x_path;
  std::string y_path;
  std::string data_path;
  std::string group_col;
  std::vector<std::string> groups;
  std::string metric = "l2";
  std::string p1 = "2/3";
  double alpha = 0.05;
  std::string direction = "xx";
  std::string columns;
  std::uint64_t seed = kDefaultSeed;
  bool ties_are_errors = false;
};

struct EstimateArgs {
  std::string dist;
  int dim = 1;
  std::string metric = "l2";
  std::int64_t reps = 1'000'000;
  std::uint64_t seed = kDefaultSeed;
  bool p2 = false;
  int workers = 0;
};

struct SimulateArgs {
  std::string config;
  std::string out_dir;
  std::optional<int> workers;
};

tests::P1Choice parse_cli_p1(const std::string& text) {
  double p = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), p);
  if (ec == std::errc() && ptr == text.data() + text.size() && p >= 0.0 && p <= 0.5) {
    throw nullmodel::DegenerateVariance("P1 = " + text + " <= 1/2 gives a degenerate variance");
  }
  return tests::parse_p1_choice(text);
}

Json outcome_json(const tests::TestOutcome& o, const tests::TestConfig& config) {
  Json j;
  j["direction"] = tests::to_string(o.direction);
  j["n"] = o.variance.n;
  j["m"] = o.variance.m;
  j["metric"] = config.metric.name();
  j["t"] = o.statistic.t_value;
  j["card_i"] = o.statistic.card_i;
  j["normalized"] = o.statistic.normalized;
  j["tie_count"] = o.statistic.tie_count;
  j["z"] = o.z;
  j["p_value"] = o.p_value;
  j["alpha"] = config.alpha;
  j["reject"] = o.reject;
  j["p1_used"] = o.variance.p1.value;
  j["p1_source"] = nullmodel::to_string(o.variance.p1.source);
  j["var_h"] = o.variance.var_h;
  j["warnings"] = o.warnings;
  return j;
}

int cmd_test(const TestArgs& a, std::ostream& out) {
  const bool file_pair = !a.x_path.empty() || !a.y_path.empty();
  const bool grouped = !a.data_path.empty();
  if (file_pair == grouped) {
    throw std::invalid_argument("give either --x and --y, or --data with --group-col");
  }
  ColumnRange columns;
  if (!a.columns.empty()) columns = parse_column_range(a.columns);

  tests::TestConfig config;
  config.alpha = a.alpha;
  config.metric = geometry::MetricSpec::parse(a.metric);
  config.p1 = parse_cli_p1(a.p1);
  config.direction = tests::parse_direction(a.direction);
  config.ties_are_errors = a.ties_are_errors;
  config.validate();

  Matrix x;
  Matrix y;
  std::string x_label = "x";
  std::string y_label = "y";
  if (grouped) {
    if (a.group_col.empty()) throw std::invalid_argument("--data needs --group-col");
    auto split = split_by_group(read_csv(a.data_path), a.group_col, a.groups, columns);
    x = std::move(split.x);
    y = std::move(split.y);
    x_label = split.x_label;
    y_label = split.y_label;
  } else {
    if (a.x_path.empty() || a.y_path.empty()) throw std::invalid_argument("need both --x and --y");
    x = numeric_block(read_csv(a.x_path), columns);
    y = numeric_block(read_csv(a.y_path), columns);
  }
  const geometry::PointCloud xs(std::move(x), x_label);
  const geometry::PointCloud ys(std::move(y), y_label);

  for (const auto& o : tests::avw_test(xs, ys, config)) {
    Json j = outcome_json(o, config);
    j["x_label"] = xs.label();
    j["y_label"] = ys.label();
    j["seed"] = a.seed;
    out << j.dump() << '\n';
  }
  return kExitOk;
}

int cmd_estimate(const EstimateArgs& a, std::ostream& out) {
  if (a.reps < 1) throw std::invalid_argument("--reps must be >= 1");
  if (a.dim < 1) throw std::invalid_argument("--dim must be >= 1");
  const auto metric = geometry::MetricSpec::parse(a.metric);
  const auto law = nullmodel::distribution_from_name(a.dist, a.dim);
  const auto est = a.p2 ? nullmodel::estimate_p2(law, metric, a.reps, a.seed, a.workers)
                        : nullmodel::estimate_p1(law, metric, a.reps, a.seed, a.workers);
  Json j;
  j["quantity"] = a.p2 ? "p2" : "p1";
  j["distribution"] = a.dist;
  j["dim"] = a.dim;
  j["metric"] = metric.name();
  j["value"] = est.value;
  j["se"] = est.std_error;
  j["reps"] = est.reps;
  j["seed"] = est.seed;
  if (!a.p2) j["outside_bounds"] = est.outside_bounds;
  out << j.dump() << '\n';
  return kExitOk;
}

int cmd_simulate(const SimulateArgs& a, std::ostream& out) {
  auto scenarios = sim::load_scenarios(a.config);
  if (a.workers) {
    for (auto& s : scenarios) s.workers = *a.workers;
  }
  for (const auto& s : scenarios) {
    const auto result = sim::run_scenario(s);
    sim::write_outputs(result, s.name, a.out_dir);
    double min_rate = 1.0;
    double max_rate = 0.0;
    for (const auto& r : result.rows) {
      min_rate = std::min(min_rate, r.rate);
      max_rate = std::max(max_rate, r.rate);
    }
    out << "scenario " << s.name << " (" << sim::to_string(s.study) << "): "
        << result.rows.size() << " rows, rates " << format_double(min_rate) << ".."
        << format_double(max_rate) << " -> " << a.out_dir << "/" << s.name << ".csv\n";
  }
  return kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Averaged Wilcoxon interpoint-distance two-sample test"};
  app.name("avw");
  app.require_subcommand(1);

  TestArgs ta;
  auto* test = app.add_subcommand("test", "Test two samples for equal distributions");
  test->add_option("--x", ta.x_path, "CSV of X observations (rows) by features (columns)");
  test->add_option("--y", ta.y_path, "CSV of Y observations");
  test->add_option("--data", ta.data_path, "Single CSV with a group label column");
  test->add_option("--group-col", ta.group_col, "Name of the group label column");
  test->add_option("--groups", ta.groups, "Two group labels: X label, Y label")->delimiter(',');
  test->add_option("--metric", ta.metric, "l1, l2, lp:P, linf or canberra");
  test->add_option("--p1", ta.p1, "1, 2/3, oracle:DIST:DIM or a value in (1/2, 1]");
  test->add_option("--alpha", ta.alpha, "Significance level");
  test->add_option("--direction", ta.direction, "xx, yy or both");
  test->add_option("--columns", ta.columns, "Feature columns a..b (1-based, inclusive)");
  test->add_option("--seed", ta.seed, "Seed (default from AVW_SEED)")->envname("AVW_SEED");
  test->add_flag("--ties-are-errors", ta.ties_are_errors, "Fail on exact distance ties");

  EstimateArgs ea;
  auto* estimate = app.add_subcommand("estimate-p1", "Monte Carlo estimate of P1 (or P2)");
  estimate->add_option("--dist", ea.dist, "normal, uniform, gamma, exponential, cauchy, pareto")
      ->required();
  estimate->add_option("--dim", ea.dim, "Dimension");
  estimate->add_option("--metric", ea.metric, "l1, l2, lp:P, linf or canberra");
  estimate->add_option("--reps", ea.reps, "Monte Carlo replications");
  estimate->add_option("--seed", ea.seed, "Seed (default from AVW_SEED)")->envname("AVW_SEED");
  estimate->add_flag("--p2", ea.p2, "Estimate P2 instead of P1");
  estimate->add_option("--workers", ea.workers, "Threads (0 = all cores)");

  SimulateArgs sa;
  auto* simulate = app.add_subcommand("simulate", "Run scenario file(s) from a config");
  simulate->add_option("--config", sa.config, "Scenario config (YAML)")->required();
  simulate->add_option("--out", sa.out_dir, "Output directory")->required();
  simulate->add_option("--workers", sa.workers, "Threads per scenario (0 = all cores)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    if (*test) return cmd_test(ta, out);
    if (*estimate) return cmd_estimate(ea, out);
    return cmd_simulate(sa, out);
  } catch (const nullmodel::DegenerateVariance& e) {
    err << "error: " << e.what() << '\n';
    return kExitDegenerateVariance;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  }
}

}  // namespace avw::cli
