#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "avw/geometry.hpp"
#include "avw/numerics/distributions.hpp"
#include "avw/two_sample_tests.hpp"

namespace avw::sim {

/// Dimension-free description of a sampling law; `build(dim)` realizes it.
struct DistributionTemplate {
  numerics::Family family = numerics::Family::Normal;
  /// Normal: mean of every coordinate. Cauchy/Pareto: location.
  double location = 0.0;
  /// Overrides the first coordinate's mean (single-coordinate shift).
  std::optional<double> location_first;
  /// Normal: variance of every coordinate.
  double variance = 1.0;
  /// Overrides the first coordinate's variance.
  std::optional<double> variance_first;
  /// Normal: correlation 1 / (1 + |i - j|) between coordinates i and j.
  bool inverse_distance_correlation = false;
  double lower = 0.0;  // uniform
  double upper = 1.0;  // uniform
  double shape = 1.0;  // gamma, pareto
  double scale = 1.0;  // gamma, cauchy

  numerics::Distribution build(int dim) const;
  /// Name used for oracle lookups ("normal", "uniform", ...).
  std::string family_name() const;
};

enum class TestKind { Avw, IndependentWilcoxon, Hotelling };

struct TestSpec {
  TestKind kind = TestKind::Avw;
  tests::P1Choice p1 = tests::P1TwoThirds{};
  tests::Direction direction = tests::Direction::XXvsXY;
  /// Column value in the output; defaults to e.g. "avw[2/3]".
  std::string label;

  std::string display_name() const;
};

enum class StudyKind { Level, Power, DimensionSweep };

std::string to_string(StudyKind kind);

struct ScenarioSpec {
  std::string name = "scenario";
  StudyKind study = StudyKind::Level;
  DistributionTemplate null_dist;
  std::optional<DistributionTemplate> alt_dist;
  /// Sample sizes; n and m pair elementwise, a single entry broadcasts and an
  /// empty m means m = n.
  std::vector<std::int64_t> n{50};
  std::vector<std::int64_t> m;
  std::vector<int> dim{10};
  geometry::MetricSpec metric = geometry::MetricSpec::l2();
  std::vector<TestSpec> tests;
  std::int64_t reps = 1000;
  double alpha = 0.05;
  std::uint64_t base_seed = 1;
  int workers = 1;

  /// Throws std::invalid_argument on inconsistent settings.
  void validate() const;
  std::vector<std::pair<std::int64_t, std::int64_t>> size_points() const;
};

struct SimRow {
  std::string scenario;
  std::string test;
  std::int64_t n = 0;
  std::int64_t m = 0;
  int dim = 0;
  std::string metric;
  std::int64_t reps = 0;
  std::int64_t rejections = 0;
  /// Replications where the test could not run (e.g. singular covariance);
  /// counted as non-rejections.
  std::int64_t errors = 0;
  double rate = 0.0;
  double se = 0.0;
  /// Over replications without error; NaN when none ran.
  double mean_z = 0.0;
  double var_z = 0.0;
  double runtime_s = 0.0;
  /// Per replication: 1 reject, 0 accept, -1 error.
  std::vector<std::int8_t> decisions;
  std::optional<std::string> first_error;
};

struct SimResult {
  std::vector<SimRow> rows;

  const SimRow& find(const std::string& test, std::int64_t n, int dim) const;
};

/// Runs every (size, dim) point of the scenario. Replication k of a point
/// draws from stream k of a seed derived from base_seed and the point index,
/// so the result is identical for any worker count.
SimResult run_scenario(const ScenarioSpec& spec);

/// Both clouds from null_dist; rejects a spec whose alt_dist is set and differs.
SimResult run_level_study(const ScenarioSpec& spec);
/// X from null_dist, Y from alt_dist (required).
SimResult run_power_study(const ScenarioSpec& spec);
/// One row per dimension and test; Y from alt_dist when present.
SimResult run_dimension_sweep(const ScenarioSpec& spec);

struct NormalityCheck {
  double ks = 0.0;
  std::vector<double> z;
};

/// Standardizes `reps` null statistics with mean card_I / 2 and
/// var_h_approx(p1) and returns their Kolmogorov-Smirnov distance to N(0, 1).
/// Requires reps >= 500; throws std::domain_error when the statistic is
/// constant across replications.
NormalityCheck run_normality_check(std::int64_t n, std::int64_t m,
                                   const numerics::Distribution& null_dist,
                                   const geometry::MetricSpec& metric, double p1,
                                   std::int64_t reps, std::uint64_t seed, int workers = 1);

/// Kolmogorov-Smirnov distance between the empirical law of `values` and N(0, 1).
double ks_distance_to_normal(std::vector<double> values);

inline constexpr const char* kCsvHeader =
    "scenario,test,n,m,dim,metric,reps,rejections,rate,se,mean_z,var_z,runtime_s";

std::string to_csv(const SimResult& result);
std::string to_json(const SimResult& result);

/// Writes <dir>/<scenario>.csv and <dir>/<scenario>.json.
void write_outputs(const SimResult& result, const std::string& scenario,
                   const std::filesystem::path& dir);

/// Scenario file in YAML with keys named after ScenarioSpec fields. Either a
/// single mapping or {scenarios: [...]}. Errors carry the line number.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

std::vector<ScenarioSpec> load_scenarios(const std::filesystem::path& path);
std::vector<ScenarioSpec> parse_scenarios(const std::string& text);

}  // namespace avw::sim
