#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "avw/simharness.hpp"

namespace avw::sim {
namespace {

ScenarioSpec small_level(std::int64_t reps = 60) {
  ScenarioSpec s;
  s.name = "small_level";
  s.study = StudyKind::Level;
  s.n = {12};
  s.dim = {3};
  s.reps = reps;
  s.base_seed = 5;
  s.tests = {TestSpec{TestKind::Avw, tests::P1TwoThirds{}, tests::Direction::XXvsXY, ""},
             TestSpec{TestKind::Avw, tests::P1One{}, tests::Direction::XXvsXY, ""},
             TestSpec{TestKind::IndependentWilcoxon, {}, tests::Direction::XXvsXY, ""},
             TestSpec{TestKind::Hotelling, {}, tests::Direction::XXvsXY, ""}};
  return s;
}

TEST(TestSpec, DisplayNames) {
  EXPECT_EQ((TestSpec{TestKind::Avw, tests::P1TwoThirds{}, {}, ""}.display_name()), "avw[2/3]");
  EXPECT_EQ((TestSpec{TestKind::Avw, tests::P1Oracle{}, {}, ""}.display_name()), "avw[oracle]");
  EXPECT_EQ((TestSpec{TestKind::Hotelling, {}, {}, ""}.display_name()), "hotelling");
  EXPECT_EQ((TestSpec{TestKind::Avw, tests::P1One{}, {}, "mine"}.display_name()), "mine");
}

TEST(DistributionTemplate, BuildsShiftedLaws) {
  DistributionTemplate t;
  t.location_first = 2.0;
  t.variance_first = 4.0;
  const auto law = t.build(5);
  EXPECT_EQ(law.dim(), 5);
  const Matrix x = numerics::sample(law, 20000, 3, 0);
  EXPECT_NEAR(x.col(0).mean(), 2.0, 0.05);
  EXPECT_NEAR(x.col(1).mean(), 0.0, 0.05);
  EXPECT_NEAR((x.col(0).array() - x.col(0).mean()).square().mean(), 4.0, 0.15);

  DistributionTemplate g;
  g.family = numerics::Family::Gamma;
  g.location = 1.0;
  EXPECT_THROW(g.build(2), std::invalid_argument);
  EXPECT_EQ(g.family_name(), "gamma");
}

TEST(ScenarioSpec, SizePoints) {
  ScenarioSpec s;
  s.n = {10, 20, 30};
  EXPECT_EQ(s.size_points(), (std::vector<std::pair<std::int64_t, std::int64_t>>{
                                 {10, 10}, {20, 20}, {30, 30}}));
  s.m = {7};
  EXPECT_EQ(s.size_points()[2], (std::pair<std::int64_t, std::int64_t>{30, 7}));
  s.m = {7, 8};
  EXPECT_THROW(s.size_points(), std::invalid_argument);
}

TEST(RunScenario, AlphaZeroNeverRejects) {
  auto s = small_level(40);
  s.alpha = 0.0;
  const auto result = run_scenario(s);
  ASSERT_EQ(result.rows.size(), 4u);
  for (const auto& row : result.rows) {
    EXPECT_EQ(row.rejections, 0) << row.test;
    EXPECT_EQ(row.rate, 0.0);
  }
}

TEST(RunScenario, IdenticalAcrossWorkerCounts) {
  auto s = small_level();
  const auto a = run_scenario(s);
  s.workers = 3;
  const auto b = run_scenario(s);
  ASSERT_EQ(a.rows.size(), b.rows.size());
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    EXPECT_EQ(a.rows[i].decisions, b.rows[i].decisions) << a.rows[i].test;
    EXPECT_EQ(a.rows[i].mean_z, b.rows[i].mean_z);
  }
}

TEST(RunScenario, NestedP1DecisionsPerReplication) {
  const auto r = run_scenario(small_level());
  const auto& mid = r.find("avw[2/3]", 12, 3);
  const auto& loose = r.find("avw[1]", 12, 3);
  for (std::size_t k = 0; k < mid.decisions.size(); ++k) {
    EXPECT_LE(loose.decisions[k], mid.decisions[k]);
  }
  EXPECT_NEAR(mid.se, std::sqrt(mid.rate * (1 - mid.rate) / 60), 1e-15);
  EXPECT_THROW(r.find("avw[0.6]", 12, 3), std::out_of_range);
}

TEST(RunScenario, HotellingErrorsAreRecorded) {
  auto s = small_level(10);
  s.dim = {30};
  const auto r = run_scenario(s);
  const auto& h = r.find("hotelling", 12, 30);
  EXPECT_EQ(h.errors, 10);
  EXPECT_EQ(h.rejections, 0);
  EXPECT_TRUE(h.first_error.has_value());
  EXPECT_TRUE(std::isnan(h.mean_z));
  for (auto d : h.decisions) EXPECT_EQ(d, -1);
}

TEST(RunScenario, PowerStudyDetectsLargeShift) {
  auto s = small_level(30);
  s.study = StudyKind::Power;
  DistributionTemplate alt;
  alt.location = 3.0;
  s.alt_dist = alt;
  s.n = {20};
  const auto r = run_scenario(s);
  EXPECT_EQ(r.find("avw[2/3]", 20, 3).rate, 1.0);
  EXPECT_EQ(r.find("hotelling", 20, 3).rate, 1.0);

  s.study = StudyKind::Level;
  EXPECT_THROW(run_level_study(s), std::invalid_argument);
  s.alt_dist.reset();
  EXPECT_THROW(run_power_study(s), std::invalid_argument);
}

TEST(RunScenario, DimensionSweepRows) {
  auto s = small_level(5);
  s.study = StudyKind::DimensionSweep;
  s.dim = {1, 2, 4};
  s.tests.resize(1);
  const auto r = run_dimension_sweep(s);
  ASSERT_EQ(r.rows.size(), 3u);
  EXPECT_EQ(r.rows[2].dim, 4);
}

TEST(Normality, KsDistanceOracle) {
  EXPECT_NEAR(ks_distance_to_normal({0.0}), 0.5, 1e-15);
  // Two points at +-1: sup is at the jumps, max(Phi(-1), 0.5 - Phi(-1)).
  const double phi = 0.15865525393145707;
  EXPECT_NEAR(ks_distance_to_normal({1.0, -1.0}), std::max(phi, 0.5 - phi), 1e-12);
  EXPECT_THROW(ks_distance_to_normal({}), std::invalid_argument);
}

TEST(Normality, ConstantStatisticThrows) {
  EXPECT_THROW(run_normality_check(10, 10, numerics::Distribution::normal_iid(2, 0.0, 0.0),
                                   geometry::MetricSpec::l2(), 0.6, 500, 1),
               std::domain_error);
  EXPECT_THROW(run_normality_check(10, 10, numerics::Distribution::normal_iid(2),
                                   geometry::MetricSpec::l2(), 0.6, 499, 1),
               std::invalid_argument);
}

TEST(Output, CsvAndJson) {
  const auto r = run_scenario(small_level(8));
  const auto csv = to_csv(r);
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, kCsvHeader);
  int rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    EXPECT_EQ(std::count(line.begin(), line.end(), ','), 12);
  }
  EXPECT_EQ(rows, 4);
  const auto json = to_json(r);
  EXPECT_NE(json.find("\"avw[2/3]\""), std::string::npos);

  const auto dir = std::filesystem::temp_directory_path() / "avw_sim_output_test";
  std::filesystem::remove_all(dir);
  write_outputs(r, "small_level", dir);
  EXPECT_TRUE(std::filesystem::exists(dir / "small_level.csv"));
  EXPECT_TRUE(std::filesystem::exists(dir / "small_level.json"));
  std::filesystem::remove_all(dir);
}

TEST(Config, ParsesScenarioList) {
  const auto specs = parse_scenarios(R"(scenarios:
  - name: level_a
    study: level
    null_dist: {family: normal}
    n: [10, 20]
    dim: 5
    tests:
      - oracle
      - {id: avw, p1: "2/3"}
      - {id: independent_wilcoxon}
    reps: 50
  - name: power_b
    study: power
    null_dist: {family: normal, correlation: inverse_distance}
    alt_dist: {family: normal, location_first: 0.6}
    n: 50
    m: 40
    dim: [10, 50]
    metric: l1
    tests: [{id: hotelling}]
    base_seed: 99
)");
  ASSERT_EQ(specs.size(), 2u);
  EXPECT_EQ(specs[0].n, (std::vector<std::int64_t>{10, 20}));
  EXPECT_TRUE(std::holds_alternative<tests::P1Oracle>(specs[0].tests[0].p1));
  EXPECT_EQ(specs[0].tests[2].kind, TestKind::IndependentWilcoxon);
  EXPECT_EQ(specs[1].study, StudyKind::Power);
  EXPECT_TRUE(specs[1].null_dist.inverse_distance_correlation);
  EXPECT_EQ(specs[1].alt_dist->location_first, 0.6);
  EXPECT_EQ(specs[1].metric, geometry::MetricSpec::l1());
  EXPECT_EQ(specs[1].base_seed, 99u);
}

void expect_config_error(const std::string& text, const std::string& fragment) {
  try {
    parse_scenarios(text);
    ADD_FAILURE() << "no error for:\n" << text;
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find(fragment), std::string::npos) << e.what();
  }
}

TEST(Config, ErrorsCarryLineNumbers) {
  expect_config_error("name: a\nnull_dist: {family: normal}\ntests: [\"2/3\"]\nrepz: 5\n",
                      "line 4: unknown key 'repz'");
  expect_config_error("name: a\nnull_dist: {family: laplace}\ntests: [\"2/3\"]\n", "line 2:");
  expect_config_error("name: a\nnull_dist: {family: normal}\ntests:\n  - {id: knn}\n",
                      "line 4:");
  expect_config_error("name: a\nnull_dist: {family: normal}\ntests: [\"0.4\"]\n", "line 3:");
  expect_config_error("name: a\nnull_dist: {family: normal}\nn: x\ntests: [\"1\"]\n",
                      "line 3:");
  expect_config_error("name: a\nnull_dist: [1\n", "line ");
  expect_config_error("name: a\nstudy: power\nnull_dist: {family: normal}\ntests: [\"1\"]\n",
                      "alt_dist");
  expect_config_error("scenarios:\n  - {name: a, null_dist: {family: normal}, tests: [\"1\"]}\n"
                      "  - {name: a, null_dist: {family: normal}, tests: [\"1\"]}\n",
                      "duplicate");
  expect_config_error("name: a\nnull_dist: {family: normal}\ndim: 7\ntests: [oracle]\n", "no tabulated P1");
  EXPECT_THROW(load_scenarios("/nonexistent/avw.cfg"), ConfigError);
}

}  // namespace
}  // namespace avw::sim
