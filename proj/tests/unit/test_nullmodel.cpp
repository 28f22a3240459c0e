#include <gtest/gtest.h>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <cmath>

#include "avw/nullmodel.hpp"

namespace avw::nullmodel {
namespace {

using geometry::MetricSpec;
using Float50 = boost::multiprecision::cpp_bin_float_50;

// Independent closed form: #C11 = n(n-1)(n-2)(n-3)(n-4) m(m-1) / 3.
Float50 var_h_reference(std::int64_t n, std::int64_t m, Float50 p1) {
  const Float50 c11 = Float50(n) * (n - 1) * (n - 2) * (n - 3) * (n - 4) * m * (m - 1) / 3;
  return Float50(3) / 16 * Float50(n + m - 6) / (m - 1) * c11 * (2 * p1 - 1);
}

TEST(VarH, SmallExample) {
  EXPECT_NEAR(var_h_approx(7, 2, 2.0 / 3.0), 315.0, 1e-9);
  EXPECT_NEAR(var_h_approx(5, 2, 1.0), 3.0 / 16.0 * 1.0 * 80.0, 1e-12);
}

TEST(VarH, MatchesHighPrecisionReference) {
  for (auto [n, m, p] : {std::tuple{100, 100, 0.5383}, std::tuple{50, 50, 2.0 / 3.0},
                         std::tuple{500, 40, 0.51}, std::tuple{2000, 2000, 0.55}}) {
    const double expected = var_h_reference(n, m, Float50(p)).convert_to<double>();
    EXPECT_NEAR(var_h_approx(n, m, p), expected, 1e-12 * expected) << n << "," << m;
  }
}

TEST(VarH, FrozenValue) {
  EXPECT_NEAR(var_h_approx(100, 100, 0.5383), 839101996656.0, 1e-3);
}

TEST(VarH, IncreasesWithP1) {
  double prev = 0.0;
  for (double p = 0.51; p <= 1.0; p += 0.01) {
    const double v = var_h_approx(40, 30, p);
    EXPECT_GT(v, prev);
    prev = v;
  }
}

TEST(VarH, Errors) {
  EXPECT_THROW(var_h_approx(50, 50, 0.5), DegenerateVariance);
  EXPECT_THROW(var_h_approx(50, 50, 0.3), DegenerateVariance);
  EXPECT_THROW(var_h_approx(50, 50, 1.01), std::domain_error);
  EXPECT_THROW(var_h_approx(50, 50, std::nan("")), std::domain_error);
  EXPECT_THROW(var_h_approx(4, 50, 0.6), std::domain_error);
  EXPECT_THROW(var_h_approx(50, 1, 0.6), std::domain_error);
}

TEST(VarianceModel, CarriesSource) {
  const auto model = make_variance_model(20, 30, fixed_p1(2.0 / 3.0, P1Source::UpperBoundTwoThirds));
  EXPECT_EQ(model.n, 20);
  EXPECT_EQ(model.p1.source, P1Source::UpperBoundTwoThirds);
  EXPECT_DOUBLE_EQ(model.var_h, var_h_approx(20, 30, 2.0 / 3.0));
  EXPECT_EQ(to_string(P1Source::OracleTable), "oracle_table");
}

TEST(EstimateP1, UniformOneDimensionalL1IsExact) {
  const auto e = estimate_p1(numerics::Distribution::uniform_iid(1), MetricSpec::l1(), 200000, 5);
  EXPECT_NEAR(e.value, 23.0 / 45.0, 4 * e.std_error);
  EXPECT_FALSE(e.outside_bounds);
  EXPECT_EQ(e.source, P1Source::MonteCarlo);
  EXPECT_EQ(e.reps, 200000);
}

TEST(EstimateP1, StandardErrorFormula) {
  const auto e = estimate_p1(numerics::Distribution::normal_iid(3), MetricSpec::l2(), 100, 9);
  EXPECT_DOUBLE_EQ(e.std_error, std::sqrt(e.value * (1 - e.value) / 100));
  EXPECT_GT(e.std_error, 0.045);
  EXPECT_LT(e.std_error, 0.051);
}

TEST(EstimateP1, WorkerCountDoesNotChangeEstimate) {
  const auto law = numerics::Distribution::cauchy(4);
  const auto a = estimate_p1(law, MetricSpec::l1(), 20000, 77, 1);
  const auto b = estimate_p1(law, MetricSpec::l1(), 20000, 77, 3);
  EXPECT_EQ(a.value, b.value);
  const auto c = estimate_p1(law, MetricSpec::l1(), 20000, 78, 1);
  EXPECT_NE(a.value, c.value);
}

TEST(EstimateP1, StaysInsideTheoreticalInterval) {
  for (const auto& name : {"normal", "uniform", "gamma", "cauchy", "pareto"}) {
    const auto e = estimate_p1(distribution_from_name(name, 2), MetricSpec::l2(), 100000, 3);
    EXPECT_GT(e.value, 0.5) << name;
    EXPECT_LT(e.value, 2.0 / 3.0) << name;
    EXPECT_FALSE(e.outside_bounds) << name;
  }
}

TEST(EstimateP1, TiedLawIsFlagged) {
  // All points coincide: both indicators are always 1, so P1 = 1.
  const auto e = estimate_p1(numerics::Distribution::normal_iid(2, 0.0, 0.0), MetricSpec::l2(), 1000, 1);
  EXPECT_EQ(e.value, 1.0);
  EXPECT_TRUE(e.outside_bounds);
  EXPECT_THROW(estimate_p1(numerics::Distribution::normal_iid(2), MetricSpec::l2(), 0, 1),
               std::invalid_argument);
}

TEST(EstimateP2, IsTwoThirdsWithoutTies) {
  for (const auto& name : {"normal", "exponential", "pareto"}) {
    const auto e = estimate_p2(distribution_from_name(name, 3), MetricSpec::l1(), 100000, 4);
    EXPECT_NEAR(e.value, 2.0 / 3.0, 4 * e.std_error) << name;
  }
}

TEST(VarHMcReference, ConstantCloudHasZeroVariance) {
  const auto law = numerics::Distribution::normal_iid(2, 1.0, 0.0);
  EXPECT_EQ(var_h_mc_reference(8, 6, law, MetricSpec::l2(), 100, 1), 0.0);
}

TEST(VarHMcReference, WorkerCountDoesNotChangeEstimate) {
  const auto law = numerics::Distribution::normal_iid(1);
  const double a = var_h_mc_reference(3, 1, law, MetricSpec::l1(), 2000, 12, 1);
  const double b = var_h_mc_reference(3, 1, law, MetricSpec::l1(), 2000, 12, 2);
  EXPECT_EQ(a, b);
  // T takes values in {0, 1, 2, 3}.
  EXPECT_GT(a, 0.0);
  EXPECT_LT(a, 9.0 / 4.0);
}

TEST(VarHMcReference, RejectsBadArguments) {
  const auto law = numerics::Distribution::normal_iid(1);
  EXPECT_THROW(var_h_mc_reference(10, 10, law, MetricSpec::l2(), 99, 1), std::invalid_argument);
  EXPECT_THROW(var_h_mc_reference(2001, 10, law, MetricSpec::l2(), 100, 1), std::invalid_argument);
  EXPECT_THROW(var_h_mc_reference(2, 10, law, MetricSpec::l2(), 100, 1), std::invalid_argument);
}

TEST(DistributionFromName, CanonicalLaws) {
  EXPECT_EQ(distribution_from_name("normal", 4).dim(), 4);
  EXPECT_EQ(distribution_from_name("Uniform", 2).family(), numerics::Family::Uniform);
  EXPECT_EQ(distribution_from_name("exponential", 1).family(), numerics::Family::Gamma);
  EXPECT_THROW(distribution_from_name("laplace", 1), std::invalid_argument);
}

TEST(OracleTable, BuiltinLookups) {
  EXPECT_DOUBLE_EQ(lookup_oracle_p1("normal", MetricSpec::l2(), 10), 0.538320);
  EXPECT_DOUBLE_EQ(lookup_oracle_p1("cauchy", MetricSpec::l1(), 50), 0.576032);
  EXPECT_DOUBLE_EQ(lookup_oracle_p1("uniform", MetricSpec::canberra(), 2), 0.540395);
  EXPECT_DOUBLE_EQ(lookup_oracle_p1("NORMAL", MetricSpec::lp(5.0), 1), 0.527722);
  EXPECT_EQ(OracleTable::builtin().size(), 125u);
  for (const auto& [key, value] : OracleTable::builtin().cells()) {
    EXPECT_GT(value, 0.5);
    EXPECT_LT(value, 2.0 / 3.0);
  }
}

TEST(OracleTable, MissingKeyThrows) {
  EXPECT_THROW(lookup_oracle_p1("normal", MetricSpec::l2(), 7), OracleNotFound);
  EXPECT_THROW(lookup_oracle_p1("laplace", MetricSpec::l2(), 10), OracleNotFound);
  EXPECT_THROW(lookup_oracle_p1("normal", MetricSpec::lp(3.0), 10), OracleNotFound);
}

TEST(OracleTable, ParseCustomText) {
  const auto t = OracleTable::parse("# comment\n\nnormal,l2,3,0.55\nuniform,l1,1,0.511\n");
  EXPECT_EQ(t.size(), 2u);
  EXPECT_DOUBLE_EQ(t.lookup("normal", MetricSpec::l2(), 3), 0.55);
  EXPECT_THROW(OracleTable::parse("normal,l2,3\n"), std::invalid_argument);
  EXPECT_THROW(OracleTable::parse("normal,l2,x,0.5\n"), std::invalid_argument);
}

}  // namespace
}  // namespace avw::nullmodel
