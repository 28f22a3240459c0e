#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <tuple>

#include "avw/geometry.hpp"
#include "avw/numerics/distributions.hpp"

namespace avw::nullmodel {

/// Raised when the null variance would be zero or negative (P1 <= 1/2).
class DegenerateVariance : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

enum class P1Source { MonteCarlo, OracleTable, UpperBoundTwoThirds, TrivialBoundOne, UserSupplied };

std::string to_string(P1Source source);

struct P1Estimate {
  double value = 0.0;
  double std_error = 0.0;
  std::int64_t reps = 0;
  std::uint64_t seed = 0;
  P1Source source = P1Source::UserSupplied;
  /// Monte Carlo only: the estimate sits more than four standard errors
  /// outside the open interval (1/2, 2/3) that holds for continuous laws.
  bool outside_bounds = false;
};

P1Estimate fixed_p1(double value, P1Source source);

/// Leading-order null variance of T:
///   (3/16) (n + m - 6) / (m - 1) * card_C11(n, m) * (2 p1 - 1).
/// Throws DegenerateVariance for p1 <= 1/2 and std::domain_error for p1 > 1,
/// n < 5 or m < 2.
double var_h_approx(std::int64_t n, std::int64_t m, double p1);

struct VarianceModel {
  std::int64_t n = 0;
  std::int64_t m = 0;
  P1Estimate p1;
  double var_h = 0.0;
};

VarianceModel make_variance_model(std::int64_t n, std::int64_t m, const P1Estimate& p1);

/// Fraction of 7-point draws X1..X7 in which
/// 1{d(X1,X2) <= d(X3,X4)} == 1{d(X1,X5) <= d(X6,X7)}.
/// Replication k uses stream k of `seed`, so the result does not depend on
/// `workers`. Throws std::invalid_argument when reps < 1.
P1Estimate estimate_p1(const numerics::Distribution& law, const geometry::MetricSpec& metric,
                       std::int64_t reps, std::uint64_t seed, int workers = 1);

/// Same with the 6-point configuration
/// 1{d(X1,X2) <= d(X3,X4)} == 1{d(X1,X2) <= d(X5,X6)}; equals 2/3 for any
/// tie-free law.
P1Estimate estimate_p2(const numerics::Distribution& law, const geometry::MetricSpec& metric,
                       std::int64_t reps, std::uint64_t seed, int workers = 1);

/// Sample variance of T over `reps` null draws of both clouds from `law`.
/// Requires reps >= 100 and n, m <= 2000.
double var_h_mc_reference(std::int64_t n, std::int64_t m, const numerics::Distribution& law,
                          const geometry::MetricSpec& metric, std::int64_t reps,
                          std::uint64_t seed, int workers = 1);

/// Canonical law behind each tabulated distribution name:
/// normal N(0, I), uniform U[0,1]^D, gamma Gamma(1, scale 2)^D,
/// exponential Gamma(1, scale 1)^D, cauchy Cauchy(0, 1)^D, pareto Pareto(1, 1)^D.
numerics::Distribution distribution_from_name(std::string_view name, int dim);

class OracleNotFound : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// Tabulated P1 values keyed by (distribution, metric name, dim).
class OracleTable {
 public:
  /// Lines "distribution,metric,dim,p1"; '#' lines and blank lines skipped.
  static OracleTable parse(std::string_view text);
  static OracleTable load(const std::filesystem::path& path);
  /// The table compiled into the library.
  static const OracleTable& builtin();

  /// Throws OracleNotFound for a missing key; no interpolation.
  double lookup(std::string_view distribution, const geometry::MetricSpec& metric, int dim) const;

  std::size_t size() const { return cells_.size(); }
  const auto& cells() const { return cells_; }

 private:
  std::map<std::tuple<std::string, std::string, int>, double> cells_;
};

double lookup_oracle_p1(std::string_view distribution, const geometry::MetricSpec& metric, int dim);

}  // namespace avw::nullmodel
