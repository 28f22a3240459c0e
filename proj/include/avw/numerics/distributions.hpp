#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "avw/numerics/random.hpp"
#include "avw/types.hpp"

namespace avw::numerics {

enum class Family { Normal, Uniform, Cauchy, Gamma, Pareto, Product };

std::string to_string(Family family);

/// A sampling law on R^dim.
///
/// Normal carries an arbitrary mean vector and a positive semidefinite
/// covariance; it is sampled through the symmetric square root of the
/// covariance, so singular (e.g. zero-variance) laws are allowed. The
/// univariate families (Uniform, Cauchy, Gamma, Pareto) have independent
/// coordinates. Product concatenates independent blocks, which is how
/// "shift only the first coordinate" alternatives are expressed.
class Distribution {
 public:
  struct NormalLaw {
    Vector mean;
    Matrix factor;  // factor * factor^T == covariance
    Vector std_dev; // used instead of factor when the covariance is diagonal
    bool diagonal = true;
  };
  struct UniformLaw {
    Vector lower;
    Vector upper;
  };
  struct CauchyLaw {
    int dim;
    double location;
    double scale;
  };
  struct GammaLaw {
    int dim;
    double shape;
    double scale;
  };
  struct ParetoLaw {
    int dim;
    double location;  // minimum value x_m
    double shape;
  };
  struct ProductLaw {
    std::vector<Distribution> parts;
  };

  /// Throws std::invalid_argument if cov is not symmetric PSD or sizes disagree.
  static Distribution normal(Vector mean, const Eigen::MatrixXd& cov);
  static Distribution normal_iid(int dim, double mean = 0.0, double variance = 1.0);
  static Distribution uniform(Vector lower, Vector upper);
  static Distribution uniform_iid(int dim, double lower = 0.0, double upper = 1.0);
  static Distribution cauchy(int dim, double location = 0.0, double scale = 1.0);
  static Distribution gamma(int dim, double shape, double scale);
  static Distribution pareto(int dim, double location, double shape);
  static Distribution product(std::vector<Distribution> parts);

  int dim() const { return dim_; }
  Family family() const;
  std::string describe() const;

  /// Writes one observation into out (size dim()).
  void draw(CounterRng& rng, std::span<double> out) const;

  const auto& law() const { return law_; }

 private:
  using Law = std::variant<NormalLaw, UniformLaw, CauchyLaw, GammaLaw, ParetoLaw, ProductLaw>;
  Distribution(Law law, int dim) : law_(std::move(law)), dim_(dim) {}

  Law law_;
  int dim_;
};

/// Standard gamma(shape, 1) variate by Marsaglia and Tsang's squeeze method.
double draw_gamma(CounterRng& rng, double shape);

/// count x dim matrix; rows are independent observations.
Matrix sample(const Distribution& dist, Eigen::Index count, CounterRng& rng);
Matrix sample(const Distribution& dist, Eigen::Index count, std::uint64_t seed,
              std::uint64_t stream);

/// Sigma_ij = 1 / (1 + |i - j|): the dependent-components covariance.
Eigen::MatrixXd inverse_distance_covariance(int dim);

}  // namespace avw::numerics
