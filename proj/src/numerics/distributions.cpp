#include "avw/numerics/distributions.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace avw::numerics {

std::string to_string(Family family) {
  switch (family) {
    case Family::Normal: return "normal";
    case Family::Uniform: return "uniform";
    case Family::Cauchy: return "cauchy";
    case Family::Gamma: return "gamma";
    case Family::Pareto: return "pareto";
    case Family::Product: return "product";
  }
  return "unknown";
}

namespace {

void require_dim(int dim) {
  if (dim < 1) throw std::invalid_argument("distribution dimension must be >= 1");
}

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw std::invalid_argument(std::string(what) + " must be positive and finite");
  }
}

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

}  // namespace

Distribution Distribution::normal(Vector mean, const Eigen::MatrixXd& cov) {
  const auto dim = static_cast<int>(mean.size());
  require_dim(dim);
  if (cov.rows() != dim || cov.cols() != dim) {
    throw std::invalid_argument("normal: covariance must be dim x dim");
  }
  if (!mean.allFinite() || !cov.allFinite()) {
    throw std::invalid_argument("normal: non-finite parameters");
  }
  const double scale = std::max(1.0, cov.cwiseAbs().maxCoeff());
  if ((cov - cov.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw std::invalid_argument("normal: covariance is not symmetric");
  }
  NormalLaw law;
  law.mean = std::move(mean);
  const Eigen::MatrixXd off_diagonal = cov - Eigen::MatrixXd(cov.diagonal().asDiagonal());
  law.diagonal = off_diagonal.cwiseAbs().maxCoeff() == 0.0;
  if (law.diagonal) {
    if ((cov.diagonal().array() < 0.0).any()) {
      throw std::invalid_argument("normal: covariance is not positive semidefinite");
    }
    law.std_dev = cov.diagonal().cwiseSqrt();
  } else {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
    if (eig.info() != Eigen::Success) {
      throw std::invalid_argument("normal: eigendecomposition of covariance failed");
    }
    Eigen::VectorXd values = eig.eigenvalues();
    const double tolerance = 1e-10 * scale * dim;
    if (values.minCoeff() < -tolerance) {
      throw std::invalid_argument("normal: covariance is not positive semidefinite");
    }
    values = values.cwiseMax(0.0);
    // Symmetric square root V diag(sqrt(lambda)) V^T.
    law.factor = eig.eigenvectors() * values.cwiseSqrt().asDiagonal() *
                 eig.eigenvectors().transpose();
  }
  return Distribution(std::move(law), dim);
}

Distribution Distribution::normal_iid(int dim, double mean, double variance) {
  require_dim(dim);
  if (!(variance >= 0.0) || !std::isfinite(variance) || !std::isfinite(mean)) {
    throw std::invalid_argument("normal: variance must be finite and >= 0");
  }
  NormalLaw law;
  law.mean = Vector::Constant(dim, mean);
  law.std_dev = Vector::Constant(dim, std::sqrt(variance));
  law.diagonal = true;
  return Distribution(std::move(law), dim);
}

Distribution Distribution::uniform(Vector lower, Vector upper) {
  const auto dim = static_cast<int>(lower.size());
  require_dim(dim);
  if (upper.size() != lower.size()) throw std::invalid_argument("uniform: bound size mismatch");
  if (!lower.allFinite() || !upper.allFinite() || (upper.array() < lower.array()).any()) {
    throw std::invalid_argument("uniform: need finite bounds with lower <= upper");
  }
  return Distribution(UniformLaw{std::move(lower), std::move(upper)}, dim);
}

Distribution Distribution::uniform_iid(int dim, double lower, double upper) {
  require_dim(dim);
  return uniform(Vector::Constant(dim, lower), Vector::Constant(dim, upper));
}

Distribution Distribution::cauchy(int dim, double location, double scale) {
  require_dim(dim);
  require_positive(scale, "cauchy scale");
  if (!std::isfinite(location)) throw std::invalid_argument("cauchy location must be finite");
  return Distribution(CauchyLaw{dim, location, scale}, dim);
}

Distribution Distribution::gamma(int dim, double shape, double scale) {
  require_dim(dim);
  require_positive(shape, "gamma shape");
  require_positive(scale, "gamma scale");
  return Distribution(GammaLaw{dim, shape, scale}, dim);
}

Distribution Distribution::pareto(int dim, double location, double shape) {
  require_dim(dim);
  require_positive(location, "pareto location");
  require_positive(shape, "pareto shape");
  return Distribution(ParetoLaw{dim, location, shape}, dim);
}

Distribution Distribution::product(std::vector<Distribution> parts) {
  if (parts.empty()) throw std::invalid_argument("product: needs at least one part");
  int dim = 0;
  for (const auto& p : parts) dim += p.dim();
  return Distribution(ProductLaw{std::move(parts)}, dim);
}

Family Distribution::family() const {
  return std::visit(Overloaded{[](const NormalLaw&) { return Family::Normal; },
                               [](const UniformLaw&) { return Family::Uniform; },
                               [](const CauchyLaw&) { return Family::Cauchy; },
                               [](const GammaLaw&) { return Family::Gamma; },
                               [](const ParetoLaw&) { return Family::Pareto; },
                               [](const ProductLaw&) { return Family::Product; }},
                    law_);
}

std::string Distribution::describe() const {
  std::ostringstream os;
  std::visit(Overloaded{[&](const NormalLaw& l) {
                          os << "normal(dim=" << dim_ << (l.diagonal ? ",diag" : ",full") << ")";
                        },
                        [&](const UniformLaw&) { os << "uniform(dim=" << dim_ << ")"; },
                        [&](const CauchyLaw& l) {
                          os << "cauchy(" << l.location << "," << l.scale << ")^" << l.dim;
                        },
                        [&](const GammaLaw& l) {
                          os << "gamma(" << l.shape << "," << l.scale << ")^" << l.dim;
                        },
                        [&](const ParetoLaw& l) {
                          os << "pareto(" << l.location << "," << l.shape << ")^" << l.dim;
                        },
                        [&](const ProductLaw& l) {
                          os << "product[";
                          for (std::size_t i = 0; i < l.parts.size(); ++i) {
                            os << (i ? " x " : "") << l.parts[i].describe();
                          }
                          os << "]";
                        }},
             law_);
  return os.str();
}

double draw_gamma(CounterRng& rng, double shape) {
  if (shape < 1.0) {
    // Boost: G(a) = G(a + 1) * U^(1/a).
    const double g = draw_gamma(rng, shape + 1.0);
    return g * std::pow(rng.uniform_open(), 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x;
    double v;
    do {
      x = rng.normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = rng.uniform_open();
    const double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
    if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
  }
}

void Distribution::draw(CounterRng& rng, std::span<double> out) const {
  std::visit(
      Overloaded{
          [&](const NormalLaw& l) {
            if (l.diagonal) {
              for (int i = 0; i < dim_; ++i) out[i] = l.mean[i] + l.std_dev[i] * rng.normal();
            } else {
              Eigen::VectorXd z(dim_);
              for (int i = 0; i < dim_; ++i) z[i] = rng.normal();
              Eigen::Map<Eigen::VectorXd>(out.data(), dim_) = l.mean + l.factor * z;
            }
          },
          [&](const UniformLaw& l) {
            for (int i = 0; i < dim_; ++i) {
              out[i] = l.lower[i] + (l.upper[i] - l.lower[i]) * rng.uniform();
            }
          },
          [&](const CauchyLaw& l) {
            for (int i = 0; i < dim_; ++i) {
              out[i] = l.location + l.scale * std::tan(std::numbers::pi * (rng.uniform_open() - 0.5));
            }
          },
          [&](const GammaLaw& l) {
            for (int i = 0; i < dim_; ++i) out[i] = l.scale * draw_gamma(rng, l.shape);
          },
          [&](const ParetoLaw& l) {
            for (int i = 0; i < dim_; ++i) {
              out[i] = l.location * std::pow(rng.uniform_open(), -1.0 / l.shape);
            }
          },
          [&](const ProductLaw& l) {
            std::size_t offset = 0;
            for (const auto& part : l.parts) {
              part.draw(rng, out.subspan(offset, static_cast<std::size_t>(part.dim())));
              offset += static_cast<std::size_t>(part.dim());
            }
          }},
      law_);
}

Matrix sample(const Distribution& dist, Eigen::Index count, CounterRng& rng) {
  if (count < 0) throw std::invalid_argument("sample: negative count");
  Matrix out(count, dist.dim());
  for (Eigen::Index i = 0; i < count; ++i) {
    dist.draw(rng, std::span<double>(out.row(i).data(), static_cast<std::size_t>(dist.dim())));
  }
  return out;
}

Matrix sample(const Distribution& dist, Eigen::Index count, std::uint64_t seed,
              std::uint64_t stream) {
  CounterRng rng(seed, stream);
  return sample(dist, count, rng);
}

Eigen::MatrixXd inverse_distance_covariance(int dim) {
  require_dim(dim);
  Eigen::MatrixXd cov(dim, dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) cov(i, j) = 1.0 / (1.0 + std::abs(i - j));
  }
  return cov;
}

}  // namespace avw::numerics
