#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>

#include "avw/types.hpp"

namespace avw::geometry {

/// One sample group: n observations in R^D, stored row-wise.
class PointCloud {
 public:
  /// Throws std::invalid_argument when empty or when any entry is NaN/Inf.
  explicit PointCloud(Matrix data, std::string label = {});

  Eigen::Index size() const { return data_.rows(); }
  Eigen::Index dim() const { return data_.cols(); }
  std::span<const double> row(Eigen::Index i) const {
    return {data_.row(i).data(), static_cast<std::size_t>(data_.cols())};
  }
  const Matrix& data() const { return data_; }
  const std::string& label() const { return label_; }

 private:
  Matrix data_;
  std::string label_;
};

enum class MetricKind { LP, LInf, Canberra };

/// Distance family. LP(p) needs p >= 1. Canberra is a dissimilarity that is
/// neither translation nor scale equivariant; the consistency of the test and
/// the translation/scale invariance of P1 do not extend to it.
struct MetricSpec {
  MetricKind kind = MetricKind::LP;
  double p = 2.0;

  static MetricSpec lp(double p);
  static MetricSpec l1() { return lp(1.0); }
  static MetricSpec l2() { return lp(2.0); }
  static MetricSpec linf() { return {MetricKind::LInf, 0.0}; }
  static MetricSpec canberra() { return {MetricKind::Canberra, 0.0}; }

  /// Parses "l1", "l2", "lp:P", "linf", "canberra".
  static MetricSpec parse(std::string_view text);
  std::string name() const;

  /// False for Canberra (the caveat flag).
  bool equivariant() const { return kind != MetricKind::Canberra; }

  friend bool operator==(const MetricSpec&, const MetricSpec&) = default;
};

/// Throws std::invalid_argument on dimension mismatch or non-finite input.
double distance(const MetricSpec& metric, std::span<const double> x, std::span<const double> y);

/// Unchecked kernel used by the table builders and Monte Carlo loops.
double distance_unchecked(const MetricSpec& metric, const double* x, const double* y,
                          std::size_t dim);

/// Exact floating-point collisions among the distance values.
struct TieReport {
  /// Pairs (w, b), w a within distance (i < j), b a between distance, w == b.
  std::uint64_t cross_ties = 0;
  /// Unordered equal pairs among the n(n-1)/2 within distances.
  std::uint64_t within_duplicates = 0;
  /// Unordered equal pairs among the n*m between distances.
  std::uint64_t between_duplicates = 0;

  std::uint64_t total() const { return cross_ties + within_duplicates + between_duplicates; }
};

/// Materialized within-X (n x n, symmetric, zero diagonal) and X-Y (n x m)
/// distances. Immutable after construction.
class DistanceTables {
 public:
  DistanceTables(Matrix within_x, Matrix between, TieReport ties);

  Eigen::Index n() const { return within_x_.rows(); }
  Eigen::Index m() const { return between_.cols(); }
  const Matrix& within_x() const { return within_x_; }
  const Matrix& between() const { return between_; }
  const TieReport& ties() const { return ties_; }

 private:
  Matrix within_x_;
  Matrix between_;
  TieReport ties_;
};

/// Rows are filled in parallel when workers != 1; each entry is computed
/// independently, so the tables are bit-identical for any worker count.
DistanceTables build_distance_tables(const PointCloud& xs, const PointCloud& ys,
                                     const MetricSpec& metric, int workers = 1);

TieReport count_ties(const Matrix& within_x, const Matrix& between);

}  // namespace avw::geometry
