#include "avw/geometry.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "avw/parallel.hpp"

namespace avw::geometry {

PointCloud::PointCloud(Matrix data, std::string label)
    : data_(std::move(data)), label_(std::move(label)) {
  if (data_.rows() < 1 || data_.cols() < 1) {
    throw std::invalid_argument("PointCloud: need at least one observation and one coordinate");
  }
  if (!data_.allFinite()) {
    throw std::invalid_argument("PointCloud: entries must be finite");
  }
}

MetricSpec MetricSpec::lp(double p) {
  if (!(p >= 1.0) || !std::isfinite(p)) {
    throw std::invalid_argument("LP metric requires finite p >= 1");
  }
  return {MetricKind::LP, p};
}

MetricSpec MetricSpec::parse(std::string_view text) {
  if (text == "l1") return l1();
  if (text == "l2") return l2();
  if (text == "linf") return linf();
  if (text == "canberra") return canberra();
  std::string_view number;
  if (text.starts_with("lp:")) {
    number = text.substr(3);
  } else if (text.size() > 1 && text[0] == 'l') {
    number = text.substr(1);
  }
  double p = 0.0;
  if (!number.empty()) {
    const auto [ptr, ec] = std::from_chars(number.data(), number.data() + number.size(), p);
    if (ec == std::errc() && ptr == number.data() + number.size()) return lp(p);
  }
  throw std::invalid_argument("unknown metric '" + std::string(text) +
                              "' (expected l1, l2, lp:P, linf or canberra)");
}

std::string MetricSpec::name() const {
  switch (kind) {
    case MetricKind::LInf: return "linf";
    case MetricKind::Canberra: return "canberra";
    case MetricKind::LP: break;
  }
  if (p == 1.0) return "l1";
  if (p == 2.0) return "l2";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), p);
  return "lp:" + std::string(buf, res.ptr);
}

double distance_unchecked(const MetricSpec& metric, const double* x, const double* y,
                          std::size_t dim) {
  switch (metric.kind) {
    case MetricKind::LP: {
      if (metric.p == 1.0) {
        double s = 0.0;
        for (std::size_t i = 0; i < dim; ++i) s += std::fabs(x[i] - y[i]);
        return s;
      }
      if (metric.p == 2.0) {
        double s = 0.0;
        for (std::size_t i = 0; i < dim; ++i) {
          const double d = x[i] - y[i];
          s += d * d;
        }
        return std::sqrt(s);
      }
      double s = 0.0;
      for (std::size_t i = 0; i < dim; ++i) s += std::pow(std::fabs(x[i] - y[i]), metric.p);
      return std::pow(s, 1.0 / metric.p);
    }
    case MetricKind::LInf: {
      double s = 0.0;
      for (std::size_t i = 0; i < dim; ++i) s = std::max(s, std::fabs(x[i] - y[i]));
      return s;
    }
    case MetricKind::Canberra: {
      double s = 0.0;
      for (std::size_t i = 0; i < dim; ++i) {
        const double denom = std::fabs(x[i]) + std::fabs(y[i]);
        // 0/0 terms (both coordinates zero) contribute nothing.
        if (denom > 0.0) s += std::fabs(x[i] - y[i]) / denom;
      }
      return s;
    }
  }
  return 0.0;
}

double distance(const MetricSpec& metric, std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("distance: dimension mismatch");
  if (x.empty()) throw std::invalid_argument("distance: empty vectors");
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!std::isfinite(x[i]) || !std::isfinite(y[i])) {
      throw std::invalid_argument("distance: non-finite input");
    }
  }
  return distance_unchecked(metric, x.data(), y.data(), x.size());
}

DistanceTables::DistanceTables(Matrix within_x, Matrix between, TieReport ties)
    : within_x_(std::move(within_x)), between_(std::move(between)), ties_(ties) {
  if (within_x_.rows() != within_x_.cols() || between_.rows() != within_x_.rows()) {
    throw std::invalid_argument("DistanceTables: inconsistent shapes");
  }
}

namespace {

std::uint64_t equal_pairs_in_sorted(const std::vector<double>& sorted) {
  std::uint64_t total = 0;
  std::size_t i = 0;
  while (i < sorted.size()) {
    std::size_t j = i + 1;
    while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
    const std::uint64_t run = j - i;
    total += run * (run - 1) / 2;
    i = j;
  }
  return total;
}

}  // namespace

TieReport count_ties(const Matrix& within_x, const Matrix& between) {
  const Eigen::Index n = within_x.rows();
  std::vector<double> w;
  w.reserve(static_cast<std::size_t>(n * (n - 1) / 2));
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) w.push_back(within_x(i, j));
  }
  std::vector<double> b(between.data(), between.data() + between.size());
  std::sort(w.begin(), w.end());
  std::sort(b.begin(), b.end());

  TieReport report;
  report.within_duplicates = equal_pairs_in_sorted(w);
  report.between_duplicates = equal_pairs_in_sorted(b);
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < w.size() && j < b.size()) {
    if (w[i] < b[j]) {
      ++i;
    } else if (b[j] < w[i]) {
      ++j;
    } else {
      const double v = w[i];
      std::uint64_t cw = 0;
      std::uint64_t cb = 0;
      while (i < w.size() && w[i] == v) ++i, ++cw;
      while (j < b.size() && b[j] == v) ++j, ++cb;
      report.cross_ties += cw * cb;
    }
  }
  return report;
}

DistanceTables build_distance_tables(const PointCloud& xs, const PointCloud& ys,
                                     const MetricSpec& metric, int workers) {
  if (xs.dim() != ys.dim()) {
    throw std::invalid_argument("build_distance_tables: point clouds differ in dimension");
  }
  const Eigen::Index n = xs.size();
  const Eigen::Index m = ys.size();
  const auto dim = static_cast<std::size_t>(xs.dim());
  Matrix within = Matrix::Zero(n, n);
  Matrix between(n, m);
  const double* xdata = xs.data().data();
  const double* ydata = ys.data().data();

  // Row i owns within(i, j > i), within(j > i, i) and between(i, :).
  parallel_for(static_cast<std::size_t>(n), workers, [&](std::size_t row) {
    const auto i = static_cast<Eigen::Index>(row);
    const double* xi = xdata + row * dim;
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double d = distance_unchecked(metric, xi, xdata + static_cast<std::size_t>(j) * dim, dim);
      within(i, j) = d;
      within(j, i) = d;
    }
    for (Eigen::Index l = 0; l < m; ++l) {
      between(i, l) = distance_unchecked(metric, xi, ydata + static_cast<std::size_t>(l) * dim, dim);
    }
  });

  TieReport ties = count_ties(within, between);
  return DistanceTables(std::move(within), std::move(between), ties);
}

}  // namespace avw::geometry
