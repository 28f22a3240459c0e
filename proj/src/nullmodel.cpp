#include "avw/nullmodel.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

#include "avw/combinatorics.hpp"
#include "avw/parallel.hpp"
#include "avw/statistic.hpp"

namespace avw::nullmodel {

std::string to_string(P1Source source) {
  switch (source) {
    case P1Source::MonteCarlo: return "monte_carlo";
    case P1Source::OracleTable: return "oracle_table";
    case P1Source::UpperBoundTwoThirds: return "upper_bound_two_thirds";
    case P1Source::TrivialBoundOne: return "trivial_bound_one";
    case P1Source::UserSupplied: return "user_supplied";
  }
  return "unknown";
}

P1Estimate fixed_p1(double value, P1Source source) {
  P1Estimate e;
  e.value = value;
  e.source = source;
  return e;
}

double var_h_approx(std::int64_t n, std::int64_t m, double p1) {
  if (n < 5 || m < 2) throw std::domain_error("variance model needs n >= 5 and m >= 2");
  if (!std::isfinite(p1) || p1 > 1.0) throw std::domain_error("P1 must lie in (1/2, 1]");
  if (p1 <= 0.5) {
    throw DegenerateVariance("P1 <= 1/2 gives a non-positive null variance");
  }
  const auto c11 = static_cast<long double>(combinatorics::card_C11(n, m));
  const long double v = 3.0L / 16.0L * static_cast<long double>(n + m - 6) /
                        static_cast<long double>(m - 1) * c11 *
                        (2.0L * static_cast<long double>(p1) - 1.0L);
  return static_cast<double>(v);
}

VarianceModel make_variance_model(std::int64_t n, std::int64_t m, const P1Estimate& p1) {
  VarianceModel model;
  model.n = n;
  model.m = m;
  model.p1 = p1;
  model.var_h = var_h_approx(n, m, p1.value);
  return model;
}

namespace {

constexpr std::int64_t kChunk = 4096;

// Counts agreeing indicator pairs; `Points` is the number of X draws per
// replication and `pattern` picks the four distances (a,b) <= (c,d) twice.
template <int Points>
P1Estimate estimate_agreement(const numerics::Distribution& law,
                              const geometry::MetricSpec& metric, std::int64_t reps,
                              std::uint64_t seed, int workers,
                              const std::array<int, 8>& pattern) {
  if (reps < 1) throw std::invalid_argument("Monte Carlo estimate needs reps >= 1");
  const auto dim = static_cast<std::size_t>(law.dim());
  const auto chunks = static_cast<std::size_t>((reps + kChunk - 1) / kChunk);
  std::vector<std::int64_t> hits(chunks, 0);

  parallel_for(chunks, workers, [&](std::size_t c) {
    std::vector<double> buf(Points * dim);
    const std::int64_t begin = static_cast<std::int64_t>(c) * kChunk;
    const std::int64_t end = std::min(reps, begin + kChunk);
    std::int64_t local = 0;
    for (std::int64_t k = begin; k < end; ++k) {
      numerics::CounterRng rng(seed, static_cast<std::uint64_t>(k));
      for (int p = 0; p < Points; ++p) {
        law.draw(rng, std::span<double>(buf.data() + p * dim, dim));
      }
      auto d = [&](int a, int b) {
        return geometry::distance_unchecked(metric, buf.data() + a * dim, buf.data() + b * dim,
                                            dim);
      };
      const bool first = d(pattern[0], pattern[1]) <= d(pattern[2], pattern[3]);
      const bool second = d(pattern[4], pattern[5]) <= d(pattern[6], pattern[7]);
      local += first == second;
    }
    hits[c] = local;
  });

  std::int64_t total = 0;
  for (std::int64_t h : hits) total += h;
  P1Estimate e;
  e.value = static_cast<double>(total) / static_cast<double>(reps);
  e.std_error = std::sqrt(e.value * (1.0 - e.value) / static_cast<double>(reps));
  e.reps = reps;
  e.seed = seed;
  e.source = P1Source::MonteCarlo;
  return e;
}

}  // namespace

P1Estimate estimate_p1(const numerics::Distribution& law, const geometry::MetricSpec& metric,
                       std::int64_t reps, std::uint64_t seed, int workers) {
  P1Estimate e = estimate_agreement<7>(law, metric, reps, seed, workers, {0, 1, 2, 3, 0, 4, 5, 6});
  e.outside_bounds = e.value < 0.5 - 4.0 * e.std_error || e.value > 2.0 / 3.0 + 4.0 * e.std_error;
  return e;
}

P1Estimate estimate_p2(const numerics::Distribution& law, const geometry::MetricSpec& metric,
                       std::int64_t reps, std::uint64_t seed, int workers) {
  return estimate_agreement<6>(law, metric, reps, seed, workers, {0, 1, 2, 3, 0, 1, 4, 5});
}

double var_h_mc_reference(std::int64_t n, std::int64_t m, const numerics::Distribution& law,
                          const geometry::MetricSpec& metric, std::int64_t reps,
                          std::uint64_t seed, int workers) {
  if (reps < 100) throw std::invalid_argument("var_h_mc_reference needs reps >= 100");
  if (n < 3 || m < 1 || n > 2000 || m > 2000) {
    throw std::invalid_argument("var_h_mc_reference needs 3 <= n <= 2000 and 1 <= m <= 2000");
  }
  std::vector<double> t(static_cast<std::size_t>(reps));
  parallel_for(t.size(), workers, [&](std::size_t k) {
    numerics::CounterRng rng(seed, k);
    const geometry::PointCloud xs(numerics::sample(law, n, rng));
    const geometry::PointCloud ys(numerics::sample(law, m, rng));
    const auto tables = geometry::build_distance_tables(xs, ys, metric);
    t[k] = static_cast<double>(statistic::t_statistic_fast(tables).t_value);
  });
  long double mean = 0.0L;
  for (double v : t) mean += v;
  mean /= static_cast<long double>(t.size());
  long double ss = 0.0L;
  for (double v : t) ss += (v - mean) * (v - mean);
  return static_cast<double>(ss / static_cast<long double>(t.size() - 1));
}

}  // namespace avw::nullmodel
