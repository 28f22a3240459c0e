#include "avw/statistic.hpp"

#include <algorithm>
#include <stdexcept>
#include <vector>

#include "avw/combinatorics.hpp"
#include "avw/parallel.hpp"

namespace avw::statistic {

namespace {

struct PairCounts {
  std::uint64_t less_equal = 0;
  std::uint64_t equal = 0;
};

std::uint64_t checked_card(const geometry::DistanceTables& tables) {
  const auto n = static_cast<std::int64_t>(tables.n());
  const auto m = static_cast<std::int64_t>(tables.m());
  if (n < 3) throw std::invalid_argument("statistic needs n >= 3 X observations");
  if (m < 1) throw std::invalid_argument("statistic needs m >= 1 Y observations");
  const combinatorics::Count card = combinatorics::card_I(n, m);
  if (card > static_cast<combinatorics::Count>(UINT64_MAX)) {
    throw std::overflow_error("index set size exceeds 64-bit range");
  }
  return static_cast<std::uint64_t>(card);
}

StatisticResult finish(std::uint64_t t, std::uint64_t card, std::uint64_t ties) {
  StatisticResult r;
  r.t_value = t;
  r.card_i = card;
  r.normalized = static_cast<double>(t) / static_cast<double>(card);
  r.tie_count = ties;
  if (ties > 0) {
    r.warning = std::to_string(ties) +
                " distance comparisons are exact ties; the null variance model assumes none";
  }
  return r;
}

// Pairs (a, b) with a from `lo` and b from `hi`, both sorted ascending.
PairCounts count_sorted(const std::vector<double>& lo, const std::vector<double>& hi) {
  PairCounts c;
  std::size_t below = 0;  // entries of lo that are < current b
  std::size_t upto = 0;   // entries of lo that are <= current b
  for (double b : hi) {
    while (below < lo.size() && lo[below] < b) ++below;
    if (upto < below) upto = below;
    while (upto < lo.size() && lo[upto] <= b) ++upto;
    c.less_equal += upto;
    c.equal += upto - below;
  }
  return c;
}

}  // namespace

StatisticResult t_statistic_bruteforce(const geometry::DistanceTables& tables) {
  const std::uint64_t card = checked_card(tables);
  const Matrix& w = tables.within_x();
  const Matrix& b = tables.between();
  const Eigen::Index n = tables.n();
  const Eigen::Index m = tables.m();
  std::uint64_t t = 0;
  std::uint64_t ties = 0;
  for (Eigen::Index i1 = 0; i1 < n; ++i1) {
    for (Eigen::Index i2 = i1 + 1; i2 < n; ++i2) {
      const double lhs = w(i1, i2);
      for (Eigen::Index i3 = 0; i3 < n; ++i3) {
        if (i3 == i1 || i3 == i2) continue;
        for (Eigen::Index i4 = 0; i4 < m; ++i4) {
          const double rhs = b(i3, i4);
          t += lhs <= rhs;
          ties += lhs == rhs;
        }
      }
    }
  }
  return finish(t, card, ties);
}

StatisticResult t_statistic_fast(const geometry::DistanceTables& tables, int workers) {
  const std::uint64_t card = checked_card(tables);
  const Matrix& w = tables.within_x();
  const Matrix& b = tables.between();
  const Eigen::Index n = tables.n();
  const Eigen::Index m = tables.m();

  // A: all (within pair, between pair) comparisons.
  std::vector<double> within;
  within.reserve(static_cast<std::size_t>(n * (n - 1) / 2));
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) within.push_back(w(i, j));
  }
  std::vector<double> between(b.data(), b.data() + b.size());
  std::sort(within.begin(), within.end());
  std::sort(between.begin(), between.end());
  const PairCounts all = count_sorted(within, between);

  // B: comparisons where the between point X_k is also in the within pair.
  std::vector<PairCounts> per_point(static_cast<std::size_t>(n));
  parallel_for(static_cast<std::size_t>(n), workers, [&](std::size_t k) {
    const auto kk = static_cast<Eigen::Index>(k);
    std::vector<double> own_within;
    own_within.reserve(static_cast<std::size_t>(n - 1));
    for (Eigen::Index j = 0; j < n; ++j) {
      if (j != kk) own_within.push_back(w(kk, j));
    }
    std::vector<double> own_between(b.row(kk).data(), b.row(kk).data() + m);
    std::sort(own_within.begin(), own_within.end());
    std::sort(own_between.begin(), own_between.end());
    per_point[k] = count_sorted(own_within, own_between);
  });

  std::uint64_t excluded = 0;
  std::uint64_t excluded_ties = 0;
  for (const PairCounts& c : per_point) {
    excluded += c.less_equal;
    excluded_ties += c.equal;
  }
  return finish(all.less_equal - excluded, card, all.equal - excluded_ties);
}

}  // namespace avw::statistic
