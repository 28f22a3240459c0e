#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "avw/geometry.hpp"

namespace avw::statistic {

struct StatisticResult {
  /// Number of admissible tuples with d(X_i1, X_i2) <= d(X_i3, Y_i4).
  std::uint64_t t_value = 0;
  std::uint64_t card_i = 0;
  /// t_value / card_i; estimates P(d(X1, X2) <= d(X3, Y)).
  double normalized = 0.0;
  /// Admissible tuples whose two distances are exactly equal.
  std::uint64_t tie_count = 0;
  /// Set when tie_count > 0.
  std::optional<std::string> warning;
};

/// Direct loop over every admissible tuple. O(n^3 m).
/// Throws std::invalid_argument when n < 3 or m < 1.
StatisticResult t_statistic_bruteforce(const geometry::DistanceTables& tables);

/// Sort-and-sweep counter, O(n (n + m) log(n + m)). Equal to the brute-force
/// count for every input, ties included. The per-point sweeps may be spread
/// over `workers` threads; the integer reduction is schedule independent.
StatisticResult t_statistic_fast(const geometry::DistanceTables& tables, int workers = 1);

}  // namespace avw::statistic
