#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace avw::combinatorics {

/// Checked 128-bit count. Products overflow-check every step.
__extension__ typedef __int128 Count;
using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

std::string to_string(Count value);

/// Number of admissible comparison tuples (i1 < i2, i3 not in {i1, i2}, i4 a
/// Y index): n(n-1)(n-2)m / 2.
Count card_I(std::int64_t n, std::int64_t m);

/// Ordered between/between comparison tuples (i1 != i3 in X, i2 != i4 in Y):
/// n(n-1)m(m-1).
Count card_I2(std::int64_t n, std::int64_t m);

/// Ordered pairs of I-tuples that share exactly the index i1 = j1:
/// n m (m-1)(n-1)(n-2)(n-3)(n-4) / 3.
Count card_C11(std::int64_t n, std::int64_t m);

/// Multipliers of card_C11 for every single-shared-index configuration.
/// Entry [p][q] corresponds to i_{p+1} = j_{q+1}. Requires n >= 5, m >= 2.
using MultiplierTable = std::array<std::array<Rational, 4>, 4>;
MultiplierTable shared_index_multipliers(std::int64_t n, std::int64_t m);

/// Closed neighborhood size (vertex included) of any tuple in the dependency
/// graph on I. Requires n >= 5, m >= 1.
Count neighborhood_size_I1(std::int64_t n, std::int64_t m);

/// Closed neighborhood sizes in the graph on I ∪ I2 for a vertex of I and of
/// I2 respectively. Require n >= 5, m >= 3.
Count neighborhood_union_I1side(std::int64_t n, std::int64_t m);
Count neighborhood_union_I2side(std::int64_t n, std::int64_t m);

/// Subsamplings are counted with their r within pairs in order.
struct SubsamplingConstants {
  std::int64_t r = 0;  // floor(n / 3) disjoint within pairs per subsampling
  /// 2(n - 2r) / (m n (n - 1)(n - 2)). The share of subsamplings that contain
  /// a fixed within/between comparison is r * c1.
  Rational c1;
  Rational c2;    // share of subsamplings containing a fixed between/between comparison
  BigInt card_D;  // n! m! / (2^r (n - 2r)! (m - n + 2r)!)
};

/// Requires n >= 3 and m >= n - 2 floor(n/3).
SubsamplingConstants subsampling_constants(std::int64_t n, std::int64_t m);

struct CombinatoricsReport {
  std::int64_t n = 0;
  std::int64_t m = 0;
  Count card_I1 = 0;
  Count card_I2 = 0;
  Count card_C11 = 0;
  std::optional<Count> neighborhood_I1;
  std::optional<Count> neighborhood_union_I1side;
  std::optional<Count> neighborhood_union_I2side;
  std::optional<SubsamplingConstants> subsampling;
};

/// Every quantity that is defined for (n, m); undefined ones stay empty.
CombinatoricsReport report(std::int64_t n, std::int64_t m);

/// A comparison tuple (i1, i2, i3, i4) with 1-based indices; Y indices are
/// offset by n, so for n = 3, m = 1 the first tuple is (1, 2, 3, 4).
using IndexTuple = std::array<std::int64_t, 4>;

/// Exhaustive list of I in lexicographic order. Throws std::length_error
/// when card_I exceeds 10^7.
std::vector<IndexTuple> enumerate_index_set(std::int64_t n, std::int64_t m);

}  // namespace avw::combinatorics
