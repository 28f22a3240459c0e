#include "avw/combinatorics.hpp"

#include <algorithm>
#include <initializer_list>
#include <stdexcept>

namespace avw::combinatorics {

namespace {

__extension__ typedef unsigned __int128 UCount;

void require_nonnegative(std::int64_t n, std::int64_t m) {
  if (n < 0 || m < 0) throw std::domain_error("sample sizes must be nonnegative");
}

Count checked_product(std::initializer_list<Count> factors) {
  Count result = 1;
  for (Count f : factors) {
    if (__builtin_mul_overflow(result, f, &result)) {
      throw std::overflow_error("combinatorial count exceeds 128-bit range");
    }
  }
  return result;
}

Count checked_add(Count a, Count b) {
  Count out;
  if (__builtin_add_overflow(a, b, &out)) {
    throw std::overflow_error("combinatorial count exceeds 128-bit range");
  }
  return out;
}

Count to_count(const Rational& value) {
  if (boost::multiprecision::denominator(value) != 1) {
    throw std::logic_error("closed form did not evaluate to an integer");
  }
  const BigInt num = boost::multiprecision::numerator(value);
  static const BigInt kMax = (BigInt(1) << 126);
  if (num > kMax || num < -kMax) throw std::overflow_error("count exceeds 128-bit range");
  Count out = 0;
  const bool negative = num < 0;
  BigInt mag = negative ? BigInt(-num) : num;
  // Assemble from 32-bit limbs to stay independent of cpp_int internals.
  Count base = 1;
  while (mag > 0) {
    const auto limb = static_cast<std::uint32_t>(mag & 0xFFFFFFFFu);
    out += static_cast<Count>(limb) * base;
    mag >>= 32;
    base <<= 32;
  }
  return negative ? -out : out;
}

BigInt factorial(std::int64_t k) {
  BigInt out = 1;
  for (std::int64_t i = 2; i <= k; ++i) out *= i;
  return out;
}

}  // namespace

std::string to_string(Count value) {
  if (value == 0) return "0";
  const bool negative = value < 0;
  UCount mag = negative ? static_cast<UCount>(-(value + 1)) + 1
                                   : static_cast<UCount>(value);
  std::string digits;
  while (mag > 0) {
    digits.push_back(static_cast<char>('0' + static_cast<int>(mag % 10)));
    mag /= 10;
  }
  if (negative) digits.push_back('-');
  std::reverse(digits.begin(), digits.end());
  return digits;
}

Count card_I(std::int64_t n, std::int64_t m) {
  require_nonnegative(n, m);
  if (n < 3 || m == 0) return 0;
  return checked_product({n, n - 1, n - 2, m}) / 2;
}

Count card_I2(std::int64_t n, std::int64_t m) {
  require_nonnegative(n, m);
  if (n < 2 || m < 2) return 0;
  return checked_product({n, n - 1, m, m - 1});
}

Count card_C11(std::int64_t n, std::int64_t m) {
  require_nonnegative(n, m);
  if (n <= 4 || m <= 1) return 0;
  return checked_product({n, m, m - 1, n - 1, n - 2, n - 3, n - 4}) / 3;
}

MultiplierTable shared_index_multipliers(std::int64_t n, std::int64_t m) {
  if (n < 5 || m < 2) throw std::domain_error("shared_index_multipliers: need n >= 5, m >= 2");
  const Rational half(1, 2);
  const Rational three_quarters(3, 4);
  MultiplierTable t{};
  for (auto& row : t) row.fill(Rational(0));
  t[0][0] = 1;
  t[1][1] = 1;
  t[0][1] = half;
  t[1][0] = half;
  t[2][0] = three_quarters;
  t[2][1] = three_quarters;
  t[0][2] = three_quarters;
  t[1][2] = three_quarters;
  t[2][2] = three_quarters;
  t[3][3] = three_quarters * Rational(n - 5, m - 1);
  return t;
}

Count neighborhood_size_I1(std::int64_t n, std::int64_t m) {
  if (n < 5 || m < 1) throw std::domain_error("neighborhood_size_I1: need n >= 5, m >= 1");
  // n^3/2 + 9mn^2/2 - 6n^2 - 45mn/2 + 47n/2 + 30m - 30
  const Rational value = Rational(checked_product({n, n, n}), 2) +
                         Rational(checked_product({9, m, n, n}), 2) - checked_product({6, n, n}) -
                         Rational(checked_product({45, m, n}), 2) + Rational(47 * n, 2) + 30 * m -
                         30;
  return to_count(value);
}

Count neighborhood_union_I1side(std::int64_t n, std::int64_t m) {
  if (n < 5 || m < 3) throw std::domain_error("neighborhood_union_I1side: need n >= 5, m >= 3");
  // n^3/2 + 13n^2m/2 + 6nm^2 - 8n^2 - 12m^2 - 85nm/2 + 75n/2 + 66m - 54
  const Rational value = Rational(checked_product({n, n, n}), 2) +
                         Rational(checked_product({13, n, n, m}), 2) +
                         checked_product({6, n, m, m}) - checked_product({8, n, n}) -
                         checked_product({12, m, m}) - Rational(checked_product({85, n, m}), 2) +
                         Rational(75 * n, 2) + 66 * m - 54;
  return to_count(value);
}

Count neighborhood_union_I2side(std::int64_t n, std::int64_t m) {
  if (n < 5 || m < 3) throw std::domain_error("neighborhood_union_I2side: need n >= 5, m >= 3");
  // n^3 + 7n^2m + 4nm^2 - 15n^2 - 36nm - 6m^2 + 56n + 42m - 60
  Count v = checked_product({n, n, n});
  v = checked_add(v, checked_product({7, n, n, m}));
  v = checked_add(v, checked_product({4, n, m, m}));
  v -= checked_product({15, n, n});
  v -= checked_product({36, n, m});
  v -= checked_product({6, m, m});
  v = checked_add(v, 56 * static_cast<Count>(n) + 42 * static_cast<Count>(m) - 60);
  return v;
}

SubsamplingConstants subsampling_constants(std::int64_t n, std::int64_t m) {
  if (n < 3) throw std::domain_error("subsampling_constants: need n >= 3");
  SubsamplingConstants out;
  out.r = n / 3;
  const std::int64_t unpaired = n - 2 * out.r;
  if (m < unpaired) {
    throw std::domain_error("subsampling_constants: need m >= n - 2 floor(n/3) Y points");
  }
  out.c1 = Rational(BigInt(2 * unpaired), BigInt(checked_product({m, n, n - 1, n - 2})));
  // A subsampling holds `unpaired` between distances; with fewer than two
  // there is no between/between comparison and c2 vanishes.
  if (unpaired >= 2) {
    out.c2 = Rational(BigInt(unpaired * (unpaired - 1)), BigInt(checked_product({n, m, n - 1, m - 1})));
  } else {
    out.c2 = 0;
  }
  out.card_D = factorial(n) * factorial(m) /
               ((BigInt(1) << out.r) * factorial(unpaired) * factorial(m - unpaired));
  return out;
}

CombinatoricsReport report(std::int64_t n, std::int64_t m) {
  require_nonnegative(n, m);
  CombinatoricsReport r;
  r.n = n;
  r.m = m;
  r.card_I1 = card_I(n, m);
  r.card_I2 = card_I2(n, m);
  r.card_C11 = card_C11(n, m);
  if (n >= 5 && m >= 1) r.neighborhood_I1 = neighborhood_size_I1(n, m);
  if (n >= 5 && m >= 3) {
    r.neighborhood_union_I1side = neighborhood_union_I1side(n, m);
    r.neighborhood_union_I2side = neighborhood_union_I2side(n, m);
  }
  if (n >= 3 && m >= n - 2 * (n / 3)) r.subsampling = subsampling_constants(n, m);
  return r;
}

std::vector<IndexTuple> enumerate_index_set(std::int64_t n, std::int64_t m) {
  constexpr Count kGuard = 10'000'000;
  if (card_I(n, m) > kGuard) {
    throw std::length_error("enumerate_index_set: index set exceeds 10^7 tuples");
  }
  std::vector<IndexTuple> out;
  out.reserve(static_cast<std::size_t>(card_I(n, m)));
  for (std::int64_t i1 = 1; i1 <= n; ++i1) {
    for (std::int64_t i2 = i1 + 1; i2 <= n; ++i2) {
      for (std::int64_t i3 = 1; i3 <= n; ++i3) {
        if (i3 == i1 || i3 == i2) continue;
        for (std::int64_t i4 = n + 1; i4 <= n + m; ++i4) out.push_back({i1, i2, i3, i4});
      }
    }
  }
  return out;
}

}  // namespace avw::combinatorics
