#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace avw::numerics {

/// One Philox4x32-10 block: a keyed bijection of a 128-bit counter.
std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> counter,
                                           std::array<std::uint32_t, 2> key);

/// SplitMix64 finalizer; used to derive independent seeds from (seed, tag).
std::uint64_t mix64(std::uint64_t x);

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag);

/// Counter-based random stream.
///
/// Every draw is a pure function of (seed, stream, position): the key is the
/// seed and the counter holds (position, stream). Two CounterRng objects built
/// from the same (seed, stream) produce bit-identical sequences no matter
/// which thread owns them, so Monte Carlo replication k can always use
/// stream k and be reproduced in isolation.
///
/// Satisfies UniformRandomBitGenerator for use with <algorithm> shuffles.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  CounterRng(std::uint64_t seed, std::uint64_t stream);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()();

  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  /// Uniform on (0, 1); never returns an endpoint.
  double uniform_open();
  /// Uniform integer in [0, bound), bias-free (Lemire's rejection method).
  std::uint64_t below(std::uint64_t bound);
  /// Standard normal via Box-Muller; the second variate of each pair is cached.
  double normal();

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }

 private:
  void refill();

  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t block_ = 0;
  std::array<std::uint32_t, 4> buffer_{};
  int used_ = 4;
  bool has_spare_normal_ = false;
  double spare_normal_ = 0.0;
};

}  // namespace avw::numerics
