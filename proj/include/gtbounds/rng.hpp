#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <vector>

namespace gtbounds {

/// Philox4x32-10 block function (Salmon et al., "Parallel random numbers: as easy as 1, 2, 3").
/// Maps a 128-bit counter and 64-bit key to 128 pseudo-random bits.
std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> counter,
                                           std::array<std::uint32_t, 2> key);

/// Counter-based random stream. The key is the run seed; the counter holds a block index
/// plus a 96-bit stream identifier (stream, lane), so any (seed, stream, lane) triple names
/// an independent substream that can be regenerated in any order on any worker.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  CounterRng(std::uint64_t seed, std::uint64_t stream, std::uint32_t lane = 0);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() { return next_u64(); }

  std::uint64_t next_u64();

  /// Uniform on [0, 1) with 53 random bits.
  double uniform();

  /// Uniform integer in [0, bound); bound > 0. Lemire's nearly-divisionless rejection.
  std::uint64_t below(std::uint64_t bound);

  bool bernoulli(double prob) { return uniform() < prob; }

 private:
  void refill();

  std::array<std::uint32_t, 2> key_;
  std::array<std::uint32_t, 4> counter_;
  std::array<std::uint32_t, 4> block_{};
  int used_ = 4;
};

/// Uniformly random size-k subset of {0, ..., p-1}, sorted ascending (Floyd's algorithm).
std::vector<int> random_subset(int p, int k, CounterRng& rng);

}  // namespace gtbounds
