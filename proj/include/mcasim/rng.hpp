// Copyright the mcasim contributors. Licensed under the terms of the
// Apache 2.0 license. See LICENSE in the project root.
#pragma once

#include <array>
#include <cstdint>
#include <string_view>

namespace mcasim {

// 64-bit FNV-1a over a byte string; maps stream labels to stream keys.
std::uint64_t fnv1a64(std::string_view s);

// Reproducible random stream.
//
// Generator: xoshiro256** with state expanded from a 64-bit key through
// SplitMix64. A stream key is derived from (master_seed, label); child
// streams derive their key from the parent key and a 64-bit fork index.
// The whole construction is integer-only, so a given (master_seed, label,
// fork chain) replays the same variate sequence on every platform, while
// distinct identifiers give statistically independent streams.
class RngStream {
 public:
  RngStream(std::uint64_t master_seed, std::string_view label);

  // Independent child stream; fork(i) of equal streams are equal, distinct
  // indices are independent. Forking does not disturb this stream's state.
  RngStream fork(std::uint64_t index) const;

  std::uint64_t next_u64();

  // Uniform on [0, 1), 53-bit resolution.
  double next_double();

  // Exponential with the given mean (> 0).
  double exponential(double mean);

  bool bernoulli(double p);

  // Uniform integer in [0, bound), bound > 0. Rejection sampling, no bias.
  std::uint64_t uniform_int(std::uint64_t bound);

  std::uint64_t key() const { return key_; }

 private:
  explicit RngStream(std::uint64_t key);

  std::uint64_t key_;
  std::array<std::uint64_t, 4> state_;
};

}  // namespace mcasim
