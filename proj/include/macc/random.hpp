#pragma once

#include <cstdint>
#include <random>

#include "macc/bitvector.hpp"

namespace macc {

/// Deterministic bit source. Every random draw in the library flows through
/// one of these, so a run is reproducible bit-for-bit from its seed.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  /// n fresh bits; consumes ceil(n / 64) engine words.
  BitVector bits(std::size_t n);
  std::uint64_t word() { return gen_(); }
  /// Uniform integer in [0, n), rejection sampled.
  std::uint64_t below(std::uint64_t n);

 private:
  std::mt19937_64 gen_;
};

}  // namespace macc
