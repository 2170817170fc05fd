#include "macc/random.hpp"

#include <limits>
#include <stdexcept>

namespace macc {

BitVector Rng::bits(std::size_t n) {
  BitVector v(n);
  std::size_t i = 0;
  while (i < n) {
    std::uint64_t w = gen_();
    for (std::size_t j = 0; j < 64 && i < n; ++j, ++i) v.set_bit(i, (w >> j) & 1u);
  }
  return v;
}

std::uint64_t Rng::below(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("Rng::below: n must be positive");
  const std::uint64_t max = std::numeric_limits<std::uint64_t>::max();
  const std::uint64_t limit = max - max % n;
  std::uint64_t w;
  do {
    w = gen_();
  } while (w >= limit);
  return w % n;
}

}  // namespace macc
