#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace macc {

/// Fixed-length bit string over GF(2). Bit i is stored in words()[i / 64]
/// at position i % 64; bits past size() are kept zero so equality works on
/// the raw words.
class BitVector {
 public:
  BitVector() = default;
  explicit BitVector(std::size_t nbits) : nbits_(nbits), words_((nbits + 63) / 64, 0) {}

  static BitVector from_string(std::string_view bits);
  static BitVector from_uint(std::uint64_t value, std::size_t nbits);

  std::size_t size() const { return nbits_; }
  bool empty() const { return nbits_ == 0; }

  bool bit(std::size_t i) const;
  void set_bit(std::size_t i, bool value);

  BitVector& operator^=(const BitVector& rhs);
  friend BitVector operator^(BitVector lhs, const BitVector& rhs) {
    lhs ^= rhs;
    return lhs;
  }
  bool operator==(const BitVector&) const = default;

  /// Copy of bits [offset, offset + length).
  BitVector slice(std::size_t offset, std::size_t length) const;
  /// Overwrites bits [offset, offset + part.size()) with part.
  void splice(std::size_t offset, const BitVector& part);
  void append(const BitVector& tail);
  void append_bit(bool value);

  std::uint64_t as_uint() const;  // requires size() <= 64
  std::string to_string() const;  // '0'/'1' characters, index order
  const std::vector<std::uint64_t>& words() const { return words_; }

 private:
  std::size_t nbits_ = 0;
  std::vector<std::uint64_t> words_;
};

}  // namespace macc
