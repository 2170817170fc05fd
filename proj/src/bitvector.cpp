#include "macc/bitvector.hpp"

#include <stdexcept>

namespace macc {

namespace {
constexpr std::size_t kWordBits = 64;
}

BitVector BitVector::from_string(std::string_view bits) {
  BitVector v(bits.size());
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] == '1')
      v.set_bit(i, true);
    else if (bits[i] != '0')
      throw std::invalid_argument("BitVector::from_string: expected only '0' or '1'");
  }
  return v;
}

BitVector BitVector::from_uint(std::uint64_t value, std::size_t nbits) {
  if (nbits > 64) throw std::invalid_argument("BitVector::from_uint: nbits > 64");
  if (nbits < 64 && (value >> nbits) != 0)
    throw std::invalid_argument("BitVector::from_uint: value does not fit");
  BitVector v(nbits);
  if (nbits > 0) v.words_[0] = value;
  return v;
}

bool BitVector::bit(std::size_t i) const {
  if (i >= nbits_) throw std::out_of_range("BitVector::bit: index past end");
  return (words_[i / kWordBits] >> (i % kWordBits)) & 1u;
}

void BitVector::set_bit(std::size_t i, bool value) {
  if (i >= nbits_) throw std::out_of_range("BitVector::set_bit: index past end");
  const std::uint64_t mask = std::uint64_t{1} << (i % kWordBits);
  if (value)
    words_[i / kWordBits] |= mask;
  else
    words_[i / kWordBits] &= ~mask;
}

BitVector& BitVector::operator^=(const BitVector& rhs) {
  if (nbits_ != rhs.nbits_) throw std::invalid_argument("BitVector: xor of unequal lengths");
  for (std::size_t w = 0; w < words_.size(); ++w) words_[w] ^= rhs.words_[w];
  return *this;
}

BitVector BitVector::slice(std::size_t offset, std::size_t length) const {
  if (offset + length > nbits_) throw std::out_of_range("BitVector::slice: range past end");
  BitVector out(length);
  for (std::size_t i = 0; i < length; ++i) out.set_bit(i, bit(offset + i));
  return out;
}

void BitVector::splice(std::size_t offset, const BitVector& part) {
  if (offset + part.size() > nbits_) throw std::out_of_range("BitVector::splice: range past end");
  for (std::size_t i = 0; i < part.size(); ++i) set_bit(offset + i, part.bit(i));
}

void BitVector::append(const BitVector& tail) {
  const std::size_t old = nbits_;
  nbits_ += tail.size();
  words_.resize((nbits_ + kWordBits - 1) / kWordBits, 0);
  for (std::size_t i = 0; i < tail.size(); ++i) set_bit(old + i, tail.bit(i));
}

void BitVector::append_bit(bool value) {
  ++nbits_;
  words_.resize((nbits_ + kWordBits - 1) / kWordBits, 0);
  set_bit(nbits_ - 1, value);
}

std::uint64_t BitVector::as_uint() const {
  if (nbits_ > 64) throw std::logic_error("BitVector::as_uint: more than 64 bits");
  return words_.empty() ? 0 : words_[0];
}

std::string BitVector::to_string() const {
  std::string s(nbits_, '0');
  for (std::size_t i = 0; i < nbits_; ++i)
    if (bit(i)) s[i] = '1';
  return s;
}

}  // namespace macc
