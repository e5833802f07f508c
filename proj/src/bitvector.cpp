#include "cdc/bitvector.hpp"

#include <algorithm>
#include <stdexcept>

namespace cdc {

namespace {

constexpr std::size_t bytes_for(std::size_t bits) { return (bits + 7) / 8; }
constexpr std::uint8_t mask_for(std::size_t pos) {
  return static_cast<std::uint8_t>(0x80u >> (pos % 8));
}

}  // namespace

BitVector::BitVector(std::size_t bits) : bits_(bits), bytes_(bytes_for(bits), 0) {}

BitVector BitVector::from_bytes(std::vector<std::uint8_t> bytes, std::size_t bits) {
  if (bytes.size() != bytes_for(bits)) {
    throw std::invalid_argument("byte count " + std::to_string(bytes.size()) +
                                " does not hold exactly " + std::to_string(bits) + " bits");
  }
  BitVector out;
  out.bits_ = bits;
  out.bytes_ = std::move(bytes);
  out.clear_padding();
  return out;
}

bool BitVector::get(std::size_t pos) const {
  if (pos >= bits_) throw std::out_of_range("bit index out of range");
  return (bytes_[pos / 8] & mask_for(pos)) != 0;
}

void BitVector::set(std::size_t pos, bool value) {
  if (pos >= bits_) throw std::out_of_range("bit index out of range");
  if (value) {
    bytes_[pos / 8] |= mask_for(pos);
  } else {
    bytes_[pos / 8] &= static_cast<std::uint8_t>(~mask_for(pos));
  }
}

BitVector BitVector::slice(std::size_t offset, std::size_t length) const {
  if (offset + length > bits_) throw std::out_of_range("slice exceeds bit vector");
  BitVector out(length);
  if (offset % 8 == 0) {
    std::copy_n(bytes_.begin() + static_cast<std::ptrdiff_t>(offset / 8), out.bytes_.size(),
                out.bytes_.begin());
    out.clear_padding();
    return out;
  }
  for (std::size_t b = 0; b < length; ++b) {
    if (get(offset + b)) out.bytes_[b / 8] |= mask_for(b);
  }
  return out;
}

void BitVector::write(std::size_t offset, const BitVector& src) {
  if (offset + src.bits_ > bits_) throw std::out_of_range("write exceeds bit vector");
  for (std::size_t b = 0; b < src.bits_; ++b) set(offset + b, src.get(b));
}

void BitVector::append(const BitVector& tail) {
  std::size_t start = bits_;
  bits_ += tail.bits_;
  bytes_.resize(bytes_for(bits_), 0);
  write(start, tail);
}

BitVector& BitVector::operator^=(const BitVector& other) {
  if (bits_ != other.bits_) {
    throw std::invalid_argument("XOR of bit vectors of different lengths (" +
                                std::to_string(bits_) + " vs " + std::to_string(other.bits_) +
                                ")");
  }
  for (std::size_t j = 0; j < bytes_.size(); ++j) bytes_[j] ^= other.bytes_[j];
  return *this;
}

std::string BitVector::to_hex() const {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(bytes_.size() * 2);
  for (std::uint8_t byte : bytes_) {
    out += kDigits[byte >> 4];
    out += kDigits[byte & 0x0f];
  }
  return out;
}

void BitVector::clear_padding() {
  if (bits_ % 8 != 0 && !bytes_.empty()) {
    bytes_.back() &= static_cast<std::uint8_t>(0xffu << (8 - bits_ % 8));
  }
}

}  // namespace cdc
