#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace cdc {

// Fixed-length bit string, byte-packed with the most significant bit of each
// byte first. Padding bits past size() are always zero, so byte-wise
// equality is bit-wise equality.
class BitVector {
 public:
  BitVector() = default;
  explicit BitVector(std::size_t bits);
  // Takes ownership of `bytes`; requires bytes.size() == ceil(bits / 8).
  // Padding bits are cleared.
  static BitVector from_bytes(std::vector<std::uint8_t> bytes, std::size_t bits);

  std::size_t size() const { return bits_; }
  bool empty() const { return bits_ == 0; }
  std::span<const std::uint8_t> bytes() const { return bytes_; }

  bool get(std::size_t pos) const;
  void set(std::size_t pos, bool value);

  BitVector slice(std::size_t offset, std::size_t length) const;
  // Overwrites bits [offset, offset + src.size()) with `src`.
  void write(std::size_t offset, const BitVector& src);
  void append(const BitVector& tail);

  // Lengths must match; throws std::invalid_argument otherwise.
  BitVector& operator^=(const BitVector& other);
  friend BitVector operator^(BitVector lhs, const BitVector& rhs) { return lhs ^= rhs; }

  bool operator==(const BitVector&) const = default;

  std::string to_hex() const;

 private:
  void clear_padding();

  std::size_t bits_ = 0;
  std::vector<std::uint8_t> bytes_;
};

}  // namespace cdc
