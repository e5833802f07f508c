#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "cdc/bitvector.hpp"
#include "cdc/rational.hpp"

namespace cdc::test {

inline std::mt19937_64& rng() {
  static std::mt19937_64 engine(20261016);
  return engine;
}

inline int uniform_int(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng()); }

inline BitVector random_bits(std::size_t n) {
  BitVector v(n);
  for (std::size_t p = 0; p < n; ++p) v.set(p, (rng()() & 1U) != 0);
  return v;
}

// Uniform rational in [lo, hi] with denominator `den`.
inline Rational random_rational(const Rational& lo, const Rational& hi, std::int64_t den) {
  Rational span = (hi - lo) * Rational(den);
  std::int64_t steps = span.numerator() / span.denominator();
  std::int64_t pick = std::uniform_int_distribution<std::int64_t>(0, steps)(rng());
  return lo + Rational(pick, den);
}

inline Rational R(std::int64_t p, std::int64_t q = 1) { return Rational(p, q); }

}  // namespace cdc::test
