#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "cdc/scheme.hpp"

namespace cdc {

// Wire layout of one signal, all integers little-endian:
//
//   offset  size  field
//   0       1     kind tag (SignalKind value)
//   1       1     |S| (0 for aggregates)
//   2       4     colex rank of S among the |S|-subsets of [K]
//   6       2     sender id (0 = AP)
//   8       8     payload length in bits
//   16      ceil(bits/8)  payload, MSB-first packed
//
// K is not on the wire; both ends agree on it out of band.
inline constexpr std::size_t kSignalHeaderBytes = 16;

std::vector<std::uint8_t> serialize_signal(const Signal& signal, int K);

// Decodes one signal from the front of `bytes`; `consumed` receives the
// number of bytes read. Throws ParameterError on malformed input.
Signal deserialize_signal(std::span<const std::uint8_t> bytes, int K, std::size_t& consumed);

std::vector<std::uint8_t> serialize_signals(std::span<const Signal> signals, int K);
std::vector<Signal> deserialize_signals(std::span<const std::uint8_t> bytes, int K);

}  // namespace cdc
