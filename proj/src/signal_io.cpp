#include "cdc/signal_io.hpp"

#include "cdc/errors.hpp"

namespace cdc {

namespace {

void put_le(std::vector<std::uint8_t>& out, std::uint64_t value, int bytes) {
  for (int b = 0; b < bytes; ++b) out.push_back(static_cast<std::uint8_t>(value >> (8 * b)));
}

std::uint64_t get_le(std::span<const std::uint8_t> in, std::size_t offset, int bytes) {
  std::uint64_t value = 0;
  for (int b = 0; b < bytes; ++b) value |= static_cast<std::uint64_t>(in[offset + b]) << (8 * b);
  return value;
}

}  // namespace

std::vector<std::uint8_t> serialize_signal(const Signal& signal, int K) {
  std::vector<std::uint8_t> out;
  out.reserve(kSignalHeaderBytes + signal.payload.bytes().size());
  out.push_back(static_cast<std::uint8_t>(signal.kind));
  out.push_back(static_cast<std::uint8_t>(signal.group.size()));
  put_le(out, signal.group.empty() ? 0 : static_cast<std::uint64_t>(subset_rank(signal.group, K)), 4);
  put_le(out, static_cast<std::uint64_t>(signal.sender), 2);
  put_le(out, signal.payload.size(), 8);
  out.insert(out.end(), signal.payload.bytes().begin(), signal.payload.bytes().end());
  return out;
}

Signal deserialize_signal(std::span<const std::uint8_t> bytes, int K, std::size_t& consumed) {
  if (bytes.size() < kSignalHeaderBytes) throw ParameterError("truncated signal header");
  Signal out;
  std::uint8_t tag = bytes[0];
  if (tag < 1 || tag > 4) throw ParameterError("unknown signal tag " + std::to_string(tag));
  out.kind = static_cast<SignalKind>(tag);
  int group_size = bytes[1];
  std::uint64_t rank = get_le(bytes, 2, 4);
  out.sender = static_cast<int>(get_le(bytes, 6, 2));
  std::uint64_t bits = get_le(bytes, 8, 8);
  std::size_t payload_bytes = static_cast<std::size_t>((bits + 7) / 8);
  if (bytes.size() < kSignalHeaderBytes + payload_bytes) throw ParameterError("truncated signal payload");
  if (group_size > 0) out.group = subset_unrank(static_cast<std::int64_t>(rank), K, group_size);
  std::vector<std::uint8_t> payload(bytes.begin() + kSignalHeaderBytes,
                                    bytes.begin() + static_cast<std::ptrdiff_t>(kSignalHeaderBytes + payload_bytes));
  out.payload = BitVector::from_bytes(std::move(payload), static_cast<std::size_t>(bits));
  consumed = kSignalHeaderBytes + payload_bytes;
  return out;
}

std::vector<std::uint8_t> serialize_signals(std::span<const Signal> signals, int K) {
  std::vector<std::uint8_t> out;
  for (const Signal& s : signals) {
    auto bytes = serialize_signal(s, K);
    out.insert(out.end(), bytes.begin(), bytes.end());
  }
  return out;
}

std::vector<Signal> deserialize_signals(std::span<const std::uint8_t> bytes, int K) {
  std::vector<Signal> out;
  std::size_t offset = 0;
  while (offset < bytes.size()) {
    std::size_t consumed = 0;
    out.push_back(deserialize_signal(bytes.subspan(offset), K, consumed));
    offset += consumed;
  }
  return out;
}

}  // namespace cdc
