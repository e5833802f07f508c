#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cdc/rational.hpp"
#include "cdc/scheme.hpp"

namespace cdc {

struct RawCounters {
  std::int64_t stored_files = 0;  // sum of |M_k|
  std::int64_t ivs = 0;           // sum of |C_k|
  std::int64_t uplink_bits = 0;   // sum of l_k
  std::int64_t downlink_bits = 0; // l

  bool operator==(const RawCounters&) const = default;
};

// Measured loads: r = sum|M_k|/N, c = sum|C_k|/(NK), L = sum l_k/(NKV),
// D = l/(NKV).
struct LoadReport {
  Rational r, c, L, D;
  RawCounters raw;

  static LoadReport from_counters(const JobSpec& job, const RawCounters& raw);
  // 1 <= c <= r <= K and 0 <= D <= L <= 1 - r/K.
  bool in_regime(int K) const;
};

enum class Phase : std::uint8_t { kUplink, kDownlink };

std::string to_string(Phase phase);

// One transmitted unit. Chain-coded groups are logged per block.
struct TraceRecord {
  Phase phase = Phase::kUplink;
  SignalKind kind = SignalKind::kUplinkPart;
  int scheme_i = 0;          // scheme parameter of the segment that sent it
  int group_size = 0;        // |S|
  std::int64_t group_rank = 0;
  int sender = 0;            // node id, 0 for the AP
  int block = -1;            // chain block index, -1 otherwise
  std::int64_t bits = 0;

  bool operator==(const TraceRecord&) const = default;
};

struct Trace {
  int K = 0;
  std::int64_t N = 0;
  std::int64_t V = 0;
  std::vector<TraceRecord> records;
  std::vector<std::vector<IvId>> compute_sets;  // sorted C_k at [k-1]
  std::vector<std::int64_t> stored_files;       // |M_k| at [k-1]

  bool operator==(const Trace&) const = default;
};

struct Mismatch {
  int node = 0;
  IvId iv;
  std::int64_t bit_offset = 0;
};

struct Verdict {
  bool pass = false;
  std::optional<Mismatch> first_mismatch;
  std::string describe() const;
};

enum class RelayMode { kChain, kForward };

// A contiguous file range run under scheme parameter i.
struct Segment {
  int i = 0;
  std::int64_t first_file = 1;
  std::int64_t file_count = 0;
};

struct Execution {
  JobSpec job;
  std::vector<Segment> segments;
  RelayMode mode = RelayMode::kChain;
  LoadReport report;
  Verdict verdict;
  Trace trace;
  std::size_t peak_ap_buffer = 0;       // parts held by the chain coder
  std::vector<BitVector> outputs;       // u_k at [k-1]
};

// Runs map, upload, relay, broadcast, decode and reduce for the pure scheme
// with parameter i, metering every transmitted bit and checking each node's
// recovered IV row against the centralized computation.
Execution execute(const JobSpec& job, int i, RelayMode mode = RelayMode::kChain);

// Memory-sharing weights for P_{i-1}, P_i and P_K.
using Theta = std::array<Rational, 3>;

std::vector<std::string> mixture_violations(const JobSpec& job, int i, const Theta& theta);
std::int64_t minimal_mixture_N(int K, int i, const Theta& theta);
std::int64_t minimal_mixture_V(int K, int i, const Theta& theta);

// Splits the files into groups of theta_1 N, theta_2 N, theta_3 N and runs
// the schemes for i-1, i and K on them. Requires 2 <= i <= K-1.
Execution run_mixture(const JobSpec& job, int i, const Theta& theta,
                      RelayMode mode = RelayMode::kChain);

// Runs an arbitrary list of segments covering all N files.
Execution execute_segments(const JobSpec& job, const std::vector<Segment>& segments,
                           RelayMode mode = RelayMode::kChain);

inline const Trace& trace(const Execution& execution) { return execution.trace; }

// Bit totals re-counted from the trace records.
RawCounters recount(const Trace& trace);

// One JSON object per line:
// {"phase":"uplink","label":"uplink-part","i":2,"subset_size":3,
//  "subset_rank":0,"sender":1,"block":null,"bits":1}
std::string trace_to_jsonl(const Trace& trace);

// Single JSON object with "p/q" strings for r, c, L, D plus raw counters.
std::string report_to_json(const LoadReport& report);

}  // namespace cdc
