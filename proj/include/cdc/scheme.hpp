#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "cdc/bitvector.hpp"
#include "cdc/combinatorics.hpp"

namespace cdc {

// Problem instance: K nodes, N files of W bits, IVs of V bits. The reduce
// output width equals V.
struct JobSpec {
  int K = 0;
  std::int64_t N = 0;
  std::int64_t W = 0;
  std::int64_t V = 0;
  std::uint64_t seed = 0;

  // Throws ParameterError unless K >= 2 and N, W, V >= 1.
  void validate() const;
};

// Identifies v_{k,n}: the IV of file n needed by node k's reduce function.
struct IvId {
  int k = 0;
  std::int64_t n = 0;

  auto operator<=>(const IvId&) const = default;
  bool operator==(const IvId&) const = default;
  std::string to_string() const;
};

// The N input files, addressed 1..N.
class FileStore {
 public:
  explicit FileStore(std::vector<BitVector> files);
  // Pseudorandom contents derived from job.seed.
  static FileStore generate(const JobSpec& job);

  const BitVector& file(std::int64_t n) const;
  std::int64_t count() const { return static_cast<std::int64_t>(files_.size()); }
  std::size_t width() const { return files_.empty() ? 0 : files_.front().size(); }
  // Throws ParameterError if count or width disagree with the job.
  void check_matches(const JobSpec& job) const;

 private:
  std::vector<BitVector> files_;
};

// v_{k,n} = first V bits of a pseudorandom stream keyed by
// (seed, k, n, hash of w_n).
BitVector map_function(const JobSpec& job, int k, std::int64_t n, const BitVector& file);

// u_k = XOR of all entries of the IV row.
BitVector reduce_function(std::span<const BitVector> row);

// Every v_{k,n}, computed centrally: result[k-1][n-1].
std::vector<std::vector<BitVector>> compute_all_ivs(const JobSpec& job, const FileStore& store);

// IVs materialized at one node.
using IvTable = std::map<IvId, BitVector>;

// Materialized scheme for parameter i over the contiguous file range
// [first_file, first_file + file_count). A pure run covers all N files;
// memory-sharing mixtures build one instance per file group.
struct SchemeInstance {
  JobSpec job;
  int i = 0;
  std::int64_t first_file = 1;
  std::int64_t file_count = 0;
  std::int64_t eta = 0;  // files per batch, file_count / C(K, i)

  std::vector<NodeSet> batch_labels;               // index = colex rank of T
  std::vector<std::vector<std::int64_t>> batches;  // W_T, ascending file ids
  std::vector<std::vector<std::int64_t>> placement;  // M_k at [k-1]
  std::vector<std::vector<IvId>> own_ivs;            // C_k^1 at [k-1]
  std::vector<std::vector<IvId>> aux_ivs;            // C_k^2 at [k-1]

  bool covers(std::int64_t n) const { return n >= first_file && n < first_file + file_count; }
  std::int64_t batch_index_of(std::int64_t n) const;
  const NodeSet& batch_of(std::int64_t n) const { return batch_labels[batch_index_of(n)]; }
  // Position of file n inside its batch.
  std::int64_t offset_in_batch(std::int64_t n) const;

  // Every IV is cut into i pieces of V/i bits; piece p belongs to the p-th
  // smallest member of the batch label. U^k_{T,j} concatenates piece
  // position_of(k) of v_{j,n} over n in W_T.
  std::int64_t piece_bits() const { return job.V / i; }
  std::int64_t part_bits() const { return eta * piece_bits(); }
  int subblock_owner(const NodeSet& T, int piece) const { return T.members().at(piece); }
};

// Minimal file count and IV width for which build_scheme(K, i) is valid.
std::int64_t minimal_feasible_N(int K, int i);
std::int64_t minimal_feasible_V(int K, int i);

// Human-readable list of violated preconditions (empty when feasible), each
// with the smallest fix.
std::vector<std::string> scheme_violations(const JobSpec& job, int i);

// Requires 1 <= i <= K, C(K,i) | N and, for i < K, i | V.
SchemeInstance build_scheme(const JobSpec& job, int i);
SchemeInstance build_scheme(const JobSpec& job, int i, std::int64_t first_file,
                            std::int64_t file_count);

// Per-node IV tables holding exactly C_k^1 and C_k^2.
std::vector<IvTable> run_map(const SchemeInstance& scheme, const FileStore& store);

enum class SignalKind : std::uint8_t {
  kUplinkPart = 1,       // X_S^k
  kUplinkAggregate = 2,  // X_k
  kDownlinkChain = 3,    // X_S
  kDownlinkForward = 4,  // X_S^k relayed verbatim by the AP
};

std::string to_string(SignalKind kind);

struct Signal {
  SignalKind kind = SignalKind::kUplinkPart;
  NodeSet group;   // S; empty for aggregates
  int sender = 0;  // node id; 0 for the AP
  BitVector payload;

  bool operator==(const Signal&) const = default;
};

// U^owner_{T,target}: the owner's piece of the IVs of batch T needed by
// `target`, read from `ivs`. Throws SchemeError on a missing IV.
BitVector subblock(const SchemeInstance& scheme, const NodeSet& T, int target, int owner,
                   const IvTable& ivs);

// X_S^k = XOR over l in S\{k} of U^k_{S\{l},l}.
BitVector uplink_part(const SchemeInstance& scheme, const NodeSet& S, int k, const IvTable& ivs);

// For each node k (at [k-1]), the parts X_S^k for all S in Omega_{i+1}
// containing k, in colex order of S.
std::vector<std::vector<Signal>> encode_uplink(const SchemeInstance& scheme,
                                               const std::vector<IvTable>& ivs);

// X_k: concatenation of a node's parts.
Signal aggregate_uplink(int sender, std::span<const Signal> parts);

// Streaming chain coder for a single multicast group. Parts arrive in chain
// order; each block depends on two consecutive parts, so at most one part
// is held at any time.
class ChainEncoder {
 public:
  // Returns the block prev XOR part, or an empty vector for the first part.
  std::vector<BitVector> push(const BitVector& part);
  std::size_t buffered() const { return has_previous_ ? 1 : 0; }
  std::size_t peak_buffered() const { return peak_; }

 private:
  BitVector previous_;
  bool has_previous_ = false;
  std::size_t peak_ = 0;
};

struct DownlinkResult {
  std::vector<Signal> signals;  // one X_S per S, colex order
  std::size_t peak_buffered_parts = 0;
};

// Chain-codes the parts of each S = {k_1 < ... < k_{i+1}} into
// (X^{k_1} ^ X^{k_2}, ..., X^{k_i} ^ X^{k_{i+1}}).
DownlinkResult encode_downlink(const SchemeInstance& scheme,
                               const std::vector<std::vector<Signal>>& uplink);

// Uncoded relay: the AP rebroadcasts every received part.
std::vector<Signal> forward_downlink(const SchemeInstance& scheme,
                                     const std::vector<std::vector<Signal>>& uplink);

struct NodeResult {
  std::vector<BitVector> row;  // v_{k,n} for the scheme's files in order
  BitVector output;            // reduce of `row`
};

// Recovers node k's missing IVs from the downlink (chain-coded or forwarded)
// and its local table.
NodeResult decode_and_reduce(const SchemeInstance& scheme, int k, const IvTable& ivs,
                             std::span<const Signal> downlink);

}  // namespace cdc
