#include "cdc/scheme.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <unordered_map>

#include "cdc/errors.hpp"

namespace cdc {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t fnv1a(std::span<const std::uint8_t> bytes, std::uint64_t length_bits) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (std::uint8_t b : bytes) {
    h ^= b;
    h *= 0x100000001b3ULL;
  }
  return h ^ splitmix64(length_bits);
}

BitVector random_bits(std::uint64_t key, std::size_t bits) {
  std::mt19937_64 gen(key);
  std::vector<std::uint8_t> bytes((bits + 7) / 8);
  for (std::size_t j = 0; j < bytes.size(); j += 8) {
    std::uint64_t word = gen();
    for (std::size_t b = 0; b < 8 && j + b < bytes.size(); ++b) {
      bytes[j + b] = static_cast<std::uint8_t>(word >> (56 - 8 * b));
    }
  }
  return BitVector::from_bytes(std::move(bytes), bits);
}

const Signal* find_group(std::span<const Signal> downlink, const NodeSet& S, SignalKind kind,
                         int sender) {
  for (const Signal& s : downlink) {
    if (s.kind == kind && s.group == S && (kind != SignalKind::kDownlinkForward || s.sender == sender)) {
      return &s;
    }
  }
  return nullptr;
}

}  // namespace

void JobSpec::validate() const {
  std::vector<std::string> problems;
  if (K < 2) problems.push_back("K must be >= 2 (got " + std::to_string(K) + ")");
  if (N < 1) problems.push_back("N must be >= 1 (got " + std::to_string(N) + ")");
  if (W < 1) problems.push_back("W must be >= 1 (got " + std::to_string(W) + ")");
  if (V < 1) problems.push_back("V must be >= 1 (got " + std::to_string(V) + ")");
  if (!problems.empty()) {
    std::string msg = "invalid job:";
    for (const auto& p : problems) msg += " " + p + ";";
    throw ParameterError(msg);
  }
}

std::string IvId::to_string() const {
  return "v(" + std::to_string(k) + "," + std::to_string(n) + ")";
}

FileStore::FileStore(std::vector<BitVector> files) : files_(std::move(files)) {
  for (const auto& f : files_) {
    if (f.size() != files_.front().size()) throw ParameterError("files must share one width");
  }
}

FileStore FileStore::generate(const JobSpec& job) {
  job.validate();
  std::vector<BitVector> files;
  files.reserve(static_cast<std::size_t>(job.N));
  for (std::int64_t n = 1; n <= job.N; ++n) {
    std::uint64_t key = splitmix64(splitmix64(job.seed ^ 0x66696c6573ULL) + static_cast<std::uint64_t>(n));
    files.push_back(random_bits(key, static_cast<std::size_t>(job.W)));
  }
  return FileStore(std::move(files));
}

const BitVector& FileStore::file(std::int64_t n) const {
  if (n < 1 || n > count()) throw ParameterError("file id " + std::to_string(n) + " out of range");
  return files_[static_cast<std::size_t>(n - 1)];
}

void FileStore::check_matches(const JobSpec& job) const {
  if (count() != job.N || static_cast<std::int64_t>(width()) != job.W) {
    throw ParameterError("file store holds " + std::to_string(count()) + " files of " +
                         std::to_string(width()) + " bits; job expects " + std::to_string(job.N) +
                         " of " + std::to_string(job.W));
  }
}

BitVector map_function(const JobSpec& job, int k, std::int64_t n, const BitVector& file) {
  std::uint64_t key = splitmix64(job.seed);
  key = splitmix64(key ^ static_cast<std::uint64_t>(k));
  key = splitmix64(key ^ static_cast<std::uint64_t>(n));
  key = splitmix64(key ^ fnv1a(file.bytes(), file.size()));
  return random_bits(key, static_cast<std::size_t>(job.V));
}

BitVector reduce_function(std::span<const BitVector> row) {
  if (row.empty()) return {};
  BitVector out(row.front().size());
  for (const auto& v : row) out ^= v;
  return out;
}

std::vector<std::vector<BitVector>> compute_all_ivs(const JobSpec& job, const FileStore& store) {
  store.check_matches(job);
  std::vector<std::vector<BitVector>> out(static_cast<std::size_t>(job.K));
  for (int k = 1; k <= job.K; ++k) {
    auto& row = out[k - 1];
    row.reserve(static_cast<std::size_t>(job.N));
    for (std::int64_t n = 1; n <= job.N; ++n) row.push_back(map_function(job, k, n, store.file(n)));
  }
  return out;
}

std::int64_t SchemeInstance::batch_index_of(std::int64_t n) const {
  if (!covers(n)) throw ParameterError("file " + std::to_string(n) + " not covered by scheme");
  return (n - first_file) / eta;
}

std::int64_t SchemeInstance::offset_in_batch(std::int64_t n) const {
  return (n - first_file) % eta;
}

std::int64_t minimal_feasible_N(int K, int i) { return binomial(K, i); }

std::int64_t minimal_feasible_V(int K, int i) { return i < K ? i : 1; }

std::vector<std::string> scheme_violations(const JobSpec& job, int i) {
  std::vector<std::string> out;
  if (job.K < 2) out.push_back("K must be >= 2 (got " + std::to_string(job.K) + ")");
  if (job.W < 1) out.push_back("W must be >= 1 (got " + std::to_string(job.W) + "); use W=1");
  if (i < 1 || (job.K >= 2 && i > job.K)) {
    out.push_back("i must lie in [1, K] (got i=" + std::to_string(i) + ")");
    return out;
  }
  if (job.K < 2) return out;
  std::int64_t batches = binomial(job.K, i);
  if (job.N < 1 || job.N % batches != 0) {
    std::int64_t fix = job.N < 1 ? batches : (job.N / batches + 1) * batches;
    out.push_back("C(" + std::to_string(job.K) + "," + std::to_string(i) + ")=" +
                  std::to_string(batches) + " must divide N (got N=" + std::to_string(job.N) +
                  "); smallest feasible N is " + std::to_string(batches) +
                  (fix != batches ? ", next feasible above N is " + std::to_string(fix) : ""));
  }
  if (i < job.K && (job.V < 1 || job.V % i != 0)) {
    std::int64_t fix = job.V < 1 ? i : (job.V / i + 1) * i;
    out.push_back("i=" + std::to_string(i) + " must divide V (got V=" + std::to_string(job.V) +
                  "); smallest feasible V is " + std::to_string(i) +
                  (fix != i ? ", next feasible above V is " + std::to_string(fix) : ""));
  } else if (job.V < 1) {
    out.push_back("V must be >= 1 (got " + std::to_string(job.V) + ")");
  }
  return out;
}

SchemeInstance build_scheme(const JobSpec& job, int i) { return build_scheme(job, i, 1, job.N); }

SchemeInstance build_scheme(const JobSpec& job, int i, std::int64_t first_file,
                            std::int64_t file_count) {
  JobSpec sub = job;
  sub.N = file_count;
  if (auto problems = scheme_violations(sub, i); !problems.empty()) {
    std::string msg = "infeasible scheme parameters:";
    for (const auto& p : problems) msg += " " + p + ";";
    throw ParameterError(msg);
  }
  if (first_file < 1 || first_file + file_count - 1 > job.N) {
    throw ParameterError("file range exceeds the job's N");
  }

  SchemeInstance s;
  s.job = job;
  s.i = i;
  s.first_file = first_file;
  s.file_count = file_count;
  s.batch_labels = enumerate_subsets(job.K, i);
  s.eta = file_count / static_cast<std::int64_t>(s.batch_labels.size());
  s.batches.resize(s.batch_labels.size());
  s.placement.resize(static_cast<std::size_t>(job.K));
  s.own_ivs.resize(static_cast<std::size_t>(job.K));
  s.aux_ivs.resize(static_cast<std::size_t>(job.K));

  for (std::size_t t = 0; t < s.batch_labels.size(); ++t) {
    for (std::int64_t e = 0; e < s.eta; ++e) {
      s.batches[t].push_back(first_file + static_cast<std::int64_t>(t) * s.eta + e);
    }
  }
  for (std::int64_t n = first_file; n < first_file + file_count; ++n) {
    const NodeSet& T = s.batch_of(n);
    for (int k : T.members()) {
      s.placement[k - 1].push_back(n);
      s.own_ivs[k - 1].push_back({k, n});
      for (int q = 1; q <= job.K; ++q) {
        if (!T.contains(q)) s.aux_ivs[k - 1].push_back({q, n});
      }
    }
  }
  for (auto& ivs : s.aux_ivs) std::sort(ivs.begin(), ivs.end());
  return s;
}

std::vector<IvTable> run_map(const SchemeInstance& scheme, const FileStore& store) {
  store.check_matches(scheme.job);
  std::vector<IvTable> out(static_cast<std::size_t>(scheme.job.K));
  for (int k = 1; k <= scheme.job.K; ++k) {
    auto& table = out[k - 1];
    for (const auto* set : {&scheme.own_ivs[k - 1], &scheme.aux_ivs[k - 1]}) {
      for (const IvId& id : *set) {
        table.emplace(id, map_function(scheme.job, id.k, id.n, store.file(id.n)));
      }
    }
  }
  return out;
}

std::string to_string(SignalKind kind) {
  switch (kind) {
    case SignalKind::kUplinkPart: return "uplink-part";
    case SignalKind::kUplinkAggregate: return "uplink-aggregate";
    case SignalKind::kDownlinkChain: return "downlink-chain";
    case SignalKind::kDownlinkForward: return "downlink-forward";
  }
  return "unknown";
}

BitVector subblock(const SchemeInstance& scheme, const NodeSet& T, int target, int owner,
                   const IvTable& ivs) {
  int piece = T.position_of(owner);
  if (piece < 0) {
    throw SchemeError("sub-block owner " + std::to_string(owner) + " not in " + T.to_string());
  }
  const std::int64_t width = scheme.piece_bits();
  BitVector out(static_cast<std::size_t>(scheme.part_bits()));
  const auto& files = scheme.batches.at(static_cast<std::size_t>(subset_rank(T, scheme.job.K)));
  for (std::size_t e = 0; e < files.size(); ++e) {
    auto it = ivs.find({target, files[e]});
    if (it == ivs.end()) {
      throw SchemeError("IV " + IvId{target, files[e]}.to_string() + " needed for sub-block of T=" +
                        T.to_string() + " owned by node " + std::to_string(owner) +
                        " was not computed");
    }
    out.write(e * static_cast<std::size_t>(width),
              it->second.slice(static_cast<std::size_t>(piece * width), static_cast<std::size_t>(width)));
  }
  return out;
}

BitVector uplink_part(const SchemeInstance& scheme, const NodeSet& S, int k, const IvTable& ivs) {
  BitVector out(static_cast<std::size_t>(scheme.part_bits()));
  for (int l : S.members()) {
    if (l == k) continue;
    try {
      out ^= subblock(scheme, S.without(l), l, k, ivs);
    } catch (const SchemeError& e) {
      throw SchemeError("cannot encode X_S^k for S=" + S.to_string() + ", k=" + std::to_string(k) +
                        ", l=" + std::to_string(l) + ": " + e.what());
    }
  }
  return out;
}

std::vector<std::vector<Signal>> encode_uplink(const SchemeInstance& scheme,
                                               const std::vector<IvTable>& ivs) {
  const int K = scheme.job.K;
  std::vector<std::vector<Signal>> out(static_cast<std::size_t>(K));
  if (scheme.i >= K) return out;
  for (const NodeSet& S : enumerate_subsets(K, scheme.i + 1)) {
    for (int k : S.members()) {
      out[k - 1].push_back({SignalKind::kUplinkPart, S, k, uplink_part(scheme, S, k, ivs.at(k - 1))});
    }
  }
  return out;
}

Signal aggregate_uplink(int sender, std::span<const Signal> parts) {
  Signal out{SignalKind::kUplinkAggregate, {}, sender, {}};
  for (const Signal& p : parts) out.payload.append(p.payload);
  return out;
}

std::vector<BitVector> ChainEncoder::push(const BitVector& part) {
  std::vector<BitVector> emitted;
  if (has_previous_) emitted.push_back(previous_ ^ part);
  previous_ = part;
  has_previous_ = true;
  peak_ = std::max(peak_, buffered());
  return emitted;
}

namespace {

// Uplink parts indexed by (group, sender).
std::map<std::pair<NodeSet, int>, const Signal*> index_parts(
    const std::vector<std::vector<Signal>>& uplink) {
  std::map<std::pair<NodeSet, int>, const Signal*> out;
  for (const auto& node_parts : uplink) {
    for (const Signal& s : node_parts) {
      if (s.kind == SignalKind::kUplinkPart) out[{s.group, s.sender}] = &s;
    }
  }
  return out;
}

const Signal& require_part(const std::map<std::pair<NodeSet, int>, const Signal*>& parts,
                           const NodeSet& S, int k) {
  auto it = parts.find({S, k});
  if (it == parts.end()) {
    throw SchemeError("missing uplink part for S=" + S.to_string() + ", k=" + std::to_string(k));
  }
  return *it->second;
}

}  // namespace

DownlinkResult encode_downlink(const SchemeInstance& scheme,
                               const std::vector<std::vector<Signal>>& uplink) {
  DownlinkResult out;
  const int K = scheme.job.K;
  if (scheme.i >= K) return out;
  auto parts = index_parts(uplink);
  for (const NodeSet& S : enumerate_subsets(K, scheme.i + 1)) {
    ChainEncoder encoder;
    Signal chain{SignalKind::kDownlinkChain, S, 0, {}};
    for (int k : S.members()) {
      for (const BitVector& block : encoder.push(require_part(parts, S, k).payload)) {
        chain.payload.append(block);
      }
    }
    out.peak_buffered_parts = std::max(out.peak_buffered_parts, encoder.peak_buffered());
    out.signals.push_back(std::move(chain));
  }
  return out;
}

std::vector<Signal> forward_downlink(const SchemeInstance& scheme,
                                     const std::vector<std::vector<Signal>>& uplink) {
  std::vector<Signal> out;
  const int K = scheme.job.K;
  if (scheme.i >= K) return out;
  auto parts = index_parts(uplink);
  for (const NodeSet& S : enumerate_subsets(K, scheme.i + 1)) {
    for (int k : S.members()) {
      const Signal& part = require_part(parts, S, k);
      out.push_back({SignalKind::kDownlinkForward, S, k, part.payload});
    }
  }
  return out;
}

NodeResult decode_and_reduce(const SchemeInstance& scheme, int k, const IvTable& ivs,
                             std::span<const Signal> downlink) {
  const std::size_t part = static_cast<std::size_t>(scheme.part_bits());
  const std::size_t piece = static_cast<std::size_t>(scheme.piece_bits());

  NodeResult result;
  result.row.assign(static_cast<std::size_t>(scheme.file_count), BitVector());
  for (std::int64_t n = scheme.first_file; n < scheme.first_file + scheme.file_count; ++n) {
    if (!scheme.batch_of(n).contains(k)) continue;
    auto it = ivs.find({k, n});
    if (it == ivs.end()) throw SchemeError("own IV " + IvId{k, n}.to_string() + " missing");
    result.row[static_cast<std::size_t>(n - scheme.first_file)] = it->second;
  }

  for (std::size_t t = 0; t < scheme.batch_labels.size(); ++t) {
    const NodeSet& T = scheme.batch_labels[t];
    if (T.contains(k)) continue;
    const NodeSet S = T.with(k);

    // X_S^j for every j in S, recovered from the downlink.
    std::vector<BitVector> parts(static_cast<std::size_t>(S.size()));
    const int anchor = S.position_of(k);
    if (const Signal* chain = find_group(downlink, S, SignalKind::kDownlinkChain, 0)) {
      if (chain->payload.size() != part * static_cast<std::size_t>(scheme.i)) {
        throw SchemeError("chain signal for S=" + S.to_string() + " has wrong length");
      }
      parts[anchor] = uplink_part(scheme, S, k, ivs);
      for (int m = anchor + 1; m < S.size(); ++m) {
        parts[m] = parts[m - 1] ^ chain->payload.slice(static_cast<std::size_t>(m - 1) * part, part);
      }
      for (int m = anchor - 1; m >= 0; --m) {
        parts[m] = parts[m + 1] ^ chain->payload.slice(static_cast<std::size_t>(m) * part, part);
      }
    } else {
      for (int m = 0; m < S.size(); ++m) {
        int j = S.members()[m];
        if (j == k) continue;
        const Signal* fwd = find_group(downlink, S, SignalKind::kDownlinkForward, j);
        if (fwd == nullptr) {
          throw SchemeError("unrecoverable sub-block: no downlink for T=" + T.to_string() +
                            ", j=" + std::to_string(j));
        }
        parts[m] = fwd->payload;
      }
    }

    for (int j : T.members()) {
      // U^j_{T,k} = X_S^j ^ XOR_{l in T\{j}} U^j_{S\{l},l}
      BitVector recovered = parts[S.position_of(j)];
      for (int l : T.members()) {
        if (l == j) continue;
        try {
          recovered ^= subblock(scheme, S.without(l), l, j, ivs);
        } catch (const SchemeError& e) {
          throw SchemeError("unrecoverable sub-block for T=" + T.to_string() + ", j=" +
                            std::to_string(j) + ": " + e.what());
        }
      }
      const std::size_t slot = static_cast<std::size_t>(T.position_of(j)) * piece;
      for (std::size_t e = 0; e < scheme.batches[t].size(); ++e) {
        std::int64_t n = scheme.batches[t][e];
        BitVector& v = result.row[static_cast<std::size_t>(n - scheme.first_file)];
        if (v.empty()) v = BitVector(static_cast<std::size_t>(scheme.job.V));
        v.write(slot, recovered.slice(e * piece, piece));
      }
    }
  }
  result.output = reduce_function(result.row);
  return result;
}

}  // namespace cdc
