#include "cdc/star_sim.hpp"

#include <algorithm>
#include <numeric>

#include "json.hpp"

#include "cdc/combinatorics.hpp"
#include "cdc/errors.hpp"

namespace cdc {

LoadReport LoadReport::from_counters(const JobSpec& job, const RawCounters& raw) {
  LoadReport out;
  out.raw = raw;
  const std::int64_t NK = job.N * job.K;
  out.r = Rational(raw.stored_files, job.N);
  out.c = Rational(raw.ivs, NK);
  out.L = Rational(raw.uplink_bits, NK * job.V);
  out.D = Rational(raw.downlink_bits, NK * job.V);
  return out;
}

bool LoadReport::in_regime(int K) const {
  return Rational(1) <= c && c <= r && r <= Rational(K) && Rational(0) <= D && D <= L &&
         L <= Rational(1) - r / Rational(K);
}

std::string to_string(Phase phase) { return phase == Phase::kUplink ? "uplink" : "downlink"; }

std::string Verdict::describe() const {
  if (pass) return "pass";
  if (!first_mismatch) return "fail";
  const auto& m = *first_mismatch;
  return "fail: node " + std::to_string(m.node) + " " + m.iv.to_string() + " differs at bit " +
         std::to_string(m.bit_offset);
}

namespace {

std::int64_t group_rank(const Signal& s, int K) {
  return s.group.empty() ? 0 : subset_rank(s.group, K);
}

}  // namespace

Execution execute_segments(const JobSpec& job, const std::vector<Segment>& segments,
                           RelayMode mode) {
  job.validate();
  std::int64_t covered = 0;
  for (const Segment& seg : segments) {
    if (seg.first_file != covered + 1) throw ParameterError("segments must tile the files in order");
    covered += seg.file_count;
  }
  if (covered != job.N) throw ParameterError("segments cover " + std::to_string(covered) +
                                             " files, job has " + std::to_string(job.N));

  const int K = job.K;
  Execution ex;
  ex.job = job;
  ex.segments = segments;
  ex.mode = mode;
  ex.trace.K = K;
  ex.trace.N = job.N;
  ex.trace.V = job.V;
  ex.trace.compute_sets.resize(static_cast<std::size_t>(K));
  ex.trace.stored_files.assign(static_cast<std::size_t>(K), 0);

  const FileStore store = FileStore::generate(job);
  RawCounters raw;
  std::vector<std::vector<BitVector>> rows(static_cast<std::size_t>(K),
                                           std::vector<BitVector>(static_cast<std::size_t>(job.N)));

  for (const Segment& seg : segments) {
    const SchemeInstance scheme = build_scheme(job, seg.i, seg.first_file, seg.file_count);
    const std::vector<IvTable> tables = run_map(scheme, store);
    for (int k = 1; k <= K; ++k) {
      ex.trace.stored_files[k - 1] += static_cast<std::int64_t>(scheme.placement[k - 1].size());
      raw.stored_files += static_cast<std::int64_t>(scheme.placement[k - 1].size());
      raw.ivs += static_cast<std::int64_t>(tables[k - 1].size());
      for (const auto& [id, value] : tables[k - 1]) ex.trace.compute_sets[k - 1].push_back(id);
    }

    // Upload: every part crosses its node's uplink before anything is relayed.
    const auto uplink = encode_uplink(scheme, tables);
    for (const auto& node_parts : uplink) {
      for (const Signal& s : node_parts) {
        raw.uplink_bits += static_cast<std::int64_t>(s.payload.size());
        ex.trace.records.push_back({Phase::kUplink, s.kind, seg.i, s.group.size(), group_rank(s, K),
                                    s.sender, -1, static_cast<std::int64_t>(s.payload.size())});
      }
    }

    std::vector<Signal> downlink;
    if (mode == RelayMode::kChain) {
      DownlinkResult relayed = encode_downlink(scheme, uplink);
      ex.peak_ap_buffer = std::max(ex.peak_ap_buffer, relayed.peak_buffered_parts);
      downlink = std::move(relayed.signals);
    } else {
      downlink = forward_downlink(scheme, uplink);
    }
    for (const Signal& s : downlink) {
      raw.downlink_bits += static_cast<std::int64_t>(s.payload.size());
      if (s.kind == SignalKind::kDownlinkChain) {
        for (int b = 0; b < seg.i; ++b) {
          ex.trace.records.push_back({Phase::kDownlink, s.kind, seg.i, s.group.size(),
                                      group_rank(s, K), 0, b, scheme.part_bits()});
        }
      } else {
        ex.trace.records.push_back({Phase::kDownlink, s.kind, seg.i, s.group.size(),
                                    group_rank(s, K), s.sender, -1,
                                    static_cast<std::int64_t>(s.payload.size())});
      }
    }

    for (int k = 1; k <= K; ++k) {
      NodeResult node = decode_and_reduce(scheme, k, tables[k - 1], downlink);
      for (std::int64_t e = 0; e < scheme.file_count; ++e) {
        rows[k - 1][static_cast<std::size_t>(scheme.first_file - 1 + e)] =
            std::move(node.row[static_cast<std::size_t>(e)]);
      }
    }
  }
  for (auto& set : ex.trace.compute_sets) std::sort(set.begin(), set.end());

  ex.report = LoadReport::from_counters(job, raw);

  const auto oracle = compute_all_ivs(job, store);
  ex.verdict.pass = true;
  for (int k = 1; k <= K && ex.verdict.pass; ++k) {
    for (std::int64_t n = 1; n <= job.N; ++n) {
      const BitVector& got = rows[k - 1][static_cast<std::size_t>(n - 1)];
      const BitVector& want = oracle[k - 1][static_cast<std::size_t>(n - 1)];
      if (got == want) continue;
      std::int64_t offset = 0;
      if (got.size() == want.size()) {
        while (got.get(static_cast<std::size_t>(offset)) == want.get(static_cast<std::size_t>(offset))) ++offset;
      }
      ex.verdict.pass = false;
      ex.verdict.first_mismatch = Mismatch{k, {k, n}, offset};
      break;
    }
  }
  ex.outputs.reserve(static_cast<std::size_t>(K));
  for (int k = 1; k <= K; ++k) {
    ex.outputs.push_back(reduce_function(rows[k - 1]));
    if (ex.verdict.pass && ex.outputs.back() != reduce_function(oracle[k - 1])) {
      ex.verdict.pass = false;
    }
  }
  return ex;
}

Execution execute(const JobSpec& job, int i, RelayMode mode) {
  job.validate();
  if (auto problems = scheme_violations(job, i); !problems.empty()) {
    std::string msg = "infeasible scheme parameters:";
    for (const auto& p : problems) msg += " " + p + ";";
    throw ParameterError(msg);
  }
  return execute_segments(job, {Segment{i, 1, job.N}}, mode);
}

namespace {

std::int64_t lcm64(std::int64_t a, std::int64_t b) { return std::lcm(a, b); }

std::array<int, 3> mixture_params(int K, int i) { return {i - 1, i, K}; }

}  // namespace

std::int64_t minimal_mixture_N(int K, int i, const Theta& theta) {
  std::int64_t n = 1;
  auto params = mixture_params(K, i);
  for (int j = 0; j < 3; ++j) {
    if (theta[j] == Rational(0)) continue;
    // theta N must be a multiple of C(K, i_j): N must be a multiple of
    // q C / gcd(p, C) for theta = p/q in lowest terms.
    std::int64_t C = binomial(K, params[j]);
    std::int64_t p = theta[j].numerator();
    std::int64_t q = theta[j].denominator();
    n = lcm64(n, q * C / std::gcd(p, C));
  }
  return n;
}

std::int64_t minimal_mixture_V(int K, int i, const Theta& theta) {
  std::int64_t v = 1;
  auto params = mixture_params(K, i);
  for (int j = 0; j < 3; ++j) {
    if (theta[j] != Rational(0) && params[j] < K) v = lcm64(v, params[j]);
  }
  return v;
}

std::vector<std::string> mixture_violations(const JobSpec& job, int i, const Theta& theta) {
  std::vector<std::string> out;
  if (job.K < 2) {
    out.push_back("K must be >= 2 (got " + std::to_string(job.K) + ")");
    return out;
  }
  if (i < 2 || i > job.K - 1) {
    out.push_back("mixture base i must lie in [2, K-1] (got i=" + std::to_string(i) + ", K=" +
                  std::to_string(job.K) + ")");
    return out;
  }
  Rational sum = theta[0] + theta[1] + theta[2];
  bool weights_ok = true;
  for (int j = 0; j < 3; ++j) {
    if (theta[j] < Rational(0)) {
      out.push_back("theta_" + std::to_string(j + 1) + " must be nonnegative");
      weights_ok = false;
    }
  }
  if (sum != Rational(1)) {
    out.push_back("theta weights must sum to 1 (sum is " + format_rational(sum) + ")");
    weights_ok = false;
  }
  if (!weights_ok) return out;
  if (job.W < 1) out.push_back("W must be >= 1");

  const std::int64_t min_n = minimal_mixture_N(job.K, i, theta);
  if (job.N < 1 || job.N % min_n != 0) {
    out.push_back("theta_j N must be integral and divisible by C(K, i_j) for i_j in {" +
                  std::to_string(i - 1) + "," + std::to_string(i) + "," + std::to_string(job.K) +
                  "} (got N=" + std::to_string(job.N) + "); minimal feasible N is " +
                  std::to_string(min_n));
  }
  const std::int64_t min_v = minimal_mixture_V(job.K, i, theta);
  if (job.V < 1 || job.V % min_v != 0) {
    out.push_back("V must be a multiple of " + std::to_string(min_v) + " (got V=" +
                  std::to_string(job.V) + "); minimal feasible V is " + std::to_string(min_v));
  }
  return out;
}

Execution run_mixture(const JobSpec& job, int i, const Theta& theta, RelayMode mode) {
  if (auto problems = mixture_violations(job, i, theta); !problems.empty()) {
    std::string msg = "infeasible mixture:";
    for (const auto& p : problems) msg += " " + p + ";";
    throw ParameterError(msg);
  }
  auto params = mixture_params(job.K, i);
  std::vector<Segment> segments;
  std::int64_t next = 1;
  for (int j = 0; j < 3; ++j) {
    Rational size = theta[j] * Rational(job.N);
    if (size == Rational(0)) continue;
    segments.push_back({params[j], next, size.numerator()});
    next += size.numerator();
  }
  return execute_segments(job, segments, mode);
}

RawCounters recount(const Trace& trace) {
  RawCounters out;
  for (const auto& rec : trace.records) {
    (rec.phase == Phase::kUplink ? out.uplink_bits : out.downlink_bits) += rec.bits;
  }
  for (const auto& set : trace.compute_sets) out.ivs += static_cast<std::int64_t>(set.size());
  for (std::int64_t m : trace.stored_files) out.stored_files += m;
  return out;
}

std::string trace_to_jsonl(const Trace& trace) {
  std::string out;
  for (const auto& rec : trace.records) {
    nlohmann::ordered_json line;
    line["phase"] = to_string(rec.phase);
    line["label"] = to_string(rec.kind);
    line["i"] = rec.scheme_i;
    line["subset_size"] = rec.group_size;
    line["subset_rank"] = rec.group_rank;
    line["sender"] = rec.sender;
    line["block"] = rec.block < 0 ? nlohmann::ordered_json(nullptr) : nlohmann::ordered_json(rec.block);
    line["bits"] = rec.bits;
    out += line.dump() + "\n";
  }
  return out;
}

std::string report_to_json(const LoadReport& report) {
  nlohmann::ordered_json j;
  j["r"] = format_rational(report.r);
  j["c"] = format_rational(report.c);
  j["L"] = format_rational(report.L);
  j["D"] = format_rational(report.D);
  j["stored_files"] = report.raw.stored_files;
  j["ivs"] = report.raw.ivs;
  j["uplink_bits"] = report.raw.uplink_bits;
  j["downlink_bits"] = report.raw.downlink_bits;
  return j.dump();
}

}  // namespace cdc
