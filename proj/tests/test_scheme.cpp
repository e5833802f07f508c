#include <algorithm>
#include <set>

#include "cdc/errors.hpp"
#include "cdc/scheme.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace cdc;

namespace {

struct Setup {
  JobSpec job;
  SchemeInstance scheme;
  FileStore store;
  std::vector<IvTable> ivs;
  std::vector<std::vector<BitVector>> oracle;

  Setup(int K, std::int64_t N, std::int64_t V, int i, std::uint64_t seed = 7)
      : job{K, N, 24, V, seed},
        scheme(build_scheme(job, i)),
        store(FileStore::generate(job)),
        ivs(run_map(scheme, store)),
        oracle(compute_all_ivs(job, store)) {}
};

// Files of batch T under the contiguous colex layout.
std::vector<std::int64_t> batch_files(int K, std::int64_t N, int i, const NodeSet& T) {
  std::int64_t eta = N / binomial(K, i);
  std::int64_t start = subset_rank(T, K) * eta;
  std::vector<std::int64_t> out;
  for (std::int64_t e = 1; e <= eta; ++e) out.push_back(start + e);
  return out;
}

// X_S^k assembled straight from the centralized IV table.
BitVector oracle_part(const Setup& s, const NodeSet& S, int k) {
  const int K = s.job.K;
  const int i = s.scheme.i;
  const std::size_t piece = static_cast<std::size_t>(s.job.V / i);
  BitVector acc;
  bool first = true;
  for (int l : S.members()) {
    if (l == k) continue;
    NodeSet T = S.without(l);
    int pos = T.position_of(k);
    BitVector u;
    for (std::int64_t n : batch_files(K, s.job.N, i, T)) {
      u.append(s.oracle[l - 1][n - 1].slice(pos * piece, piece));
    }
    if (first) {
      acc = u;
      first = false;
    } else {
      acc ^= u;
    }
  }
  return acc;
}

std::vector<Signal> chain_downlink(const Setup& s) {
  return encode_downlink(s.scheme, encode_uplink(s.scheme, s.ivs)).signals;
}

}  // namespace

TEST_CASE("placement for K=3, N=6, i=2") {
  JobSpec job{3, 6, 8, 2, 0};
  auto sc = build_scheme(job, 2);
  CHECK(sc.eta == 2);
  REQUIRE(sc.batch_labels.size() == 3);
  CHECK(sc.batch_labels[0] == NodeSet{1, 2});
  CHECK(sc.batch_labels[1] == NodeSet{1, 3});
  CHECK(sc.batch_labels[2] == NodeSet{2, 3});
  CHECK(sc.batches[0] == std::vector<std::int64_t>{1, 2});
  CHECK(sc.batches[2] == std::vector<std::int64_t>{5, 6});
  CHECK(sc.placement[0] == std::vector<std::int64_t>{1, 2, 3, 4});
  CHECK(sc.placement[1] == std::vector<std::int64_t>{1, 2, 5, 6});
  CHECK(sc.placement[2] == std::vector<std::int64_t>{3, 4, 5, 6});
  CHECK(sc.own_ivs[0].size() == 4);
  // node 1 also computes v_{3,1}, v_{3,2}, v_{2,3}, v_{2,4}
  std::vector<IvId> aux{{3, 1}, {3, 2}, {2, 3}, {2, 4}};
  auto got = sc.aux_ivs[0];
  std::sort(got.begin(), got.end());
  std::sort(aux.begin(), aux.end());
  CHECK(got == aux);
}

TEST_CASE("i = K stores everything and computes only own IVs") {
  auto sc = build_scheme(JobSpec{4, 3, 8, 5, 0}, 4);
  for (int k = 1; k <= 4; ++k) {
    CHECK(sc.placement[k - 1].size() == 3);
    CHECK(sc.own_ivs[k - 1].size() == 3);
    CHECK(sc.aux_ivs[k - 1].empty());
  }
}

TEST_CASE("computation sets for K=4, N=12, i=2") {
  auto sc = build_scheme(JobSpec{4, 12, 8, 2, 0}, 2);
  for (int k = 1; k <= 4; ++k) {
    CHECK(sc.placement[k - 1].size() == 6);
    CHECK(sc.own_ivs[k - 1].size() == 6);
    CHECK(sc.aux_ivs[k - 1].size() == 12);
  }
}

TEST_CASE("placement properties") {
  for (int K = 2; K <= 7; ++K) {
    for (int i = 1; i <= K; ++i) {
      std::int64_t N = binomial(K, i) * cdc::test::uniform_int(1, 2);
      auto sc = build_scheme(JobSpec{K, N, 8, i, 0}, i);
      std::int64_t total = 0;
      for (int k = 1; k <= K; ++k) {
        total += static_cast<std::int64_t>(sc.placement[k - 1].size());
        for (std::int64_t n : sc.placement[k - 1]) CHECK(sc.batch_of(n).contains(k));
        // C_k^2 holds v_{q,n} with n stored at k and q outside the batch
        for (const IvId& iv : sc.aux_ivs[k - 1]) {
          CHECK_FALSE(sc.batch_of(iv.n).contains(iv.k));
          CHECK(sc.batch_of(iv.n).contains(k));
        }
        CHECK(static_cast<std::int64_t>(sc.aux_ivs[k - 1].size()) == (N * i / K) * (K - i));
      }
      CHECK(total == N * i);
    }
  }
}

TEST_CASE("infeasible parameters are reported with the smallest fix") {
  auto v = scheme_violations(JobSpec{5, 5, 8, 2, 0}, 2);
  REQUIRE(v.size() == 1);
  CHECK(v[0].find("smallest feasible N is 10") != std::string::npos);
  CHECK_THROWS_AS(build_scheme(JobSpec{5, 5, 8, 2, 0}, 2), ParameterError);
  CHECK_THROWS_AS(build_scheme(JobSpec{4, 6, 8, 1, 0}, 2), ParameterError);
  CHECK_THROWS_AS(build_scheme(JobSpec{4, 6, 8, 2, 0}, 5), ParameterError);
  CHECK_THROWS_AS(build_scheme(JobSpec{4, 6, 8, 2, 0}, 0), ParameterError);
  CHECK_THROWS_AS(build_scheme(JobSpec{1, 6, 8, 2, 0}, 1), ParameterError);
  CHECK(minimal_feasible_N(5, 2) == 10);
  CHECK(minimal_feasible_V(5, 2) == 2);
  CHECK(minimal_feasible_V(5, 5) == 1);
}

TEST_CASE("map tables hold exactly the computation sets with oracle values") {
  Setup s(3, 6, 4, 2);
  CHECK(s.ivs[0].size() == 8);
  for (int k = 1; k <= 3; ++k) {
    std::set<IvId> want(s.scheme.own_ivs[k - 1].begin(), s.scheme.own_ivs[k - 1].end());
    want.insert(s.scheme.aux_ivs[k - 1].begin(), s.scheme.aux_ivs[k - 1].end());
    CHECK(s.ivs[k - 1].size() == want.size());
    for (const auto& [id, value] : s.ivs[k - 1]) {
      CHECK(want.count(id) == 1);
      CHECK(value == s.oracle[id.k - 1][id.n - 1]);
      CHECK(value.size() == 4);
    }
  }
}

TEST_CASE("map function depends on seed, node, file and content") {
  JobSpec job{3, 6, 24, 16, 1};
  auto store = FileStore::generate(job);
  auto v = map_function(job, 1, 1, store.file(1));
  CHECK(v.size() == 16);
  CHECK(v == map_function(job, 1, 1, store.file(1)));
  CHECK_FALSE(v == map_function(job, 2, 1, store.file(1)));
  CHECK_FALSE(v == map_function(job, 1, 2, store.file(1)));
  CHECK_FALSE(v == map_function(job, 1, 1, store.file(2)));
  JobSpec other = job;
  other.seed = 2;
  CHECK_FALSE(v == map_function(other, 1, 1, store.file(1)));
}

TEST_CASE("uplink parts match the direct construction") {
  for (int K = 3; K <= 6; ++K) {
    for (int i = 1; i < K; ++i) {
      Setup s(K, binomial(K, i), i * 2, i);
      auto up = encode_uplink(s.scheme, s.ivs);
      for (int k = 1; k <= K; ++k) {
        REQUIRE(static_cast<std::int64_t>(up[k - 1].size()) == binomial(K - 1, i));
        for (const Signal& sig : up[k - 1]) {
          CHECK(sig.kind == SignalKind::kUplinkPart);
          CHECK(sig.sender == k);
          CHECK(sig.group.size() == i + 1);
          CHECK(static_cast<std::int64_t>(sig.payload.size()) == s.scheme.part_bits());
          CHECK(sig.payload == oracle_part(s, sig.group, k));
        }
      }
    }
  }
}

TEST_CASE("uplink volume per node") {
  {
    Setup s(3, 6, 2, 2);
    auto up = encode_uplink(s.scheme, s.ivs);
    for (int k = 1; k <= 3; ++k) CHECK(aggregate_uplink(k, up[k - 1]).payload.size() == 2);
  }
  {
    Setup s(4, 12, 2, 2);
    auto up = encode_uplink(s.scheme, s.ivs);
    // 3 groups of 3 containing k, each part eta * V / i = 2 bits
    for (int k = 1; k <= 4; ++k) CHECK(aggregate_uplink(k, up[k - 1]).payload.size() == 6);
  }
  {
    Setup s(4, 1, 3, 4);
    auto up = encode_uplink(s.scheme, s.ivs);
    for (int k = 1; k <= 4; ++k) CHECK(up[k - 1].empty());
    CHECK(chain_downlink(s).empty());
  }
}

TEST_CASE("chain blocks are consecutive XORs") {
  Setup s(3, 6, 2, 2);
  auto up = encode_uplink(s.scheme, s.ivs);
  auto down = encode_downlink(s.scheme, up);
  REQUIRE(down.signals.size() == 1);
  const Signal& x = down.signals[0];
  CHECK(x.group == NodeSet{1, 2, 3});
  CHECK(x.sender == 0);
  auto x1 = oracle_part(s, x.group, 1);
  auto x2 = oracle_part(s, x.group, 2);
  auto x3 = oracle_part(s, x.group, 3);
  BitVector want = x1 ^ x2;
  want.append(x2 ^ x3);
  CHECK(x.payload == want);
  CHECK(down.peak_buffered_parts == 1);
}

TEST_CASE("i = 1 chain is a single block") {
  Setup s(2, 2, 3, 1);
  auto down = chain_downlink(s);
  REQUIRE(down.size() == 1);
  CHECK(down[0].payload.size() == 3);
}

TEST_CASE("chain encoder holds one part and telescopes back") {
  for (int trial = 0; trial < 100; ++trial) {
    int parts = cdc::test::uniform_int(2, 9);
    std::size_t bits = static_cast<std::size_t>(cdc::test::uniform_int(1, 40));
    std::vector<BitVector> x;
    for (int p = 0; p < parts; ++p) x.push_back(cdc::test::random_bits(bits));
    ChainEncoder enc;
    std::vector<BitVector> blocks;
    for (const auto& part : x) {
      for (auto& b : enc.push(part)) blocks.push_back(b);
      CHECK(enc.buffered() <= 1);
    }
    CHECK(enc.peak_buffered() == 1);
    REQUIRE(static_cast<int>(blocks.size()) == parts - 1);
    // any single known part recovers all others
    int known = cdc::test::uniform_int(0, parts - 1);
    std::vector<BitVector> rec(parts);
    rec[known] = x[known];
    for (int p = known; p + 1 < parts; ++p) rec[p + 1] = rec[p] ^ blocks[p];
    for (int p = known; p > 0; --p) rec[p - 1] = rec[p] ^ blocks[p - 1];
    CHECK(rec == x);
  }
}

TEST_CASE("every node decodes its row for K=5, N=10, i=2") {
  Setup s(5, 10, 4, 2);
  auto down = chain_downlink(s);
  CHECK(down.size() == 10);
  for (int k = 1; k <= 5; ++k) {
    auto res = decode_and_reduce(s.scheme, k, s.ivs[k - 1], down);
    CHECK(res.row == s.oracle[k - 1]);
    CHECK(res.output == reduce_function(s.oracle[k - 1]));
  }
}

TEST_CASE("forwarded downlink also decodes") {
  Setup s(4, 6, 2, 2);
  auto fwd = forward_downlink(s.scheme, encode_uplink(s.scheme, s.ivs));
  CHECK(fwd.size() == 4 * 3);
  for (int k = 1; k <= 4; ++k) {
    CHECK(decode_and_reduce(s.scheme, k, s.ivs[k - 1], fwd).row == s.oracle[k - 1]);
  }
}

TEST_CASE("random pure runs decode bit-exactly") {
  for (int trial = 0; trial < 25; ++trial) {
    int K = cdc::test::uniform_int(2, 6);
    int i = cdc::test::uniform_int(1, K);
    std::int64_t N = binomial(K, i) * cdc::test::uniform_int(1, 2);
    std::int64_t V = (i == K ? 1 : i) * cdc::test::uniform_int(1, 3);
    Setup s(K, N, V, i, static_cast<std::uint64_t>(trial) * 977);
    auto down = chain_downlink(s);
    for (int k = 1; k <= K; ++k) {
      CHECK(decode_and_reduce(s.scheme, k, s.ivs[k - 1], down).row == s.oracle[k - 1]);
    }
  }
}

TEST_CASE("encoding is deterministic") {
  Setup a(4, 6, 2, 2, 11);
  Setup b(4, 6, 2, 2, 11);
  CHECK(chain_downlink(a) == chain_downlink(b));
}

TEST_CASE("missing inputs raise scheme errors") {
  Setup s(3, 6, 2, 2);
  auto up = encode_uplink(s.scheme, s.ivs);

  auto dropped = up;
  dropped[1].clear();
  CHECK_THROWS_AS(encode_downlink(s.scheme, dropped), SchemeError);

  auto thin = s.ivs;
  thin[0].erase(IvId{3, 1});
  CHECK_THROWS_AS(encode_uplink(s.scheme, thin), SchemeError);

  auto no_own = s.ivs[0];
  no_own.erase(IvId{1, 1});
  CHECK_THROWS_AS(decode_and_reduce(s.scheme, 1, no_own, encode_downlink(s.scheme, up).signals), SchemeError);

  std::vector<Signal> none;
  CHECK_THROWS_AS(decode_and_reduce(s.scheme, 1, s.ivs[0], none), SchemeError);
}

TEST_CASE("corrupted downlink changes the decoded row") {
  Setup s(3, 6, 2, 2);
  auto down = chain_downlink(s);
  down[0].payload.set(0, !down[0].payload.get(0));
  bool any_wrong = false;
  for (int k = 1; k <= 3; ++k) {
    any_wrong |= decode_and_reduce(s.scheme, k, s.ivs[k - 1], down).row != s.oracle[k - 1];
  }
  CHECK(any_wrong);
}
