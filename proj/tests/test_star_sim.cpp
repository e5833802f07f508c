#include <sstream>

#include "cdc/errors.hpp"
#include "cdc/star_sim.hpp"
#include "doctest.h"
#include "json.hpp"
#include "support.hpp"

using namespace cdc;
using cdc::test::R;

namespace {

std::array<Rational, 4> loads(const Execution& ex) {
  return {ex.report.r, ex.report.c, ex.report.L, ex.report.D};
}

// Independent closed form for the pure scheme.
std::array<Rational, 4> closed_form(int K, int i) {
  if (i == K) return {R(K), R(1), R(0), R(0)};
  Rational rem = R(1) - R(i, K);
  return {R(i), R(i) * (R(1) - R(i - 1, K)), rem / R(i), rem / R(i + 1)};
}

}  // namespace

TEST_CASE("toy example K=3, N=6, i=2") {
  auto ex = execute(JobSpec{3, 6, 32, 2, 0}, 2);
  CHECK(ex.verdict.pass);
  CHECK(ex.verdict.describe() == "pass");
  CHECK(loads(ex) == std::array<Rational, 4>{R(2), R(4, 3), R(1, 6), R(1, 9)});
  CHECK(ex.report.raw.stored_files == 12);
  CHECK(ex.report.raw.ivs == 24);
  CHECK(ex.report.raw.uplink_bits == 6);
  CHECK(ex.report.raw.downlink_bits == 4);
}

TEST_CASE("i = K gives (K, 1, 0, 0)") {
  auto ex = execute(JobSpec{4, 1, 16, 3, 0}, 4);
  CHECK(ex.verdict.pass);
  CHECK(loads(ex) == std::array<Rational, 4>{R(4), R(1), R(0), R(0)});
  CHECK(ex.trace.records.empty());
}

TEST_CASE("K=10, N=120, i=3") {
  auto ex = execute(JobSpec{10, 120, 16, 3, 5}, 3);
  CHECK(ex.verdict.pass);
  CHECK(loads(ex) == std::array<Rational, 4>{R(3), R(12, 5), R(7, 30), R(7, 40)});
}

TEST_CASE("measured loads equal the closed form for small K") {
  for (int K = 2; K <= 6; ++K) {
    for (int i = 1; i <= K; ++i) {
      std::int64_t V = i == K ? 1 : i;
      auto ex = execute(JobSpec{K, binomial(K, i), 8, V, 3}, i);
      CHECK(ex.verdict.pass);
      CHECK(loads(ex) == closed_form(K, i));
      CHECK(ex.report.in_regime(K));
      if (i < K) CHECK(ex.report.D < ex.report.L);
      CHECK(ex.peak_ap_buffer <= 1);
    }
  }
}

TEST_CASE("loads do not depend on the seed or on scaling N and V") {
  auto base = loads(execute(JobSpec{4, 6, 8, 2, 0}, 2));
  CHECK(loads(execute(JobSpec{4, 12, 8, 6, 99}, 2)) == base);
  CHECK(loads(execute(JobSpec{4, 18, 3, 4, 1234}, 2)) == base);
}

TEST_CASE("trace records for the toy example") {
  auto ex = execute(JobSpec{3, 6, 32, 2, 0}, 2);
  const Trace& t = trace(ex);
  int uplink = 0;
  int downlink = 0;
  for (const auto& rec : t.records) {
    if (rec.phase == Phase::kUplink) {
      ++uplink;
      CHECK(rec.kind == SignalKind::kUplinkPart);
      CHECK(rec.bits == 2);
      CHECK(rec.block == -1);
    } else {
      CHECK(rec.kind == SignalKind::kDownlinkChain);
      CHECK(rec.sender == 0);
      CHECK(rec.block == downlink);
      CHECK(rec.bits == 2);
      ++downlink;
    }
    CHECK(rec.group_size == 3);
    CHECK(rec.scheme_i == 2);
  }
  CHECK(uplink == 3);
  CHECK(downlink == 2);
  CHECK(t.stored_files == std::vector<std::int64_t>{4, 4, 4});
}

TEST_CASE("recount from the trace matches the meter") {
  for (int trial = 0; trial < 20; ++trial) {
    int K = cdc::test::uniform_int(2, 6);
    int i = cdc::test::uniform_int(1, K);
    auto ex = execute(JobSpec{K, binomial(K, i), 8, i == K ? 1 : i, static_cast<std::uint64_t>(trial)}, i);
    RawCounters rc = recount(ex.trace);
    CHECK(rc == ex.report.raw);
    CHECK(LoadReport::from_counters(ex.job, rc).L == ex.report.L);
  }
}

TEST_CASE("executions are deterministic") {
  auto a = execute(JobSpec{5, 10, 8, 2, 42}, 2);
  auto b = execute(JobSpec{5, 10, 8, 2, 42}, 2);
  CHECK(a.trace == b.trace);
  CHECK(a.outputs == b.outputs);
  auto c = execute(JobSpec{5, 10, 8, 2, 43}, 2);
  CHECK(a.trace == c.trace);
  CHECK(a.outputs != c.outputs);
}

TEST_CASE("forwarding sends D = L") {
  for (int K = 3; K <= 5; ++K) {
    for (int i = 1; i < K; ++i) {
      auto ex = execute(JobSpec{K, binomial(K, i), 8, i, 0}, i, RelayMode::kForward);
      CHECK(ex.verdict.pass);
      CHECK(ex.report.D == ex.report.L);
      CHECK(ex.report.L == closed_form(K, i)[2]);
    }
  }
}

TEST_CASE("mixture weights pick out pure schemes") {
  auto pure = execute(JobSpec{4, 6, 8, 2, 0}, 2);
  auto mix = run_mixture(JobSpec{4, 6, 8, 2, 0}, 2, Theta{R(0), R(1), R(0)});
  CHECK(mix.verdict.pass);
  CHECK(loads(mix) == loads(pure));
  auto top = run_mixture(JobSpec{4, 1, 8, 1, 0}, 2, Theta{R(0), R(0), R(1)});
  CHECK(loads(top) == std::array<Rational, 4>{R(4), R(1), R(0), R(0)});
}

TEST_CASE("half and half mixture averages the pure runs") {
  auto mix = run_mixture(JobSpec{3, 12, 8, 2, 0}, 2, Theta{R(1, 2), R(1, 2), R(0)});
  CHECK(mix.verdict.pass);
  auto a = execute(JobSpec{3, 6, 8, 2, 0}, 1);
  auto b = execute(JobSpec{3, 6, 8, 2, 0}, 2);
  auto la = loads(a);
  auto lb = loads(b);
  auto lm = loads(mix);
  for (int q = 0; q < 4; ++q) CHECK(lm[q] == (la[q] + lb[q]) / R(2));
  CHECK(mix.segments.size() == 2);
}

TEST_CASE("mixture feasibility") {
  Theta theta{R(1, 2), R(1, 4), R(1, 4)};
  CHECK(minimal_mixture_N(4, 2, theta) == 24);
  CHECK(minimal_mixture_V(4, 2, theta) == 2);
  CHECK_THROWS_AS(run_mixture(JobSpec{4, 12, 8, 2, 0}, 2, theta), ParameterError);
  auto v = mixture_violations(JobSpec{4, 12, 8, 2, 0}, 2, theta);
  REQUIRE(v.size() == 1);
  CHECK(v[0].find("minimal feasible N is 24") != std::string::npos);
  CHECK_FALSE(mixture_violations(JobSpec{4, 24, 8, 2, 0}, 2, Theta{R(1, 2), R(1, 2), R(1, 2)}).empty());
  CHECK_FALSE(mixture_violations(JobSpec{4, 24, 8, 2, 0}, 1, theta).empty());
}

TEST_CASE("trace serializes as JSON lines") {
  auto ex = execute(JobSpec{3, 6, 8, 2, 0}, 2);
  std::string text = trace_to_jsonl(ex.trace);
  std::istringstream in(text);
  std::string line;
  int count = 0;
  while (std::getline(in, line)) {
    auto j = nlohmann::json::parse(line);
    CHECK(j.contains("phase"));
    CHECK(j.contains("label"));
    CHECK(j["subset_size"] == 3);
    CHECK(j["subset_rank"] == 0);
    if (j["phase"] == "uplink") {
      CHECK(j["label"] == "uplink-part");
      CHECK(j["block"].is_null());
    }
    ++count;
  }
  CHECK(count == 5);

  auto report = nlohmann::json::parse(report_to_json(ex.report));
  CHECK(report["r"] == "2/1");
  CHECK(report["c"] == "4/3");
  CHECK(report["L"] == "1/6");
  CHECK(report["D"] == "1/9");
}

TEST_CASE("segments must tile the files") {
  JobSpec job{3, 6, 8, 2, 0};
  CHECK_THROWS_AS(execute_segments(job, {Segment{2, 1, 3}}), ParameterError);
  CHECK_THROWS_AS(execute_segments(job, {Segment{1, 4, 3}, Segment{2, 1, 3}}), ParameterError);
  CHECK_THROWS_AS(execute(JobSpec{3, 5, 8, 2, 0}, 2), ParameterError);
}
