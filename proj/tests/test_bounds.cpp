#include "cdc/bounds.hpp"
#include "cdc/errors.hpp"
#include "cdc/geometry.hpp"
#include "cdc/star_sim.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace cdc;
using cdc::test::R;

namespace {

Execution pure(int K, int i, RelayMode mode = RelayMode::kChain) {
  return execute(JobSpec{K, binomial(K, i), 8, i == K ? 1 : i, 17}, i, mode);
}

void check_sound(const Execution& ex) {
  auto stats = extract_stats(ex.trace);
  CHECK(stats.partition_identity_holds());
  CHECK(lemma2_check(stats, ex.report).holds());
  CHECK(Rational(ex.report.raw.downlink_bits) >= lemma1_bound(stats, ex.job.V));
}

}  // namespace

TEST_CASE("exclusivity statistics of the pure scheme") {
  for (int K = 2; K <= 6; ++K) {
    for (int i = 1; i < K; ++i) {
      auto ex = pure(K, i);
      auto stats = extract_stats(ex.trace);
      std::int64_t N = ex.job.N;
      for (int j = 1; j < K; ++j) CHECK(stats.b[j] == (j == i ? N * (K - i) : 0));
      CHECK(stats.b_tilde_total() == N * i);
      CHECK(stats.partition_identity_holds());
    }
  }
  auto top = extract_stats(pure(4, 4).trace);
  for (int j = 1; j < 4; ++j) CHECK(top.b[j] == 0);
  CHECK(top.b_tilde_total() == 4);
}

TEST_CASE("pure scheme meets the download and counting bounds with equality") {
  for (int K = 2; K <= 6; ++K) {
    for (int i = 1; i <= K; ++i) {
      auto ex = pure(K, i);
      auto stats = extract_stats(ex.trace);
      auto v = lemma2_check(stats, ex.report);
      if (i < K) {
        CHECK(v.tight());
      } else {
        CHECK(v.count_slack == R(0));
        CHECK(v.holds());
      }
      CHECK(lemma1_bound(stats, ex.job.V) == Rational(ex.report.raw.downlink_bits));
    }
  }
}

TEST_CASE("forwarding leaves strict slack in the download bound") {
  for (int K = 3; K <= 5; ++K) {
    for (int i = 1; i < K; ++i) {
      auto ex = pure(K, i, RelayMode::kForward);
      check_sound(ex);
      auto stats = extract_stats(ex.trace);
      CHECK(Rational(ex.report.raw.downlink_bits) > lemma1_bound(stats, ex.job.V));
    }
  }
}

TEST_CASE("mixtures are sound") {
  check_sound(run_mixture(JobSpec{4, 24, 8, 2, 0}, 2, Theta{R(1, 2), R(1, 4), R(1, 4)}));
  check_sound(run_mixture(JobSpec{5, 20, 8, 6, 0}, 3, Theta{R(1, 2), R(1, 2), R(0)}));
  check_sound(run_mixture(JobSpec{4, 36, 8, 6, 0}, 3, Theta{R(1, 3), R(1, 3), R(1, 3)}, RelayMode::kForward));
}

TEST_CASE("an IV computed nowhere is rejected") {
  auto ex = pure(3, 2);
  Trace t = ex.trace;
  for (auto& set : t.compute_sets) {
    set.erase(std::remove(set.begin(), set.end(), IvId{1, 3}), set.end());
  }
  CHECK_THROWS_AS(extract_stats(t), SchemeError);
}

TEST_CASE("plane bound examples") {
  auto b = plane_bounds(3, R(2), R(4, 3));
  CHECK(b.downlink.bound == R(1, 9));
  CHECK(b.uplink.bound == R(1, 6));
  CHECK(b.downlink.best_plane == 2);
  for (int K = 2; K <= 8; ++K) {
    auto z = plane_bounds(K, R(K), R(1));
    CHECK(z.uplink.bound == R(0));
    CHECK(z.downlink.bound == R(0));
  }
  CHECK_THROWS_AS(plane_bounds(4, R(2), R(3)), ParameterError);
}

TEST_CASE("plane closed forms") {
  for (int K = 3; K <= 9; ++K) {
    for (int i = 2; i < K; ++i) {
      Rational r = cdc::test::random_rational(R(1), R(K), 10);
      Rational c = cdc::test::random_rational(R(1), r, 10);
      Rational down = lambda_coef(i) * c + mu_coef(K, r, i);
      CHECK(plane_bound(K, i, r, c, Space::kDownlink) == down);
      CHECK(down == R(-(2 * i - 1)) * r / R(K * i * (i + 1)) - c / R(i * (i + 1)) + R(2, i + 1));
      CHECK(plane_bound(K, i, r, c, Space::kUplink) ==
            -c / R(i * (i - 1)) - R(2) * r / R(K * i) + R(2 * i - 1, i * (i - 1)));
    }
  }
}

TEST_CASE("coefficient signs") {
  for (int K = 3; K <= 10; ++K) {
    for (int i = 2; i < K; ++i) {
      for (int step = 0; step <= 20; ++step) {
        Rational r = R(1) + R(K - 1) * R(step, 20);
        CHECK(lambda_coef(i) < R(0));
        CHECK(mu_coef(K, r, i) > R(0));
        if (r < R(K)) {
          CHECK(lambda_coef(i) + mu_coef(K, r, i) > R(0));
        } else {
          // at r = K the sum vanishes: mu_i = 1/(i(i+1)) = -lambda_i
          CHECK(lambda_coef(i) + mu_coef(K, r, i) == R(0));
        }
      }
    }
  }
}

TEST_CASE("plane touches the envelope function at c_{i-1} and c_i") {
  for (int K = 3; K <= 10; ++K) {
    for (int i = 2; i < K; ++i) {
      for (int step = 0; step < 20; ++step) {
        Rational r = R(1) + R(K - 1) * R(step, 20);
        Rational rem = R(1) - r / R(K);
        for (int j : {i - 1, i}) {
          Rational x = c_point(K, r, j);
          CHECK(lambda_coef(i) * x + mu_coef(K, r, i) == rem * rem / (x + R(1) - R(2) * r / R(K)));
        }
      }
    }
  }
}

TEST_CASE("scheme loads meet the plane bounds") {
  for (int K = 2; K <= 8; ++K) {
    for (int i = 1; i < K; ++i) {
      auto ex = pure(K, i);
      auto b = plane_bounds(K, ex.report.r, ex.report.c);
      CHECK(b.uplink.bound == ex.report.L);
      CHECK(b.downlink.bound == ex.report.D);
      CHECK(surface_value(K, ex.report.r, ex.report.c, Space::kUplink) == ex.report.L);
      CHECK(surface_value(K, ex.report.r, ex.report.c, Space::kDownlink) == ex.report.D);
    }
  }
}

TEST_CASE("plane bounds equal the surface on the pareto triangles") {
  const int K = 6;
  int inside = 0;
  for (int trial = 0; trial < 200; ++trial) {
    Rational r = cdc::test::random_rational(R(1), R(K), 30);
    Rational c = cdc::test::random_rational(R(1), r, 30);
    Facet f = locate_facet(K, r, c, Space::kDownlink);
    auto b = plane_bounds(K, r, c);
    CHECK(b.downlink.bound <= surface_value(K, r, c, Space::kDownlink));
    CHECK(b.uplink.bound <= surface_value(K, r, c, Space::kUplink));
    if (!f.pareto) continue;
    ++inside;
    CHECK(b.downlink.bound == surface_value(K, r, c, Space::kDownlink));
    CHECK(b.uplink.bound == surface_value(K, r, c, Space::kUplink));
  }
  CHECK(inside > 0);
}

TEST_CASE("literal envelope overshoots the achievable Q points") {
  for (int K = 3; K <= 8; ++K) {
    for (int i = 1; i < K; ++i) {
      auto q = corner_q(K, i);
      auto literal = plane_bounds(K, q.r, q.c, EnvelopeVariant::kLiteralOneOverR);
      auto standard = plane_bounds(K, q.r, q.c);
      CHECK(literal.downlink.bound > q.D);
      CHECK(standard.downlink.bound == q.D);
    }
  }
}

TEST_CASE("bounds CSV") {
  std::string csv = bounds_to_csv({plane_bounds(3, R(2), R(4, 3))});
  CHECK(csv.rfind("space,r,c,best_plane,plane_value,envelope_value,bound\n", 0) == 0);
  CHECK(csv.find("downlink,2/1,4/3,2,1/9,") != std::string::npos);
}
