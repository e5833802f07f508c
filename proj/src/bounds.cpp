#include "cdc/bounds.hpp"

#include <algorithm>
#include <numeric>

#include "cdc/errors.hpp"
#include "cdc/geometry.hpp"

namespace cdc {

std::int64_t ExclusivityStats::b_tilde_total() const {
  return std::accumulate(b_tilde.begin(), b_tilde.end(), std::int64_t{0});
}

bool ExclusivityStats::partition_identity_holds() const {
  std::vector<std::int64_t> per_node = b_tilde;
  for (const auto& [key, count] : per_pair) per_node[key.first - 1] += count;
  return std::all_of(per_node.begin(), per_node.end(), [&](std::int64_t v) { return v == N; });
}

ExclusivityStats extract_stats(const Trace& trace) {
  const int K = trace.K;
  ExclusivityStats stats;
  stats.K = K;
  stats.N = trace.N;
  stats.b.assign(static_cast<std::size_t>(K), 0);
  stats.b_tilde.assign(static_cast<std::size_t>(K), 0);

  // holders[(k, n)] = nodes that computed v_{k,n}
  std::map<IvId, std::vector<int>> holders;
  for (int node = 1; node <= K; ++node) {
    for (const IvId& id : trace.compute_sets.at(node - 1)) holders[id].push_back(node);
  }
  for (int k = 1; k <= K; ++k) {
    for (std::int64_t n = 1; n <= trace.N; ++n) {
      auto it = holders.find({k, n});
      if (it == holders.end()) {
        throw SchemeError("IV " + IvId{k, n}.to_string() + " is computed by no node");
      }
      const auto& nodes = it->second;
      if (std::find(nodes.begin(), nodes.end(), k) != nodes.end()) {
        ++stats.b_tilde[k - 1];
        continue;
      }
      NodeSet S(nodes);
      ++stats.b[static_cast<std::size_t>(S.size())];
      ++stats.per_pair[{k, S}];
    }
  }
  return stats;
}

Lemma2Verdict lemma2_check(const ExclusivityStats& stats, const LoadReport& report) {
  Rational sum_b(0);
  Rational weighted(0);
  for (int j = 1; j < stats.K; ++j) {
    sum_b += Rational(stats.b[static_cast<std::size_t>(j)]);
    weighted += Rational((j - 1) * stats.b[static_cast<std::size_t>(j)]);
  }
  const Rational N(stats.N);
  const Rational K(stats.K);
  return {sum_b - N * (K - report.r), (report.c - Rational(1)) * N * K - weighted};
}

Rational lemma1_bound(const ExclusivityStats& stats, std::int64_t V) {
  Rational total(0);
  for (int j = 1; j < stats.K; ++j) total += Rational(stats.b[static_cast<std::size_t>(j)], j + 1);
  return total * Rational(V);
}

Rational c_point(int K, const Rational& r, int i) {
  return Rational(1) + (Rational(1) - r / Rational(K)) * Rational(i - 1);
}

Rational lambda_coef(int i) { return Rational(-1, i * (i + 1)); }

Rational mu_coef(int K, const Rational& r, int i) {
  return Rational(2 * i - 1, i * (i + 1)) * (Rational(1) - r / Rational(K)) + Rational(1, i * (i + 1));
}

Rational plane_bound(int K, int i, const Rational& r, const Rational& c, Space space) {
  if (i < 2 || i > K - 1) throw ParameterError("plane index must lie in [2, K-1]");
  if (space == Space::kUplink) {
    return -c / Rational(i * (i - 1)) - Rational(2) * r / Rational(K * i) +
           Rational(2 * i - 1, i * (i - 1));
  }
  return lambda_coef(i) * c + mu_coef(K, r, i);
}

namespace {

Rational envelope(int K, const Rational& r, Space space, EnvelopeVariant variant) {
  EnvelopeCurves curves = convex_envelope_curves(K);
  if (space == Space::kUplink || variant == EnvelopeVariant::kLiteralOneOverR) return curves.upload(r);
  return curves.download(r);
}

SpaceBound bound_in(int K, const Rational& r, const Rational& c, Space space, EnvelopeVariant variant) {
  SpaceBound out;
  out.space = space;
  out.r = r;
  out.c = c;
  for (int i = 2; i <= K - 1; ++i) {
    Rational v = plane_bound(K, i, r, c, space);
    if (out.best_plane == 0 || v > out.plane_value) {
      out.best_plane = i;
      out.plane_value = v;
    }
  }
  out.envelope_value = envelope(K, r, space, variant);
  out.bound = out.best_plane == 0 ? out.envelope_value : std::max(out.plane_value, out.envelope_value);
  return out;
}

}  // namespace

PlaneBounds plane_bounds(int K, const Rational& r, const Rational& c, EnvelopeVariant variant) {
  check_rc(K, r, c);
  return {bound_in(K, r, c, Space::kUplink, variant), bound_in(K, r, c, Space::kDownlink, variant)};
}

std::string bounds_to_csv(const std::vector<PlaneBounds>& rows) {
  std::string out = "space,r,c,best_plane,plane_value,envelope_value,bound\n";
  for (const auto& row : rows) {
    for (const SpaceBound* b : {&row.uplink, &row.downlink}) {
      out += to_string(b->space) + "," + format_rational(b->r) + "," + format_rational(b->c) + "," +
             std::to_string(b->best_plane) + "," + format_rational(b->plane_value) + "," +
             format_rational(b->envelope_value) + "," + format_rational(b->bound) + "\n";
    }
  }
  return out;
}

}  // namespace cdc
