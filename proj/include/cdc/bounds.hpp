#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "cdc/combinatorics.hpp"
#include "cdc/rational.hpp"
#include "cdc/geometry.hpp"
#include "cdc/star_sim.hpp"

namespace cdc {

// How often each IV is computed away from the node that needs it.
//   b[j]          number of IVs v_{k,n} not computed at k and computed at
//                 exactly j other nodes (j = 1..K-1; b[0] unused)
//   b_tilde[k-1]  number of v_{k,n} computed at node k itself
//   per_pair      (k, S) -> b_{k,S}
struct ExclusivityStats {
  int K = 0;
  std::int64_t N = 0;
  std::vector<std::int64_t> b;
  std::vector<std::int64_t> b_tilde;
  std::map<std::pair<int, NodeSet>, std::int64_t> per_pair;

  std::int64_t b_tilde_total() const;
  // b_tilde_k + sum_S b_{k,S} = N for every k.
  bool partition_identity_holds() const;
};

// Throws SchemeError if some IV is computed nowhere.
ExclusivityStats extract_stats(const Trace& trace);

// Linear constraints on the statistics, as slacks that must be >= 0:
//   count_slack    = sum_j b_j - N(K - r)
//   weighted_slack = (c - 1)NK - sum_j (j-1) b_j
struct Lemma2Verdict {
  Rational count_slack;
  Rational weighted_slack;
  bool holds() const { return count_slack >= Rational(0) && weighted_slack >= Rational(0); }
  bool tight() const { return count_slack == Rational(0) && weighted_slack == Rational(0); }
};

Lemma2Verdict lemma2_check(const ExclusivityStats& stats, const LoadReport& report);

// Minimum downlink length in bits: V * sum_j b_j / (j + 1).
Rational lemma1_bound(const ExclusivityStats& stats, std::int64_t V);

// c_i = 1 + (1 - r/K)(i - 1)
Rational c_point(int K, const Rational& r, int i);
// lambda_i = -1/(i(i+1))
Rational lambda_coef(int i);
// mu_i = (2i-1)(1 - r/K)/(i(i+1)) + 1/(i(i+1))
Rational mu_coef(int K, const Rational& r, int i);

// Plane through P_{i-1}, P_i, P_K in the given space, evaluated at (r, c):
//   uplink:   -c/(i(i-1)) - 2r/(Ki) + (2i-1)/(i(i-1))
//   downlink: -(2i-1)r/(Ki(i+1)) - c/(i(i+1)) + 2/(i+1)
Rational plane_bound(int K, int i, const Rational& r, const Rational& c, Space space);

enum class EnvelopeVariant {
  kStandard,      // downlink envelope Conv{(1/(r+1))(1 - r/K)}
  kLiteralOneOverR,  // downlink envelope Conv{(1/r)(1 - r/K)}
};

struct SpaceBound {
  Space space = Space::kUplink;
  Rational r, c;
  int best_plane = 0;          // maximizing i in [2, K-1]; 0 when no plane applies
  Rational plane_value;        // value of that plane (0 when none)
  Rational envelope_value;
  Rational bound;              // max(plane_value, envelope_value)
};

struct PlaneBounds {
  SpaceBound uplink;
  SpaceBound downlink;
};

PlaneBounds plane_bounds(int K, const Rational& r, const Rational& c,
                         EnvelopeVariant variant = EnvelopeVariant::kStandard);

// Columns: space,r,c,best_plane,plane_value,envelope_value,bound.
std::string bounds_to_csv(const std::vector<PlaneBounds>& rows);

}  // namespace cdc
