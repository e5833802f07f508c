#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cdc/rational.hpp"

namespace cdc {

// Uplink subspace is (r, c, L); downlink subspace is (r, c, D).
enum class Space { kUplink, kDownlink };

std::string to_string(Space space);

// Full storage/computation/upload/download quadruple.
struct SccQuad {
  Rational r, c, L, D;
  bool operator==(const SccQuad&) const = default;
};

struct SccPoint {
  Rational r, c, load;
  Space space = Space::kUplink;
  bool operator==(const SccPoint&) const = default;
};

SccPoint project(const SccQuad& q, Space space);

// P_i = (i, i(1-(i-1)/K), (1/i)(1-i/K), (1/(i+1))(1-i/K)); Q_i has c = i.
SccQuad corner_p(int K, int i);
SccQuad corner_q(int K, int i);

struct ParetoTable {
  std::vector<SccQuad> P;  // P_i at [i-1]
  std::vector<SccQuad> Q;  // Q_i at [i-1]
};

ParetoTable pareto_points(int K);

// load = a_r r + a_c c + a_0
struct Plane {
  Rational a_r, a_c, a0;
  Rational operator()(const Rational& r, const Rational& c) const { return a_r * r + a_c * c + a0; }
  bool operator==(const Plane&) const = default;
};

enum class FacetKind { kTriangle, kTrapezoid };

struct Facet {
  FacetKind kind = FacetKind::kTriangle;
  int index = 0;       // position in facets(); ties resolve to the lowest
  int i = 0;           // triangle P_{i-1}P_iP_K or trapezoid P_iQ_iQ_{i+1}P_{i+1}; 1 for P_1P_2Q_2
  bool pareto = false; // one of the P_{i-1}P_iP_K triangles
  std::string name;
  std::vector<SccPoint> vertices;  // in boundary order
  Plane plane;

  // Closed containment of (r, c) in the facet's r-c projection.
  bool contains(const Rational& r, const Rational& c) const;
};

// The facet list of the optimal surface, in order: P_{i-1}P_iP_K for
// i = 2..K-1, then P_1P_2Q_2, then P_iQ_iQ_{i+1}P_{i+1} for i = 2..K-1.
// Points on shared edges resolve to the earliest facet, so corner points
// P_i land on a Pareto triangle.
std::vector<Facet> facets(int K, Space space);

// Throws ParameterError unless K >= 2 and 1 <= c <= r <= K.
void check_rc(int K, const Rational& r, const Rational& c);

Facet locate_facet(int K, const Rational& r, const Rational& c, Space space);

// L*(r,c) or D*(r,c).
Rational surface_value(int K, const Rational& r, const Rational& c, Space space);

class PiecewiseLinear {
 public:
  PiecewiseLinear() = default;
  // Breakpoints sorted by strictly increasing x.
  explicit PiecewiseLinear(std::vector<std::pair<Rational, Rational>> breakpoints);

  const std::vector<std::pair<Rational, Rational>>& breakpoints() const { return points_; }
  // Throws ParameterError outside [first x, last x].
  Rational operator()(const Rational& x) const;

 private:
  std::vector<std::pair<Rational, Rational>> points_;
};

// Lower convex envelope of a finite point set (monotone chain).
PiecewiseLinear lower_convex_envelope(std::vector<std::pair<Rational, Rational>> points);

struct EnvelopeCurves {
  PiecewiseLinear upload;    // Conv{(1/r)(1 - r/K)}
  PiecewiseLinear download;  // Conv{(1/(r+1))(1 - r/K)}
};

// Both envelopes over r in [1, K]; their breakpoints are exactly the Q_i.
EnvelopeCurves convex_envelope_curves(int K);

struct ThetaDecomposition {
  int i = 0;  // combination of P_{i-1}, P_i, P_K
  Rational theta1, theta2, theta3;
};

struct ParetoVerdict {
  bool pareto = false;
  std::optional<ThetaDecomposition> decomposition;
};

// True iff (r,c) lies in a triangle P'_{i-1}P'_iP'_K and (L,D) sit on both
// surfaces there. Cross-checked against an exact convex decomposition into
// P_{i-1}, P_i, P_K; disagreement throws std::logic_error. Throws
// ParameterError for points outside the nontrivial regime.
ParetoVerdict is_pareto(int K, const SccQuad& point);

// a <= b componentwise with at least one strict inequality.
bool dominates(const SccQuad& a, const SccQuad& b);

// Grid over the regime: r = 1 + (K-1)a/(res-1), c = 1 + (K-1)b/(res-1),
// c <= r, plus every P_i and Q_i; sorted by (r, c).
std::vector<SccQuad> sample_surface(int K, int resolution);

// Columns: r,c,L,D (decimals) then r_exact,c_exact,L_exact,D_exact ("p/q").
// With `only` set, the other space's two columns are dropped.
std::string surface_to_csv(const std::vector<SccQuad>& rows, int digits = 6,
                           std::optional<Space> only = std::nullopt);

}  // namespace cdc
