#include "cdc/geometry.hpp"

#include <algorithm>
#include <stdexcept>

#include "cdc/errors.hpp"

namespace cdc {

std::string to_string(Space space) { return space == Space::kUplink ? "uplink" : "downlink"; }

SccPoint project(const SccQuad& q, Space space) {
  return {q.r, q.c, space == Space::kUplink ? q.L : q.D, space};
}

namespace {

void check_K(int K) {
  if (K < 2) throw ParameterError("K must be >= 2, got " + std::to_string(K));
}

// Orientation of (b - a) x (p - a).
Rational cross(const Rational& ax, const Rational& ay, const Rational& bx, const Rational& by,
               const Rational& px, const Rational& py) {
  return (bx - ax) * (py - ay) - (by - ay) * (px - ax);
}

Plane plane_through(const SccPoint& p0, const SccPoint& p1, const SccPoint& p2) {
  // Cramer's rule on [r c 1] [a_r a_c a0]^T = load.
  auto det3 = [](const Rational m[3][3]) {
    return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
           m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
           m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
  };
  const SccPoint* pts[3] = {&p0, &p1, &p2};
  Rational a[3][3];
  Rational rhs[3];
  for (int row = 0; row < 3; ++row) {
    a[row][0] = pts[row]->r;
    a[row][1] = pts[row]->c;
    a[row][2] = Rational(1);
    rhs[row] = pts[row]->load;
  }
  Rational det = det3(a);
  if (det == Rational(0)) throw std::logic_error("degenerate facet: vertices are collinear in r-c");
  Rational coef[3];
  for (int col = 0; col < 3; ++col) {
    Rational m[3][3];
    for (int row = 0; row < 3; ++row) {
      for (int cc = 0; cc < 3; ++cc) m[row][cc] = cc == col ? rhs[row] : a[row][cc];
    }
    coef[col] = det3(m) / det;
  }
  return {coef[0], coef[1], coef[2]};
}

Facet make_facet(FacetKind kind, int index, int i, bool pareto, std::string name,
                 std::vector<SccPoint> vertices) {
  Facet f;
  f.kind = kind;
  f.index = index;
  f.i = i;
  f.pareto = pareto;
  f.name = std::move(name);
  f.vertices = std::move(vertices);
  f.plane = plane_through(f.vertices[0], f.vertices[1], f.vertices[2]);
  for (const auto& v : f.vertices) {
    if (f.plane(v.r, v.c) != v.load) throw std::logic_error("facet " + f.name + " is not planar");
  }
  return f;
}

}  // namespace

SccQuad corner_p(int K, int i) {
  check_K(K);
  if (i < 1 || i > K) throw ParameterError("corner index must lie in [1, K]");
  Rational slack = Rational(1) - Rational(i, K);
  return {Rational(i), Rational(i) * (Rational(1) - Rational(i - 1, K)), slack / Rational(i),
          slack / Rational(i + 1)};
}

SccQuad corner_q(int K, int i) {
  SccQuad q = corner_p(K, i);
  q.c = Rational(i);
  return q;
}

ParetoTable pareto_points(int K) {
  check_K(K);
  ParetoTable t;
  for (int i = 1; i <= K; ++i) {
    t.P.push_back(corner_p(K, i));
    t.Q.push_back(corner_q(K, i));
  }
  return t;
}

bool Facet::contains(const Rational& r, const Rational& c) const {
  bool has_pos = false;
  bool has_neg = false;
  for (std::size_t j = 0; j < vertices.size(); ++j) {
    const auto& a = vertices[j];
    const auto& b = vertices[(j + 1) % vertices.size()];
    Rational s = cross(a.r, a.c, b.r, b.c, r, c);
    if (s > Rational(0)) has_pos = true;
    if (s < Rational(0)) has_neg = true;
  }
  return !(has_pos && has_neg);
}

std::vector<Facet> facets(int K, Space space) {
  check_K(K);
  auto P = [&](int i) { return project(corner_p(K, i), space); };
  auto Q = [&](int i) { return project(corner_q(K, i), space); };
  auto idx = [](int i) { return std::to_string(i); };
  std::vector<Facet> out;
  for (int i = 2; i <= K - 1; ++i) {
    out.push_back(make_facet(FacetKind::kTriangle, static_cast<int>(out.size()), i, true,
                             "P" + idx(i - 1) + "P" + idx(i) + "P" + idx(K),
                             {P(i - 1), P(i), P(K)}));
  }
  out.push_back(make_facet(FacetKind::kTriangle, static_cast<int>(out.size()), 1, false, "P1P2Q2",
                           {P(1), P(2), Q(2)}));
  for (int i = 2; i <= K - 1; ++i) {
    out.push_back(make_facet(FacetKind::kTrapezoid, static_cast<int>(out.size()), i, false,
                             "P" + idx(i) + "Q" + idx(i) + "Q" + idx(i + 1) + "P" + idx(i + 1),
                             {P(i), Q(i), Q(i + 1), P(i + 1)}));
  }
  return out;
}

void check_rc(int K, const Rational& r, const Rational& c) {
  check_K(K);
  if (!(Rational(1) <= c && c <= r && r <= Rational(K))) {
    throw ParameterError("(r, c) = (" + format_rational(r) + ", " + format_rational(c) +
                         ") outside the regime 1 <= c <= r <= " + std::to_string(K));
  }
}

Facet locate_facet(int K, const Rational& r, const Rational& c, Space space) {
  check_rc(K, r, c);
  for (Facet& f : facets(K, space)) {
    if (f.contains(r, c)) return f;
  }
  throw std::logic_error("facets do not cover (" + format_rational(r) + ", " + format_rational(c) + ")");
}

Rational surface_value(int K, const Rational& r, const Rational& c, Space space) {
  return locate_facet(K, r, c, space).plane(r, c);
}

PiecewiseLinear::PiecewiseLinear(std::vector<std::pair<Rational, Rational>> breakpoints)
    : points_(std::move(breakpoints)) {
  if (points_.empty()) throw ParameterError("piecewise-linear function needs a breakpoint");
  for (std::size_t j = 1; j < points_.size(); ++j) {
    if (!(points_[j - 1].first < points_[j].first)) {
      throw ParameterError("breakpoints must have strictly increasing x");
    }
  }
}

Rational PiecewiseLinear::operator()(const Rational& x) const {
  if (points_.empty() || x < points_.front().first || x > points_.back().first) {
    throw ParameterError("x = " + format_rational(x) + " outside the function's domain");
  }
  auto hi = std::lower_bound(points_.begin(), points_.end(), x,
                             [](const auto& p, const Rational& v) { return p.first < v; });
  if (hi->first == x) return hi->second;
  auto lo = hi - 1;
  return lo->second + (hi->second - lo->second) * (x - lo->first) / (hi->first - lo->first);
}

PiecewiseLinear lower_convex_envelope(std::vector<std::pair<Rational, Rational>> points) {
  std::sort(points.begin(), points.end());
  std::vector<std::pair<Rational, Rational>> hull;
  for (const auto& p : points) {
    // Equal x: keep the lowest y, which sorts first.
    if (!hull.empty() && hull.back().first == p.first) continue;
    while (hull.size() >= 2) {
      const auto& a = hull[hull.size() - 2];
      const auto& b = hull.back();
      if (cross(a.first, a.second, b.first, b.second, p.first, p.second) <= Rational(0)) {
        hull.pop_back();
      } else {
        break;
      }
    }
    hull.push_back(p);
  }
  return PiecewiseLinear(std::move(hull));
}

EnvelopeCurves convex_envelope_curves(int K) {
  check_K(K);
  std::vector<std::pair<Rational, Rational>> up;
  std::vector<std::pair<Rational, Rational>> down;
  for (int i = 1; i <= K; ++i) {
    SccQuad q = corner_q(K, i);
    up.emplace_back(q.r, q.L);
    down.emplace_back(q.r, q.D);
  }
  EnvelopeCurves out{lower_convex_envelope(up), lower_convex_envelope(down)};
  if (out.upload.breakpoints() != up || out.download.breakpoints() != down) {
    throw std::logic_error("envelope breakpoints differ from the Q_i chain");
  }
  return out;
}

bool dominates(const SccQuad& a, const SccQuad& b) {
  bool weak = a.r <= b.r && a.c <= b.c && a.L <= b.L && a.D <= b.D;
  return weak && !(a == b);
}

namespace {

void check_feasible(int K, const SccQuad& p) {
  check_rc(K, p.r, p.c);
  if (!(Rational(0) <= p.D && p.D <= p.L && p.L <= Rational(1) - p.r / Rational(K))) {
    throw ParameterError("(L, D) = (" + format_rational(p.L) + ", " + format_rational(p.D) +
                         ") outside the regime 0 <= D <= L <= 1 - r/K");
  }
}

// Barycentric weights of (r, c) in the triangle P'_{i-1} P'_i P'_K; nullopt
// when outside.
std::optional<ThetaDecomposition> barycentric(int K, int i, const Rational& r, const Rational& c) {
  SccQuad a = corner_p(K, i - 1);
  SccQuad b = corner_p(K, i);
  SccQuad k = corner_p(K, K);
  ThetaDecomposition t;
  t.i = i;
  if (b.r == k.r) {
    // K = 2: P_i = P_K and the region is the segment P_1 P_2 on c = 1.
    if (c != a.c) return std::nullopt;
    t.theta1 = (k.r - r) / (k.r - a.r);
    t.theta2 = Rational(0);
    t.theta3 = Rational(1) - t.theta1;
  } else {
    Rational det = cross(a.r, a.c, b.r, b.c, k.r, k.c);
    t.theta1 = cross(r, c, b.r, b.c, k.r, k.c) / det;
    t.theta2 = cross(a.r, a.c, r, c, k.r, k.c) / det;
    t.theta3 = Rational(1) - t.theta1 - t.theta2;
  }
  if (t.theta1 < Rational(0) || t.theta2 < Rational(0) || t.theta3 < Rational(0)) return std::nullopt;
  return t;
}

}  // namespace

ParetoVerdict is_pareto(int K, const SccQuad& point) {
  check_feasible(K, point);

  // Facet route: inside a Pareto triangle and on both surfaces.
  bool on_region = false;
  if (K == 2) {
    on_region = point.c == Rational(1);
  } else {
    for (const Facet& f : facets(K, Space::kUplink)) {
      if (f.pareto && f.contains(point.r, point.c)) on_region = true;
    }
  }
  bool by_facets = on_region && point.L == surface_value(K, point.r, point.c, Space::kUplink) &&
                   point.D == surface_value(K, point.r, point.c, Space::kDownlink);

  // Decomposition route: theta_1 P_{i-1} + theta_2 P_i + theta_3 P_K.
  ParetoVerdict verdict;
  for (int i = 2; i <= std::max(2, K - 1) && !verdict.decomposition; ++i) {
    auto t = barycentric(K, i, point.r, point.c);
    if (!t) continue;
    SccQuad a = corner_p(K, i - 1);
    SccQuad b = corner_p(K, i);
    SccQuad k = corner_p(K, K);
    Rational L = t->theta1 * a.L + t->theta2 * b.L + t->theta3 * k.L;
    Rational D = t->theta1 * a.D + t->theta2 * b.D + t->theta3 * k.D;
    if (L == point.L && D == point.D) verdict.decomposition = t;
  }
  verdict.pareto = verdict.decomposition.has_value();
  if (verdict.pareto != by_facets) {
    throw std::logic_error("Pareto characterizations disagree at (" + format_rational(point.r) + ", " +
                           format_rational(point.c) + ")");
  }
  return verdict;
}

std::vector<SccQuad> sample_surface(int K, int resolution) {
  check_K(K);
  if (resolution < 2) throw ParameterError("resolution must be >= 2");
  std::vector<std::pair<Rational, Rational>> rc;
  const Rational step = Rational(K - 1, resolution - 1);
  for (int a = 0; a < resolution; ++a) {
    for (int b = 0; b <= a; ++b) rc.emplace_back(Rational(1) + step * a, Rational(1) + step * b);
  }
  for (int i = 1; i <= K; ++i) {
    rc.emplace_back(corner_p(K, i).r, corner_p(K, i).c);
    rc.emplace_back(corner_q(K, i).r, corner_q(K, i).c);
  }
  std::sort(rc.begin(), rc.end());
  rc.erase(std::unique(rc.begin(), rc.end()), rc.end());
  std::vector<SccQuad> out;
  out.reserve(rc.size());
  for (const auto& [r, c] : rc) {
    out.push_back({r, c, surface_value(K, r, c, Space::kUplink), surface_value(K, r, c, Space::kDownlink)});
  }
  return out;
}

std::string surface_to_csv(const std::vector<SccQuad>& rows, int digits, std::optional<Space> only) {
  const bool up = !only || *only == Space::kUplink;
  const bool down = !only || *only == Space::kDownlink;
  std::string out = "r,c";
  if (up) out += ",L";
  if (down) out += ",D";
  out += ",r_exact,c_exact";
  if (up) out += ",L_exact";
  if (down) out += ",D_exact";
  out += "\n";
  for (const auto& q : rows) {
    out += to_decimal(q.r, digits) + "," + to_decimal(q.c, digits);
    if (up) out += "," + to_decimal(q.L, digits);
    if (down) out += "," + to_decimal(q.D, digits);
    out += "," + format_rational(q.r) + "," + format_rational(q.c);
    if (up) out += "," + format_rational(q.L);
    if (down) out += "," + format_rational(q.D);
    out += "\n";
  }
  return out;
}

}  // namespace cdc
