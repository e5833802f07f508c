#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "cdc/bounds.hpp"
#include "cdc/combinatorics.hpp"
#include "cdc/errors.hpp"
#include "cdc/geometry.hpp"
#include "cdc/star_sim.hpp"

namespace py = pybind11;

namespace {

using cdc::Rational;

py::object to_fraction(const Rational& x) {
  static py::object fraction = py::module_::import("fractions").attr("Fraction");
  return fraction(x.numerator(), x.denominator());
}

// Accepts int, fractions.Fraction or a "p/q" string.
Rational to_rational(const py::handle& obj) {
  if (py::isinstance<py::str>(obj)) return cdc::parse_rational(obj.cast<std::string>());
  if (py::hasattr(obj, "numerator") && py::hasattr(obj, "denominator")) {
    return Rational(obj.attr("numerator").cast<std::int64_t>(), obj.attr("denominator").cast<std::int64_t>());
  }
  throw cdc::ParameterError("expected an int, Fraction or 'p/q' string");
}

cdc::Space to_space(const std::string& name) {
  if (name == "uplink") return cdc::Space::kUplink;
  if (name == "downlink") return cdc::Space::kDownlink;
  throw cdc::ParameterError("space must be 'uplink' or 'downlink'");
}

py::tuple quad(const cdc::SccQuad& q) {
  return py::make_tuple(to_fraction(q.r), to_fraction(q.c), to_fraction(q.L), to_fraction(q.D));
}

py::dict execution_dict(const cdc::Execution& ex) {
  py::dict d;
  d["r"] = to_fraction(ex.report.r);
  d["c"] = to_fraction(ex.report.c);
  d["L"] = to_fraction(ex.report.L);
  d["D"] = to_fraction(ex.report.D);
  d["stored_files"] = ex.report.raw.stored_files;
  d["ivs"] = ex.report.raw.ivs;
  d["uplink_bits"] = ex.report.raw.uplink_bits;
  d["downlink_bits"] = ex.report.raw.downlink_bits;
  d["passed"] = ex.verdict.pass;
  d["verdict"] = ex.verdict.describe();
  d["peak_ap_buffer"] = ex.peak_ap_buffer;
  d["trace"] = cdc::trace_to_jsonl(ex.trace);
  py::list outputs;
  for (const auto& u : ex.outputs) outputs.append(py::bytes(reinterpret_cast<const char*>(u.bytes().data()), u.bytes().size()));
  d["outputs"] = outputs;
  return d;
}

py::dict space_bound(const cdc::SpaceBound& b) {
  py::dict d;
  d["best_plane"] = b.best_plane;
  d["plane_value"] = to_fraction(b.plane_value);
  d["envelope_value"] = to_fraction(b.envelope_value);
  d["bound"] = to_fraction(b.bound);
  return d;
}

py::list breakpoints(const cdc::PiecewiseLinear& f) {
  py::list out;
  for (const auto& [x, y] : f.breakpoints()) out.append(py::make_tuple(to_fraction(x), to_fraction(y)));
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Coded distributed computing over a star network";

  py::register_exception<cdc::ParameterError>(m, "ParameterError", PyExc_ValueError);
  py::register_exception<cdc::SchemeError>(m, "SchemeError", PyExc_RuntimeError);

  m.def("binomial", &cdc::binomial, py::arg("n"), py::arg("k"));

  m.def(
      "enumerate_subsets",
      [](int K, int i) {
        std::vector<std::vector<int>> out;
        for (const auto& s : cdc::enumerate_subsets(K, i)) out.push_back(s.members());
        return out;
      },
      py::arg("K"), py::arg("i"), "All i-subsets of 1..K in colex order.");

  m.def(
      "subset_rank", [](std::vector<int> members, int K) { return cdc::subset_rank(cdc::NodeSet(std::move(members)), K); },
      py::arg("members"), py::arg("K"));

  m.def(
      "minimal_feasible",
      [](int K, int i) { return py::make_tuple(cdc::minimal_feasible_N(K, i), cdc::minimal_feasible_V(K, i)); },
      py::arg("K"), py::arg("i"), "Smallest (N, V) accepted for parameter i.");

  m.def(
      "execute",
      [](int K, std::int64_t N, std::int64_t W, std::int64_t V, std::uint64_t seed, int i, const std::string& relay) {
        cdc::RelayMode mode = cdc::RelayMode::kChain;
        if (relay == "forward") {
          mode = cdc::RelayMode::kForward;
        } else if (relay != "chain") {
          throw cdc::ParameterError("relay must be 'chain' or 'forward'");
        }
        cdc::Execution ex;
        {
          py::gil_scoped_release release;
          ex = cdc::execute(cdc::JobSpec{K, N, W, V, seed}, i, mode);
        }
        return execution_dict(ex);
      },
      py::arg("K"), py::arg("N"), py::arg("W") = 64, py::arg("V") = 1, py::arg("seed") = 0, py::arg("i") = 1,
      py::arg("relay") = "chain", "Run the scheme end to end and return measured loads and the verdict.");

  m.def(
      "run_mixture",
      [](int K, std::int64_t N, std::int64_t W, std::int64_t V, std::uint64_t seed, int i, py::sequence theta) {
        if (py::len(theta) != 3) throw cdc::ParameterError("theta takes three weights");
        cdc::Theta t{to_rational(theta[0]), to_rational(theta[1]), to_rational(theta[2])};
        cdc::Execution ex;
        {
          py::gil_scoped_release release;
          ex = cdc::run_mixture(cdc::JobSpec{K, N, W, V, seed}, i, t);
        }
        return execution_dict(ex);
      },
      py::arg("K"), py::arg("N"), py::arg("W"), py::arg("V"), py::arg("seed"), py::arg("i"), py::arg("theta"));

  m.def(
      "pareto_points",
      [](int K) {
        cdc::ParetoTable t = cdc::pareto_points(K);
        py::list P;
        py::list Q;
        for (const auto& p : t.P) P.append(quad(p));
        for (const auto& q : t.Q) Q.append(quad(q));
        py::dict d;
        d["P"] = P;
        d["Q"] = Q;
        return d;
      },
      py::arg("K"));

  m.def(
      "surface_value",
      [](int K, py::object r, py::object c, const std::string& space) {
        return to_fraction(cdc::surface_value(K, to_rational(r), to_rational(c), to_space(space)));
      },
      py::arg("K"), py::arg("r"), py::arg("c"), py::arg("space"));

  m.def(
      "locate_facet",
      [](int K, py::object r, py::object c, const std::string& space) {
        cdc::Facet f = cdc::locate_facet(K, to_rational(r), to_rational(c), to_space(space));
        py::dict d;
        d["name"] = f.name;
        d["kind"] = f.kind == cdc::FacetKind::kTriangle ? "triangle" : "trapezoid";
        d["index"] = f.index;
        d["pareto"] = f.pareto;
        d["plane"] = py::make_tuple(to_fraction(f.plane.a_r), to_fraction(f.plane.a_c), to_fraction(f.plane.a0));
        return d;
      },
      py::arg("K"), py::arg("r"), py::arg("c"), py::arg("space"));

  m.def(
      "is_pareto",
      [](int K, py::sequence point) {
        if (py::len(point) != 4) throw cdc::ParameterError("point is (r, c, L, D)");
        cdc::SccQuad q{to_rational(point[0]), to_rational(point[1]), to_rational(point[2]), to_rational(point[3])};
        cdc::ParetoVerdict v = cdc::is_pareto(K, q);
        py::dict d;
        d["pareto"] = v.pareto;
        if (v.decomposition) {
          d["i"] = v.decomposition->i;
          d["theta"] = py::make_tuple(to_fraction(v.decomposition->theta1), to_fraction(v.decomposition->theta2),
                                      to_fraction(v.decomposition->theta3));
        }
        return d;
      },
      py::arg("K"), py::arg("point"));

  m.def(
      "plane_bounds",
      [](int K, py::object r, py::object c) {
        cdc::PlaneBounds b = cdc::plane_bounds(K, to_rational(r), to_rational(c));
        py::dict d;
        d["uplink"] = space_bound(b.uplink);
        d["downlink"] = space_bound(b.downlink);
        return d;
      },
      py::arg("K"), py::arg("r"), py::arg("c"));

  m.def(
      "convex_envelope_curves",
      [](int K) {
        cdc::EnvelopeCurves e = cdc::convex_envelope_curves(K);
        py::dict d;
        d["upload"] = breakpoints(e.upload);
        d["download"] = breakpoints(e.download);
        return d;
      },
      py::arg("K"));
}
