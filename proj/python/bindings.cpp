#include "epsconvex/cli.hpp"
#include "epsconvex/criterion.hpp"
#include "epsconvex/smoothing.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

namespace py = pybind11;
using namespace epsconvex;

namespace {

Point as_point(const HyperbolicSpace& sp, const Vec& coords) {
  if (coords.size() != sp.dim() + 1) throw Error("point needs m + 1 Minkowski coordinates");
  const Point p = sp.normalize(coords);
  sp.check_point(p, 1e-6);
  return p;
}

TangentVector as_tangent(const HyperbolicSpace& sp, const Point& x, const Vec& v) {
  return sp.tangent(x, v);
}

py::dict verdict_dict(const CriterionVerdict& v) {
  py::dict d;
  d["kind"] = verdict_name(v.kind);
  d["passed"] = v.passed;
  d["margin"] = v.margin;
  d["inconclusive"] = v.inconclusive;
  d["tolerance"] = v.tolerance;
  d["bound_low"] = v.bound_low;
  d["bound_high"] = v.bound_high;
  d["ii_low"] = v.ii_low;
  d["ii_high"] = v.ii_high;
  d["strictly_convex"] = v.strictly_convex;
  d["corners"] = v.corners;
  d["note"] = v.note;
  return d;
}

CheckOptions check_options(double tolerance, int samples) {
  CheckOptions o;
  o.tolerance = tolerance;
  o.samples = samples;
  return o;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "eps-strict convexity checks in the hyperboloid model";
  py::register_exception<Error>(m, "Error", PyExc_ValueError);

  py::class_<HyperbolicSpace>(m, "Space")
      .def(py::init<int, double>(), py::arg("m"), py::arg("a") = 1.0)
      .def_property_readonly("m", &HyperbolicSpace::dim)
      .def_property_readonly("a", &HyperbolicSpace::a)
      .def("origin", [](const HyperbolicSpace& s) { return s.origin().coords; })
      .def("point", [](const HyperbolicSpace& s, const Vec& spatial) {
        return s.point_from_spatial(spatial).coords;
      }, py::arg("spatial"))
      .def("exp", [](const HyperbolicSpace& s, const Vec& x, const Vec& v) {
        const Point p = as_point(s, x);
        return s.exp_map(p, as_tangent(s, p, v)).coords;
      }, py::arg("x"), py::arg("v"))
      .def("log", [](const HyperbolicSpace& s, const Vec& x, const Vec& y) {
        return s.log_map(as_point(s, x), as_point(s, y)).vec;
      }, py::arg("x"), py::arg("y"))
      .def("distance", [](const HyperbolicSpace& s, const Vec& x, const Vec& y) {
        return s.distance(as_point(s, x), as_point(s, y));
      }, py::arg("x"), py::arg("y"))
      .def("transport", [](const HyperbolicSpace& s, const Vec& x, const Vec& y, const Vec& v) {
        const Point p = as_point(s, x);
        return s.parallel_transport(p, as_point(s, y), as_tangent(s, p, v)).vec;
      }, py::arg("x"), py::arg("y"), py::arg("v"))
      .def("tangent_frame", [](const HyperbolicSpace& s, const Vec& x) {
        std::vector<Vec> out;
        for (const auto& e : s.tangent_frame(as_point(s, x))) out.push_back(e.vec);
        return out;
      }, py::arg("x"));

  py::class_<ConvexBody>(m, "Body")
      .def_static("from_json", [](const std::string& text) { return parse_body_spec(text); },
                  py::arg("text"))
      .def_static("load", &load_body_spec, py::arg("path"))
      .def_property_readonly("kind", &ConvexBody::kind)
      .def_property_readonly("space", &ConvexBody::space)
      .def("distance", [](const ConvexBody& b, const Vec& x) {
        return distance_to_body(b, as_point(b.space(), x));
      }, py::arg("x"))
      .def("signed_distance", [](const ConvexBody& b, const Vec& x) {
        return signed_distance(b, as_point(b.space(), x));
      }, py::arg("x"))
      .def("contains", [](const ConvexBody& b, const Vec& x, double tol) {
        return contains(b, as_point(b.space(), x), tol);
      }, py::arg("x"), py::arg("tol") = 0.0)
      .def("inradius", [](const ConvexBody& b) { return inradius(b); })
      .def("closed_form_ii", [](const ConvexBody& b) { return closed_form_ii(b); })
      .def("erode", [](const ConvexBody& b, double s) { return erode(b, s); }, py::arg("s"))
      .def("dilate", [](const ConvexBody& b, double s) { return dilate(b, s); }, py::arg("s"))
      .def("boundary_sample", [](const ConvexBody& b, int n) {
        std::vector<Vec> out;
        for (const auto& p : boundary_sample(b, n).points) out.push_back(p.coords);
        return out;
      }, py::arg("n"));

  m.def("second_fundamental_form", [](const ConvexBody& b, const Vec& x, const Vec& v) {
    const Point p = as_point(b.space(), x);
    return second_fundamental_form(b, p, as_tangent(b.space(), p, v));
  }, py::arg("body"), py::arg("x"), py::arg("v"));

  m.def("check", [](const ConvexBody& body, double eps, double a, double b, double tolerance,
                    int samples) {
    const PinchBounds bounds = PinchBounds::make(a, b);
    const CheckOptions opt = check_options(tolerance, samples);
    py::list out;
    out.append(verdict_dict(check_necessary(body, eps, bounds, opt)));
    out.append(verdict_dict(check_sufficient(body, eps, bounds, opt)));
    if (a == b) out.append(verdict_dict(check_iff_constant_curvature(body, eps, a, opt)));
    return out;
  }, py::arg("body"), py::arg("eps"), py::arg("a") = 1.0, py::arg("b") = 1.0,
     py::arg("tolerance") = 1e-4, py::arg("samples") = 512);

  m.def("curvature_profile", [](const ConvexBody& body, const Vec& x, double eps, int steps) {
    const auto prof = flow_curvature_profile(body, as_point(body.space(), x), eps, steps);
    py::dict d;
    d["t"] = prof.times;
    d["lambda_minus"] = prof.lambda_minus;
    d["lambda_plus"] = prof.lambda_plus;
    d["blow_up"] = prof.blow_up;
    d["blow_up_time"] = prof.focal_time;
    return d;
  }, py::arg("body"), py::arg("x"), py::arg("eps"), py::arg("steps") = 64);

  m.def("focal_time", [](const ConvexBody& body, const Vec& x, double t_max, int steps) {
    return focal_time(body, as_point(body.space(), x), t_max, steps);
  }, py::arg("body"), py::arg("x"), py::arg("t_max"), py::arg("steps") = 256);

  m.def("roundtrip", [](const ConvexBody& body, double eps, int probes, std::uint64_t seed) {
    const auto r = erode_dilate_check(body, eps, probes, seed);
    py::dict d;
    d["defect"] = r.defect;
    d["spacing"] = r.spacing;
    d["set_equal"] = r.set_equal;
    d["core_convex"] = r.core_convex;
    d["core_violation"] = r.core_violation;
    d["iff"] = verdict_dict(r.iff);
    d["passed"] = r.passed;
    return d;
  }, py::arg("body"), py::arg("eps"), py::arg("probes") = 512, py::arg("seed") = 0);

  m.def("smoothed_value", [](const ConvexBody& body, double kappa, const Vec& x) {
    return smoothed_value(SmoothedField(body, kappa), as_point(body.space(), x));
  }, py::arg("body"), py::arg("kappa"), py::arg("x"));

  m.def("levelset_check", [](const ConvexBody& body, double alpha, double beta, double eta,
                             double alpha_p, double beta_p, std::uint64_t seed) {
    LevelSetOptions opt;
    opt.seed = seed;
    const auto r = smoothed_levelset_check(body, alpha, beta, eta, alpha_p, beta_p, opt);
    py::dict d;
    d["eta_prime"] = r.eta_prime;
    d["kappa"] = r.kappa;
    d["level"] = r.level;
    d["inclusion_ok"] = r.inclusion_ok;
    d["inclusion_failures"] = r.inclusion_failures;
    d["curvature_low"] = r.curvature_low;
    d["curvature_high"] = r.curvature_high;
    d["bound_low"] = r.bound_low;
    d["bound_high"] = r.bound_high;
    d["passed"] = r.passed;
    return d;
  }, py::arg("body"), py::arg("alpha"), py::arg("beta"), py::arg("eta"), py::arg("alpha_p"),
     py::arg("beta_p"), py::arg("seed") = 0);

  m.def("integrate_riccati", [](const Mat& a0, double c, double t_end,
                                std::vector<double> output_times) {
    RiccatiOptions opt;
    opt.output_times = std::move(output_times);
    const auto tr = integrate_riccati(SymOperator(a0), constant_curvature(a0.rows(), c), t_end, opt);
    std::vector<Mat> states;
    for (std::size_t i : tr.output_index) states.push_back(tr.states[i].matrix());
    py::dict d;
    d["states"] = states;
    d["blow_up"] = tr.blow_up_detected;
    d["blow_up_time"] = tr.blow_up_time;
    return d;
  }, py::arg("a0"), py::arg("c"), py::arg("t_end"), py::arg("output_times") = std::vector<double>{});
}
