#include "epsconvex/criterion.hpp"

#include "epsconvex/detail/dopri.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

namespace epsconvex {

namespace {

double default_step(const HyperbolicSpace& sp, const IIOptions& opt) {
  return opt.step > 0.0 ? opt.step : 1e-4 * std::max(1.0, 1.0 / sp.a());
}

// Inward unit normal of the level set of the signed distance through x.
TangentVector level_normal(const ConvexBody& body, const Point& x) {
  const auto& sp = body.space();
  const TangentVector g = signed_distance_gradient(body, x);
  const double n = sp.norm(g);
  if (!(n > 0.0) || !std::isfinite(n)) throw Error("inward_normal: vanishing distance gradient");
  return sp.scaled(g, -1.0 / n);
}

Point boundary_point(const ConvexBody& body, const Point& x) {
  const Point q = project_to_boundary(body, x);
  if (!q.coords.allFinite()) throw Error("second_fundamental_form: boundary tracing failed");
  return q;
}

double coth(double x) { return 1.0 / std::tanh(x); }

}  // namespace

TangentVector inward_normal(const ConvexBody& body, const Point& x, const IIOptions& opt) {
  const double s = signed_distance(body, x);
  if (std::abs(s) > opt.boundary_tol) {
    std::ostringstream msg;
    msg << "inward_normal: point is not on the boundary (signed distance " << s << ")";
    throw Error(msg.str());
  }
  return level_normal(body, x);
}

IIValue second_fundamental_form_detail(const ConvexBody& body, const Point& x,
                                       const TangentVector& v, const IIOptions& opt) {
  const auto& sp = body.space();
  const TangentVector n = inward_normal(body, x, opt);
  if (std::abs(sp.norm(v) - 1.0) > 1e-9) throw Error("second_fundamental_form: v must be unit");
  if (std::abs(sp.inner(v, n)) > 1e-9)
    throw Error("second_fundamental_form: v must be tangent to the boundary");

  auto estimate = [&](double h) {
    const Point qp = boundary_point(body, sp.exp_map(x, sp.scaled(v, h)));
    const Point qm = boundary_point(body, sp.exp_map(x, sp.scaled(v, -h)));
    const TangentVector np = sp.parallel_transport(qp, x, level_normal(body, qp));
    const TangentVector nm = sp.parallel_transport(qm, x, level_normal(body, qm));
    const Vec dw = sp.log_map(x, qp).vec - sp.log_map(x, qm).vec;
    const Vec dn = np.vec - nm.vec;
    return -mink_inner(dn, dw) / mink_inner(dw, dw);
  };

  const double h = default_step(sp, opt);
  const double coarse = estimate(h);
  const double fine = estimate(0.5 * h);
  IIValue out;
  out.value = (4.0 * fine - coarse) / 3.0;
  out.step = h;
  out.corner = std::abs(coarse - fine) > opt.corner_tol * (1.0 + std::abs(out.value));
  return out;
}

double second_fundamental_form(const ConvexBody& body, const Point& x, const TangentVector& v,
                               const IIOptions& opt) {
  return second_fundamental_form_detail(body, x, v, opt).value;
}

std::vector<TangentVector> boundary_frame(const ConvexBody& body, const Point& x,
                                          const IIOptions& opt) {
  return body.space().complement_frame(inward_normal(body, x, opt));
}

namespace {

SymOperator numeric_shape_operator(const ConvexBody& body, const Point& x,
                                   const std::vector<TangentVector>& frame, const IIOptions& opt,
                                   bool* corner) {
  const int k = static_cast<int>(frame.size());
  Mat s(k, k);
  auto ii = [&](const TangentVector& v) {
    const IIValue r = second_fundamental_form_detail(body, x, v, opt);
    if (corner && r.corner) *corner = true;
    return r.value;
  };
  for (int i = 0; i < k; ++i) s(i, i) = ii(frame[i]);
  const double r2 = 1.0 / std::sqrt(2.0);
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j) {
      TangentVector up{x, r2 * (frame[i].vec + frame[j].vec)};
      TangentVector um{x, r2 * (frame[i].vec - frame[j].vec)};
      s(i, j) = s(j, i) = 0.5 * (ii(up) - ii(um));
    }
  return SymOperator::symmetrized(s);
}

}  // namespace

SymOperator shape_operator(const ConvexBody& body, const Point& x,
                           const std::vector<TangentVector>& frame, const IIOptions& opt) {
  return numeric_shape_operator(body, x, frame, opt, nullptr);
}

std::optional<SymOperator> closed_form_shape_operator(const ConvexBody& body, const Point& x,
                                                      const std::vector<TangentVector>& frame) {
  const auto& sp = body.space();
  const double a = sp.a();
  const int k = static_cast<int>(frame.size());
  if (const auto* t = body.as<GeodesicTube>()) {
    if (!(t->radius > 0.0)) return std::nullopt;
    // The Killing field of translation along the geodesic is the "along" direction.
    const double a2 = a * a;
    const Vec along_amb = -a2 * mink_inner(x.coords, t->point.coords) * t->direction.vec +
                          a2 * mink_inner(x.coords, t->direction.vec) * t->point.coords;
    Vec c(k);
    for (int i = 0; i < k; ++i) c[i] = mink_inner(along_amb, frame[i].vec);
    if (!(c.norm() > 0.0)) return std::nullopt;
    c.normalize();
    const double along = a * std::tanh(a * t->radius), around = a * coth(a * t->radius);
    return SymOperator::symmetrized(around * Mat::Identity(k, k) + (along - around) * c * c.transpose());
  }
  const auto ii = closed_form_ii(body);
  if (!ii || ii->first != ii->second) return std::nullopt;
  return SymOperator::identity(k, ii->first);
}

IIEstimate ii_estimate(const ConvexBody& body, const Point& x, const IIOptions& opt) {
  const auto frame = boundary_frame(body, x, opt);
  IIEstimate e;
  e.point = x;
  e.step = default_step(body.space(), opt);
  if (frame.size() == 1) {
    const IIValue v = second_fundamental_form_detail(body, x, frame.front(), opt);
    e.lower = e.upper = v.value;
    e.corner = v.corner;
    return e;
  }
  bool corner = false;
  const SymOperator s = numeric_shape_operator(body, x, frame, opt, &corner);
  std::tie(e.lower, e.upper) = eigen_extremes(s);
  e.corner = corner;
  return e;
}

IIBounds ii_bounds(const ConvexBody& body, const BoundarySample& sample, int directions_per_point,
                   const IIOptions& opt) {
  IIBounds out;
  if (const auto cf = closed_form_ii(body)) {
    out.lower = cf->first;
    out.upper = cf->second;
    out.closed_form = true;
    return out;
  }
  const auto& sp = body.space();
  out.lower = INFINITY;
  out.upper = -INFINITY;
  std::mt19937_64 rng(0);
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<double> curv;
  for (const auto& x : sample.points) {
    double lo = INFINITY, hi = -INFINITY;
    bool corner = false;
    if (sp.dim() == 2 || directions_per_point <= 0) {
      const IIEstimate e = ii_estimate(body, x, opt);
      lo = e.lower;
      hi = e.upper;
      corner = e.corner;
      curv.push_back(std::max(std::abs(lo), std::abs(hi)));
    } else {
      const auto frame = boundary_frame(body, x, opt);
      for (int d = 0; d < directions_per_point; ++d) {
        TangentVector v = sp.zero_tangent(x);
        for (const auto& f : frame) v.vec += g(rng) * f.vec;
        const IIValue r = second_fundamental_form_detail(body, x, sp.unit(v), opt);
        corner = corner || r.corner;
        lo = std::min(lo, r.value);
        hi = std::max(hi, r.value);
      }
    }
    if (corner) {
      ++out.corners;
      continue;
    }
    ++out.samples;
    out.lower = std::min(out.lower, lo);
    out.upper = std::max(out.upper, hi);
  }
  if (out.samples == 0) throw Error("ii_bounds: every sampled point was a corner");

  // Along a sampled curve, a normal that turns much faster than the measured curvature
  // allows marks a corner between consecutive samples.
  if (sp.dim() == 2 && curv.size() == sample.points.size()) {
    for (std::size_t i = 0; i + 1 < sample.points.size(); ++i) {
      const Point& p = sample.points[i];
      const Point& q = sample.points[i + 1];
      const double d = sp.distance(p, q);
      if (!(d > 0.0)) continue;
      const TangentVector np = level_normal(body, p);
      const TangentVector nq = sp.parallel_transport(q, p, level_normal(body, q));
      const double turn = sp.norm(TangentVector{p, nq.vec - np.vec});
      if (turn - 1.5 * std::max(curv[i], curv[i + 1]) * d > 1e-3) ++out.corners;
    }
  }
  return out;
}

IIBounds ii_bounds(const ConvexBody& body, int samples, const IIOptions& opt) {
  if (const auto cf = closed_form_ii(body)) return IIBounds{cf->first, cf->second, true, 0, 0};
  const auto& sp = body.space();
  if (sp.dim() == 2) return ii_bounds(body, boundary_sample(body, samples), 0, opt);
  std::mt19937_64 rng(0);
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<Vec> dirs;
  for (int k = 0; k < samples; ++k) {
    Vec d(sp.dim());
    for (int i = 0; i < sp.dim(); ++i) d[i] = g(rng);
    dirs.push_back(d.normalized());
  }
  return ii_bounds(body, boundary_sample_directions(body, dirs), 0, opt);
}

const char* verdict_name(VerdictKind kind) {
  switch (kind) {
    case VerdictKind::necessary: return "necessary";
    case VerdictKind::sufficient: return "sufficient";
    case VerdictKind::iff_constant_curvature: return "iff_constant_curvature";
  }
  return "unknown";
}

CriterionVerdict make_verdict(VerdictKind kind, const IIBounds& ii, double eps,
                              const PinchBounds& bounds, double tolerance) {
  if (!(eps > 0.0)) throw Error("criterion: eps must be positive");
  const double a = bounds.a, b = bounds.b;
  CriterionVerdict v;
  v.kind = kind;
  v.eps = eps;
  v.tolerance = tolerance;
  switch (kind) {
    case VerdictKind::necessary:
      v.bound_low = a * std::tanh(a * eps);
      v.bound_high = b * coth(b * eps);
      break;
    case VerdictKind::sufficient:
      v.bound_low = b * std::tanh(b * eps);
      v.bound_high = a * coth(a * eps);
      break;
    case VerdictKind::iff_constant_curvature:
      v.bound_low = a * std::tanh(a * eps);
      v.bound_high = a * coth(a * eps);
      break;
  }
  v.ii_low = ii.lower;
  v.ii_high = ii.upper;
  v.margin = std::min(ii.lower - v.bound_low, v.bound_high - ii.upper);
  v.passed = v.margin >= -tolerance;
  v.inconclusive = std::abs(v.margin) < tolerance;
  v.strictly_convex = ii.lower > tolerance;
  v.corners = ii.corners;

  std::ostringstream note;
  switch (kind) {
    case VerdictKind::necessary:
      note << (v.passed ? "consistent with eps-strict convexity (necessary condition only)"
                        : "not eps-strictly convex");
      break;
    case VerdictKind::sufficient:
      note << (v.passed ? "eps-strictly convex" : "sufficient condition not met");
      break;
    case VerdictKind::iff_constant_curvature:
      note << (v.passed ? "eps-strictly convex" : "not eps-strictly convex");
      break;
  }
  if (v.inconclusive) note << "; within tolerance of a bound";
  if (!v.strictly_convex) note << "; not strictly convex";
  if (v.corners > 0) note << "; " << v.corners << " corner samples excluded, smooth parts only";
  if (!ii.closed_form) note << "; sample-based";
  v.note = note.str();
  return v;
}

CriterionVerdict check_necessary(const ConvexBody& body, double eps, const PinchBounds& bounds,
                                 const CheckOptions& opt) {
  return make_verdict(VerdictKind::necessary, ii_bounds(body, opt.samples, opt.ii), eps, bounds,
                      opt.tolerance);
}

CriterionVerdict check_sufficient(const ConvexBody& body, double eps, const PinchBounds& bounds,
                                  const CheckOptions& opt) {
  return make_verdict(VerdictKind::sufficient, ii_bounds(body, opt.samples, opt.ii), eps, bounds,
                      opt.tolerance);
}

CriterionVerdict check_iff_constant_curvature(const ConvexBody& body, double eps, double a,
                                              const CheckOptions& opt) {
  if (std::abs(a - body.space().a()) > 1e-12 * std::max(1.0, a))
    throw Error("check_iff_constant_curvature: a must equal the curvature scale of the space");
  return make_verdict(VerdictKind::iff_constant_curvature, ii_bounds(body, opt.samples, opt.ii),
                      eps, PinchBounds::make(a, a), opt.tolerance);
}

Point normal_flow(const ConvexBody& body, const Point& x, double t, const IIOptions& opt) {
  const auto& sp = body.space();
  return sp.exp_map(x, sp.scaled(inward_normal(body, x, opt), t));
}

CurvatureProfile flow_curvature_profile(const ConvexBody& body, const Point& x, double eps,
                                        int steps, const IIOptions& opt,
                                        const RiccatiOptions& riccati) {
  if (!(eps > 0.0)) throw Error("flow_curvature_profile: eps must be positive");
  if (steps < 1) throw Error("flow_curvature_profile: steps must be positive");
  const auto frame = boundary_frame(body, x, opt);
  CurvatureProfile prof;
  prof.initial = shape_operator(body, x, frame, opt);

  RiccatiOptions ro = riccati;
  ro.output_times.clear();
  for (int k = 0; k < steps; ++k) ro.output_times.push_back(eps * k / steps);
  const auto traj = integrate_riccati(prof.initial,
                                      constant_curvature(prof.initial.rank(), body.space().a()),
                                      eps, ro);
  for (std::size_t i = 0; i < traj.output_index.size(); ++i) {
    const auto [lo, hi] = eigen_extremes(traj.states[traj.output_index[i]]);
    prof.times.push_back(ro.output_times[i]);
    prof.lambda_minus.push_back(lo);
    prof.lambda_plus.push_back(hi);
  }
  prof.blow_up = traj.blow_up_detected;
  prof.focal_time = traj.blow_up_time;
  prof.last_step = traj.last_step;
  return prof;
}

std::optional<double> focal_time(const ConvexBody& body, const Point& x, double t_max, int steps,
                                 const IIOptions& opt) {
  if (!(t_max > 0.0) || steps < 1) throw Error("focal_time: need t_max > 0 and steps >= 1");
  const auto frame = boundary_frame(body, x, opt);
  const auto exact = closed_form_shape_operator(body, x, frame);
  const SymOperator a0 = exact ? *exact : shape_operator(body, x, frame, opt);
  const int r = a0.rank();
  const double c2 = body.space().a() * body.space().a();
  const double tol = 1e-12;
  const double max_step = t_max / steps;
  const double blow_up = 1e6;
  auto ident = [](double t) { return t; };

  // While A is finite: [A; J] with A' = A^2 - c^2 Id, J' = -A J.
  auto first_order = [&](double, const Mat& y) -> Mat {
    const Mat a = y.topRows(r), j = y.bottomRows(r);
    Mat d(2 * r, r);
    d.topRows(r) = a * a - c2 * Mat::Identity(r, r);
    d.bottomRows(r) = -a * j;
    return d;
  };
  // Through the focal point: [J; J'] with J'' = c^2 J.
  auto second_order = [&](double, const Mat& y) -> Mat {
    Mat d(2 * r, r);
    d.topRows(r) = y.bottomRows(r);
    d.bottomRows(r) = c2 * y.topRows(r);
    return d;
  };
  auto sigma = [&](const Mat& j) {
    Eigen::JacobiSVD<Mat> svd(j);
    return svd.singularValues().minCoeff();
  };
  auto jacobi_state = [&](const Mat& y) {
    Mat z(2 * r, r);
    z.topRows(r) = y.bottomRows(r);
    z.bottomRows(r) = -y.topRows(r) * y.bottomRows(r);
    return z;
  };

  struct Node {
    double t;
    Mat jac;  // [J; J']
    double s;
  };
  Mat y(2 * r, r);
  y.topRows(r) = a0.matrix();
  y.bottomRows(r) = Mat::Identity(r, r);
  std::vector<Node> nodes{{0.0, jacobi_state(y), 1.0}};

  auto sigma_at = [&](std::size_t base, double t) {
    const Node& nd = nodes[base];
    if (t == nd.t) return nd.s;
    const auto st = detail::dopri_step(second_order, ident, nd.t, nd.jac,
                                       second_order(nd.t, nd.jac), t - nd.t, tol, tol);
    return sigma(st.y.topRows(r));
  };

  bool riccati_phase = true;
  double t = 0.0, h = std::min(max_step, 0.01 * t_max);
  Mat k1 = first_order(0.0, y);
  while (t < t_max) {
    const double hs = std::min(h, t_max - t);
    const auto st = riccati_phase
                        ? detail::dopri_step(first_order, ident, t, y, k1, hs, tol, tol)
                        : detail::dopri_step(second_order, ident, t, y, k1, hs, tol, tol);
    if (!(st.error <= 1.0)) {
      h = detail::dopri_next_step(hs, std::isfinite(st.error) ? st.error : 1e10);
      if (h < 1e-15 * std::max(1.0, t)) throw Error("focal_time: step size underflow");
      continue;
    }
    t += hs;
    y = st.y;
    k1 = st.k_end;
    h = std::min(max_step, detail::dopri_next_step(hs, st.error));
    if (riccati_phase) {
      y.topRows(r) = 0.5 * (y.topRows(r) + y.topRows(r).transpose()).eval();
      nodes.push_back({t, jacobi_state(y), sigma(y.bottomRows(r))});
      if (eigen_extremes(SymOperator::symmetrized(y.topRows(r))).second >= blow_up) {
        riccati_phase = false;
        y = nodes.back().jac;
        k1 = second_order(t, y);
      }
    } else {
      nodes.push_back({t, y, sigma(y.topRows(r))});
    }

    const std::size_t k = nodes.size() - 1;
    if (k >= 2 && nodes[k - 1].s <= nodes[k - 2].s && nodes[k].s > nodes[k - 1].s) {
      // Golden-section search for the minimum on [t_{k-2}, t_k].
      const std::size_t base = k - 2;
      double lo = nodes[base].t, hi = nodes[k].t;
      const double g = 0.5 * (std::sqrt(5.0) - 1.0);
      double m1 = hi - g * (hi - lo), m2 = lo + g * (hi - lo);
      double s1 = sigma_at(base, m1), s2 = sigma_at(base, m2);
      for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, hi); ++it) {
        if (s1 <= s2) {
          hi = m2;
          m2 = m1;
          s2 = s1;
          m1 = hi - g * (hi - lo);
          s1 = sigma_at(base, m1);
        } else {
          lo = m1;
          m1 = m2;
          s1 = s2;
          m2 = lo + g * (hi - lo);
          s2 = sigma_at(base, m2);
        }
      }
      if (std::min(s1, s2) < 1e-8) return s1 <= s2 ? m1 : m2;
    }
  }
  return std::nullopt;
}

double flowed_second_fundamental_form(const ConvexBody& body, const Point& x,
                                      const TangentVector& v, double t, const IIOptions& opt) {
  const auto& sp = body.space();
  const TangentVector n0 = inward_normal(body, x, opt);
  if (std::abs(sp.inner(v, n0)) > 1e-9)
    throw Error("flowed_second_fundamental_form: v must be tangent to the boundary");
  const Point p0 = sp.exp_map(x, sp.scaled(n0, t));

  auto estimate = [&](double h) {
    const Point qp = boundary_point(body, sp.exp_map(x, sp.scaled(v, h)));
    const Point qm = boundary_point(body, sp.exp_map(x, sp.scaled(v, -h)));
    const TangentVector np = level_normal(body, qp), nm = level_normal(body, qm);
    const Point pp = sp.exp_map(qp, sp.scaled(np, t)), pm = sp.exp_map(qm, sp.scaled(nm, t));
    const TangentVector vp = sp.parallel_transport(pp, p0, sp.geodesic_velocity(qp, np, t));
    const TangentVector vm = sp.parallel_transport(pm, p0, sp.geodesic_velocity(qm, nm, t));
    const Vec dw = sp.log_map(p0, pp).vec - sp.log_map(p0, pm).vec;
    const Vec dn = vp.vec - vm.vec;
    return -mink_inner(dn, dw) / mink_inner(dw, dw);
  };
  const double h = default_step(sp, opt);
  return (4.0 * estimate(0.5 * h) - estimate(h)) / 3.0;
}

RoundTripReport erode_dilate_check(const ConvexBody& body, double eps, int n_probe,
                                   std::uint64_t seed, const CheckOptions& opt) {
  if (!(eps > 0.0)) throw Error("erode_dilate_check: eps must be positive");
  if (n_probe < 3) throw Error("erode_dilate_check: need at least 3 probes");
  const auto& sp = body.space();
  const ConvexBody core = erode(body, eps);
  const ConvexBody rebuilt = dilate(core, eps);

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  auto sample = [&](const ConvexBody& b, int n) {
    if (sp.dim() == 2) {
      // Rays that never leave an unbounded body are replaced by half-offset rays.
      BoundarySample s = boundary_sample(b, n);
      if (static_cast<int>(s.points.size()) < n) {
        std::vector<Vec> dirs;
        for (int k = 0; k < n; ++k) {
          const double th = 2.0 * std::numbers::pi * (k + 0.5) / n;
          Vec c(2);
          c << std::cos(th), std::sin(th);
          dirs.push_back(c);
        }
        const BoundarySample extra = boundary_sample_directions(b, dirs);
        for (std::size_t i = 0; i < extra.points.size() && static_cast<int>(s.points.size()) < n; ++i)
          s.points.push_back(extra.points[i]);
      }
      return s;
    }
    std::vector<Vec> dirs;
    for (int k = 0; k < n; ++k) {
      Vec d(sp.dim());
      for (int i = 0; i < sp.dim(); ++i) d[i] = g(rng);
      dirs.push_back(d.normalized());
    }
    return boundary_sample_directions(b, dirs);
  };

  RoundTripReport rep;
  rep.eps = eps;
  const BoundarySample outer = sample(body, n_probe);
  const BoundarySample inner = sample(rebuilt, n_probe);
  rep.spacing = outer.spacing;
  rep.probes = static_cast<int>(outer.points.size() + inner.points.size());
  for (const auto& x : outer.points)
    rep.defect = std::max(rep.defect, std::abs(signed_distance(rebuilt, x)));
  for (const auto& y : inner.points)
    rep.defect = std::max(rep.defect, std::abs(signed_distance(body, y)));
  rep.set_equal = rep.defect <= 2.0 * rep.spacing;

  // Convexity probe of the core: geodesic points between sampled core points.
  std::vector<Point> pts = sample(core, 64).points;
  pts.push_back(interior_point(core));
  std::uniform_int_distribution<std::size_t> pick(0, pts.size() - 1);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  rep.core_violation = -INFINITY;
  for (int k = 0; k < 256; ++k) {
    const Point& p = pts[pick(rng)];
    const Point& q = pts[pick(rng)];
    const Point z = sp.exp_map(p, sp.scaled(sp.log_map(p, q), unif(rng)));
    rep.core_violation = std::max(rep.core_violation, signed_distance(core, z));
  }
  rep.core_convex = rep.core_violation <= 1e-8;
  rep.iff = check_iff_constant_curvature(body, eps, sp.a(), opt);
  rep.passed = rep.set_equal && rep.core_convex;
  return rep;
}

}  // namespace epsconvex
