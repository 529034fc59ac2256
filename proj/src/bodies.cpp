#include "epsconvex/bodies.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace epsconvex {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require_radius(double r, const char* what) {
  if (!(r >= 0.0) || !std::isfinite(r)) {
    std::ostringstream msg;
    msg << what << ": radius must be a finite nonnegative number";
    throw Error(msg.str());
  }
}

// Signed distance to the hyperplane <x, n> = 0, positive where <x, n> > 0.
double hyperplane_signed(const HyperbolicSpace& sp, const TangentVector& n, const Point& x) {
  const double a = sp.a();
  return std::asinh(a * mink_inner(x.coords, n.vec)) / a;
}

TangentVector hyperplane_signed_gradient(const HyperbolicSpace& sp, const TangentVector& n,
                                         const Point& x) {
  const double a = sp.a();
  const double s = mink_inner(x.coords, n.vec);
  TangentVector g = sp.tangent(x, n.vec);
  return sp.scaled(g, 1.0 / std::sqrt(1.0 + a * a * s * s));
}

// Component of x orthogonal to the plane of the geodesic.
Vec geodesic_offaxis(const HyperbolicSpace& sp, const GeodesicTube& t, const Point& x) {
  const double a2 = sp.a() * sp.a();
  return x.coords + a2 * mink_inner(x.coords, t.point.coords) * t.point.coords -
         mink_inner(x.coords, t.direction.vec) * t.direction.vec;
}

double geodesic_distance(const HyperbolicSpace& sp, const GeodesicTube& t, const Point& x) {
  const Vec q = geodesic_offaxis(sp, t, x);
  const double qn = std::sqrt(std::max(0.0, mink_inner(q, q)));
  return std::asinh(sp.a() * qn) / sp.a();
}

double horo_signed(const HyperbolicSpace& sp, const Horoball& h, const Point& x) {
  const double a = sp.a();
  return std::log(-a * a * mink_inner(x.coords, h.ideal_direction) / h.level) / a;
}

TangentVector any_unit(const HyperbolicSpace& sp, const Point& x) {
  return sp.tangent_frame(x).front();
}

double primitive_signed(const ConvexBody& body, const Point& x) {
  const auto& sp = body.space();
  return std::visit(
      overloaded{
          [&](const Ball& b) { return sp.distance(x, b.center) - b.radius; },
          [&](const Horoball& h) { return horo_signed(sp, h, x); },
          [&](const GeodesicTube& t) { return geodesic_distance(sp, t, x) - t.radius; },
          [&](const HyperplaneTube& t) {
            return std::abs(hyperplane_signed(sp, t.normal, x)) - t.radius;
          },
          [&](const HalfSpace& h) { return h.offset - hyperplane_signed(sp, h.normal, x); },
          [&](const auto&) -> double { throw Error("primitive_signed: not a primitive"); }},
      body.shape());
}

TangentVector primitive_gradient(const ConvexBody& body, const Point& x) {
  const auto& sp = body.space();
  const double a = sp.a();
  return std::visit(
      overloaded{
          [&](const Ball& b) {
            const TangentVector l = sp.log_map(x, b.center);
            if (sp.norm(l) == 0.0) return any_unit(sp, x);
            return sp.scaled(sp.unit(l), -1.0);
          },
          [&](const Horoball& h) {
            const double s = mink_inner(x.coords, h.ideal_direction);
            const TangentVector g = sp.tangent(x, h.ideal_direction);
            return sp.scaled(g, 1.0 / (a * s));
          },
          [&](const GeodesicTube& t) {
            const Vec q = geodesic_offaxis(sp, t, x);
            const TangentVector g = sp.tangent(x, q);
            if (sp.norm(g) < 1e-300) return any_unit(sp, x);
            return sp.unit(g);
          },
          [&](const HyperplaneTube& t) {
            const double s = hyperplane_signed(sp, t.normal, x);
            const TangentVector g = hyperplane_signed_gradient(sp, t.normal, x);
            return sp.scaled(g, s >= 0.0 ? 1.0 : -1.0);
          },
          [&](const HalfSpace& h) {
            return sp.scaled(hyperplane_signed_gradient(sp, h.normal, x), -1.0);
          },
          [&](const auto&) -> TangentVector { throw Error("primitive_gradient: not a primitive"); }},
      body.shape());
}

// Nearest point of the body to x (x itself when inside).
Point nearest_point(const ConvexBody& body, const Point& x);

// ---- Intersection distance -------------------------------------------------------------

struct LinearizedQp {
  std::vector<Vec> grads;  // constraint gradients in frame coordinates
  std::vector<double> rhs; // G_i . w <= rhs_i
};

// min 1/2 |w|^2 s.t. G_i . w <= r_i, by active-set enumeration (few constraints, small m).
std::optional<Vec> solve_min_norm_qp(const LinearizedQp& qp, int m) {
  const int k = static_cast<int>(qp.grads.size());
  std::optional<Vec> best;
  double best_norm = kInf;
  const double feas_tol = 1e-12;
  for (unsigned mask = 0; mask < (1u << k); ++mask) {
    std::vector<int> act;
    for (int i = 0; i < k; ++i)
      if (mask & (1u << i)) act.push_back(i);
    if (static_cast<int>(act.size()) > m) continue;
    Vec w = Vec::Zero(m);
    if (!act.empty()) {
      const int s = static_cast<int>(act.size());
      Mat g(s, m);
      Vec r(s);
      for (int i = 0; i < s; ++i) {
        g.row(i) = qp.grads[act[i]].transpose();
        r[i] = qp.rhs[act[i]];
      }
      const Mat gram = g * g.transpose();
      Eigen::FullPivLU<Mat> lu(gram);
      if (lu.rank() < s) continue;
      const Vec mu = -lu.solve(r);
      if ((mu.array() < -1e-12).any()) continue;
      w = -g.transpose() * mu;
    }
    bool feasible = true;
    for (int i = 0; i < k && feasible; ++i)
      feasible = qp.grads[i].dot(w) <= qp.rhs[i] + feas_tol * (1.0 + std::abs(qp.rhs[i]));
    if (!feasible) continue;
    if (w.norm() < best_norm) {
      best_norm = w.norm();
      best = w;
    }
  }
  return best;
}

double intersection_outside_distance(const ConvexBody& body, const Intersection& inter,
                                     const Point& x, Point* nearest) {
  const auto& sp = body.space();
  const int m = sp.dim();

  // The farthest part bounds the distance below; when its nearest point lies in every
  // other part, that bound is attained.
  std::size_t far = 0;
  double far_d = -kInf;
  for (std::size_t i = 0; i < inter.parts.size(); ++i) {
    const double d = distance_to_body(inter.parts[i], x);
    if (d > far_d) {
      far_d = d;
      far = i;
    }
  }
  Point y0 = nearest_point(inter.parts[far], x);
  if (contains(body, y0, 1e-12)) {
    if (nearest) *nearest = y0;
    return far_d;
  }

  // Sequential linearization in exp coordinates at x, where |v| is the distance.
  const auto frame = sp.tangent_frame(x);
  auto to_point = [&](const Vec& v) {
    TangentVector t = sp.zero_tangent(x);
    for (int k = 0; k < m; ++k) t.vec += v[k] * frame[k].vec;
    return sp.exp_map(x, t);
  };
  const TangentVector l0 = sp.log_map(x, y0);
  Vec v(m);
  for (int k = 0; k < m; ++k) v[k] = sp.inner(l0, frame[k]);

  const int k = static_cast<int>(inter.parts.size());
  for (int iter = 0; iter < 200; ++iter) {
    LinearizedQp qp;
    double worst = -kInf;
    for (int i = 0; i < k; ++i) {
      const auto& part = inter.parts[i];
      const double g = signed_distance(part, to_point(v));
      worst = std::max(worst, g);
      const double dv = 1e-7 * std::max(1.0, v.norm());
      Vec grad(m);
      for (int c = 0; c < m; ++c) {
        Vec vp = v, vm = v;
        vp[c] += dv;
        vm[c] -= dv;
        grad[c] = (signed_distance(part, to_point(vp)) - signed_distance(part, to_point(vm))) /
                  (2.0 * dv);
      }
      qp.grads.push_back(grad);
      qp.rhs.push_back(grad.dot(v) - g);
    }
    const auto w = solve_min_norm_qp(qp, m);
    if (!w) break;
    const double change = (*w - v).norm();
    v = *w;
    if (change <= 1e-10 * std::max(1.0, v.norm()) && worst <= 1e-10) break;
  }

  Point y = to_point(v);
  // Land inside: push along the violated parts' normals.
  for (int pass = 0; pass < 50 && !contains(body, y, 1e-13); ++pass)
    for (const auto& part : inter.parts)
      if (signed_distance(part, y) > 0.0) y = nearest_point(part, y);
  if (nearest) *nearest = y;
  return sp.distance(x, y);
}

Point nearest_point(const ConvexBody& body, const Point& x) {
  const auto& sp = body.space();
  if (body.is_primitive()) {
    const double s = primitive_signed(body, x);
    if (s <= 0.0) return x;
    const TangentVector g = primitive_gradient(body, x);
    return sp.exp_map(x, sp.scaled(g, -s));
  }
  if (const auto* inter = body.as<Intersection>()) {
    if (contains(body, x)) return x;
    Point y = x;
    intersection_outside_distance(body, *inter, x, &y);
    return y;
  }
  const auto& dil = *body.as<Dilation>();
  const double d = distance_to_body(*dil.base, x);
  if (d <= dil.amount) return x;
  const Point y = nearest_point(*dil.base, x);
  const TangentVector l = sp.log_map(x, y);
  return sp.exp_map(x, sp.scaled(l, (d - dil.amount) / d));
}

std::vector<ConvexBody> flatten(std::vector<ConvexBody> parts) {
  std::vector<ConvexBody> out;
  for (auto& p : parts) {
    if (const auto* inter = p.as<Intersection>()) {
      for (auto& q : flatten(inter->parts)) out.push_back(std::move(q));
    } else {
      out.push_back(std::move(p));
    }
  }
  return out;
}

}  // namespace

// ---- construction ----------------------------------------------------------------------

ConvexBody::ConvexBody(const HyperbolicSpace& space, Shape shape)
    : space_(space), shape_(std::move(shape)) {
  std::visit(overloaded{
                 [&](const Ball& b) {
                   require_radius(b.radius, "Ball");
                   space_.check_point(b.center);
                 },
                 [&](const Horoball& h) {
                   if (h.ideal_direction.size() != space_.dim() + 1 ||
                       std::abs(mink_inner(h.ideal_direction, h.ideal_direction)) > 1e-9 ||
                       !(h.ideal_direction[0] > 0.0))
                     throw Error("Horoball: ideal direction must be a future null vector");
                   if (!(h.level > 0.0) || !std::isfinite(h.level))
                     throw Error("Horoball: level must be positive");
                 },
                 [&](const GeodesicTube& t) {
                   require_radius(t.radius, "GeodesicTube");
                   space_.check_tangent(t.direction);
                   if (std::abs(space_.norm(t.direction) - 1.0) > 1e-9)
                     throw Error("GeodesicTube: direction must be a unit vector");
                 },
                 [&](const HyperplaneTube& t) {
                   require_radius(t.radius, "HyperplaneTube");
                   space_.check_tangent(t.normal);
                   if (std::abs(space_.norm(t.normal) - 1.0) > 1e-9)
                     throw Error("HyperplaneTube: normal must be a unit vector");
                 },
                 [&](const HalfSpace& h) {
                   space_.check_tangent(h.normal);
                   if (std::abs(space_.norm(h.normal) - 1.0) > 1e-9)
                     throw Error("HalfSpace: normal must be a unit vector");
                   if (!std::isfinite(h.offset)) throw Error("HalfSpace: offset must be finite");
                 },
                 [&](const Intersection& i) {
                   if (i.parts.empty()) throw Error("Intersection: needs at least one part");
                   for (const auto& p : i.parts)
                     if (p.space().dim() != space_.dim() || p.space().a() != space_.a())
                       throw Error("Intersection: parts must share the same space");
                 },
                 [&](const Dilation& d) {
                   if (!d.base) throw Error("Dilation: missing base body");
                   if (!(d.amount >= 0.0)) throw Error("Dilation: amount must be nonnegative");
                 }},
             shape_);
}

ConvexBody ConvexBody::ball(const HyperbolicSpace& space, const Point& center, double radius) {
  return ConvexBody(space, Ball{center, radius});
}

ConvexBody ConvexBody::horoball(const HyperbolicSpace& space, const Vec& direction, double level) {
  if (direction.size() != space.dim() || !(direction.norm() > 0.0))
    throw Error("horoball: direction must be a nonzero m-vector");
  Vec u(space.dim() + 1);
  u[0] = 1.0;
  u.tail(space.dim()) = direction.normalized();
  return ConvexBody(space, Horoball{u, level});
}

ConvexBody ConvexBody::geodesic_tube(const HyperbolicSpace& space, const TangentVector& direction,
                                     double radius) {
  return ConvexBody(space, GeodesicTube{direction.base, space.unit(direction), radius});
}

ConvexBody ConvexBody::hyperplane_tube(const HyperbolicSpace& space, const TangentVector& normal,
                                       double radius) {
  return ConvexBody(space, HyperplaneTube{normal.base, space.unit(normal), radius});
}

ConvexBody ConvexBody::half_space(const HyperbolicSpace& space, const TangentVector& normal,
                                  double offset) {
  return ConvexBody(space, HalfSpace{normal.base, space.unit(normal), offset});
}

ConvexBody ConvexBody::intersection(std::vector<ConvexBody> parts) {
  if (parts.empty()) throw Error("Intersection: needs at least one part");
  const HyperbolicSpace space = parts.front().space();
  auto flat = flatten(std::move(parts));
  if (flat.size() == 1) return flat.front();
  return ConvexBody(space, Intersection{std::move(flat)});
}

bool ConvexBody::is_primitive() const {
  return !std::holds_alternative<Intersection>(shape_) && !std::holds_alternative<Dilation>(shape_);
}

const char* ConvexBody::kind() const {
  return std::visit(overloaded{[](const Ball&) { return "ball"; },
                               [](const Horoball&) { return "horoball"; },
                               [](const GeodesicTube&) { return "geodesic_tube"; },
                               [](const HyperplaneTube&) { return "hyperplane_tube"; },
                               [](const HalfSpace&) { return "half_space"; },
                               [](const Intersection&) { return "intersection"; },
                               [](const Dilation&) { return "dilation"; }},
                    shape_);
}

// ---- oracles ---------------------------------------------------------------------------

double signed_distance(const ConvexBody& body, const Point& x) {
  if (body.is_primitive()) return primitive_signed(body, x);
  if (const auto* inter = body.as<Intersection>()) {
    double worst = -kInf;
    for (const auto& p : inter->parts) worst = std::max(worst, signed_distance(p, x));
    if (worst <= 0.0) return worst;
    return intersection_outside_distance(body, *inter, x, nullptr);
  }
  const auto& dil = *body.as<Dilation>();
  return signed_distance(*dil.base, x) - dil.amount;
}

double distance_to_body(const ConvexBody& body, const Point& x) {
  return std::max(0.0, signed_distance(body, x));
}

bool contains(const ConvexBody& body, const Point& x, double tol) {
  if (const auto* inter = body.as<Intersection>()) {
    for (const auto& p : inter->parts)
      if (!contains(p, x, tol)) return false;
    return true;
  }
  return signed_distance(body, x) <= tol;
}

double inner_distance(const ConvexBody& body, const Point& x) {
  const double s = signed_distance(body, x);
  if (s > 1e-10) {
    std::ostringstream msg;
    msg << "inner_distance: point is outside the body (distance " << s << ")";
    throw Error(msg.str());
  }
  return std::max(0.0, -s);
}

TangentVector signed_distance_gradient(const ConvexBody& body, const Point& x, double h) {
  const auto& sp = body.space();
  if (body.is_primitive()) return primitive_gradient(body, x);
  if (const auto* dil = body.as<Dilation>()) return signed_distance_gradient(*dil->base, x, h);

  const auto& inter = *body.as<Intersection>();
  double worst = -kInf;
  const ConvexBody* active = nullptr;
  for (const auto& p : inter.parts) {
    const double s = signed_distance(p, x);
    if (s > worst) {
      worst = s;
      active = &p;
    }
  }
  if (worst <= 0.0) return signed_distance_gradient(*active, x, h);
  const Point y = nearest_point(body, x);
  const TangentVector l = sp.log_map(x, y);
  if (sp.norm(l) > 1e-9) return sp.scaled(sp.unit(l), -1.0);

  // Too close to resolve the foot point; fall back to central differences.
  TangentVector g = sp.zero_tangent(x);
  for (const auto& e : sp.tangent_frame(x)) {
    const double fp = signed_distance(body, sp.exp_map(x, sp.scaled(e, h)));
    const double fm = signed_distance(body, sp.exp_map(x, sp.scaled(e, -h)));
    g.vec += ((fp - fm) / (2.0 * h)) * e.vec;
  }
  return g;
}

Point project_to_boundary(const ConvexBody& body, const Point& x) {
  const auto& sp = body.space();
  Point y = x;
  for (int iter = 0; iter < 8; ++iter) {
    const double s = signed_distance(body, y);
    if (std::abs(s) < 1e-14) break;
    const TangentVector g = signed_distance_gradient(body, y);
    const double gn = sp.norm(g);
    if (!(gn > 0.0)) throw Error("project_to_boundary: vanishing gradient");
    y = sp.exp_map(y, sp.scaled(g, -s / (gn * gn)));
    if (body.is_primitive()) break;
  }
  return y;
}

// ---- erosion and dilation --------------------------------------------------------------

ConvexBody erode(const ConvexBody& body, double s) {
  if (!(s >= 0.0) || !std::isfinite(s)) throw Error("erode: amount must be nonnegative");
  const auto& sp = body.space();
  const double a = sp.a();
  auto empty = []() -> ConvexBody { throw Error("erode: eroded to empty set"); };
  const double slack = 1e-12;
  return std::visit(
      overloaded{
          [&](const Ball& b) {
            if (s > b.radius + slack) return empty();
            return ConvexBody(sp, Ball{b.center, std::max(0.0, b.radius - s)});
          },
          [&](const Horoball& h) {
            return ConvexBody(sp, Horoball{h.ideal_direction, h.level * std::exp(-a * s)});
          },
          [&](const GeodesicTube& t) {
            if (s > t.radius + slack) return empty();
            return ConvexBody(sp, GeodesicTube{t.point, t.direction, std::max(0.0, t.radius - s)});
          },
          [&](const HyperplaneTube& t) {
            if (s > t.radius + slack) return empty();
            return ConvexBody(sp, HyperplaneTube{t.point, t.normal, std::max(0.0, t.radius - s)});
          },
          [&](const HalfSpace& h) {
            return ConvexBody(sp, HalfSpace{h.point, h.normal, h.offset + s});
          },
          [&](const Intersection& i) {
            std::vector<ConvexBody> parts;
            for (const auto& p : i.parts) parts.push_back(erode(p, s));
            ConvexBody out = ConvexBody::intersection(std::move(parts));
            (void)interior_point(out);  // throws when the parts no longer meet
            return out;
          },
          [&](const Dilation& d) {
            if (s <= d.amount) {
              if (d.amount - s == 0.0) return *d.base;
              return ConvexBody(sp, Dilation{d.base, d.amount - s});
            }
            return erode(*d.base, s - d.amount);
          }},
      body.shape());
}

ConvexBody dilate(const ConvexBody& body, double s) {
  if (!(s >= 0.0) || !std::isfinite(s)) throw Error("dilate: amount must be nonnegative");
  const auto& sp = body.space();
  const double a = sp.a();
  return std::visit(
      overloaded{
          [&](const Ball& b) { return ConvexBody(sp, Ball{b.center, b.radius + s}); },
          [&](const Horoball& h) {
            return ConvexBody(sp, Horoball{h.ideal_direction, h.level * std::exp(a * s)});
          },
          [&](const GeodesicTube& t) {
            return ConvexBody(sp, GeodesicTube{t.point, t.direction, t.radius + s});
          },
          [&](const HyperplaneTube& t) {
            return ConvexBody(sp, HyperplaneTube{t.point, t.normal, t.radius + s});
          },
          [&](const HalfSpace& h) {
            return ConvexBody(sp, HalfSpace{h.point, h.normal, h.offset - s});
          },
          [&](const Intersection&) {
            if (s == 0.0) return body;
            return ConvexBody(sp, Dilation{std::make_shared<const ConvexBody>(body), s});
          },
          [&](const Dilation& d) { return ConvexBody(sp, Dilation{d.base, d.amount + s}); }},
      body.shape());
}

// ---- interior points and sampling --------------------------------------------------------

Point interior_point(const ConvexBody& body) {
  const auto& sp = body.space();
  const double a = sp.a();
  return std::visit(
      overloaded{
          [&](const Ball& b) { return b.center; },
          [&](const Horoball& h) {
            const Point o = sp.origin();
            const TangentVector axis = sp.unit(sp.tangent(o, h.ideal_direction));
            // On the axis, the signed distance is ln(a u0 / level)/a - t (u0 = 1).
            const double depth_t = std::log(a / h.level) / a + 1.0 / a;
            return sp.exp_map(o, sp.scaled(axis, depth_t));
          },
          [&](const GeodesicTube& t) { return t.point; },
          [&](const HyperplaneTube& t) { return t.point; },
          [&](const HalfSpace& h) {
            return sp.exp_map(h.point, sp.scaled(h.normal, h.offset + 1.0 / a));
          },
          [&](const Intersection& inter) {
            // Alternating pushes into each violated part, aiming a little below its boundary.
            const double margin = 1e-3 / a;
            Point best = interior_point(inter.parts.front());
            double best_depth = -kInf;
            for (const auto& seed : inter.parts) {
              Point y = interior_point(seed);
              for (int iter = 0; iter < 500; ++iter) {
                bool moved = false;
                for (const auto& p : inter.parts) {
                  const double s = signed_distance(p, y);
                  if (s > -margin) {
                    const TangentVector g = signed_distance_gradient(p, y);
                    y = sp.exp_map(y, sp.scaled(g, -(s + 2.0 * margin)));
                    moved = true;
                  }
                }
                if (!moved) break;
              }
              double depth = kInf;
              for (const auto& p : inter.parts) depth = std::min(depth, -signed_distance(p, y));
              if (depth > best_depth) {
                best_depth = depth;
                best = y;
              }
            }
            if (!(best_depth > 0.0)) throw Error("interior_point: intersection has empty interior");
            return best;
          },
          [&](const Dilation& d) { return interior_point(*d.base); }},
      body.shape());
}

double inradius(const ConvexBody& body) {
  return std::visit(overloaded{[](const Ball& b) { return b.radius; },
                               [](const Horoball&) { return kInf; },
                               [](const GeodesicTube& t) { return t.radius; },
                               [](const HyperplaneTube& t) { return t.radius; },
                               [](const HalfSpace&) { return kInf; },
                               [](const Intersection& i) {
                                 double r = kInf;
                                 for (const auto& p : i.parts) r = std::min(r, inradius(p));
                                 return r;
                               },
                               [](const Dilation& d) { return inradius(*d.base) + d.amount; }},
                    body.shape());
}

std::optional<Point> ray_exit(const ConvexBody& body, const Point& anchor,
                              const TangentVector& unit_dir, double max_t) {
  const auto& sp = body.space();
  if (!contains(body, anchor)) throw Error("ray_exit: anchor is not in the body");
  auto at = [&](double t) { return sp.exp_map(anchor, sp.scaled(unit_dir, t)); };
  const double scan = 0.1 / sp.a();
  double lo = 0.0, hi = -1.0;
  for (double t = scan; t <= max_t + 1e-12; t += scan) {
    if (!contains(body, at(t))) {
      hi = t;
      break;
    }
    lo = t;
  }
  if (hi < 0.0) return std::nullopt;
  for (int iter = 0; iter < 200 && hi - lo > 1e-15 * std::max(1.0, hi); ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (contains(body, at(mid)) ? lo : hi) = mid;
  }
  return at(lo);
}

namespace {

double max_gap(const HyperbolicSpace& sp, const std::vector<Point>& pts, bool closed) {
  double gap = 0.0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i)
    gap = std::max(gap, sp.distance(pts[i], pts[i + 1]));
  if (closed && pts.size() > 1) gap = std::max(gap, sp.distance(pts.back(), pts.front()));
  return gap;
}

}  // namespace

BoundarySample boundary_sample_directions(const ConvexBody& body,
                                          const std::vector<Vec>& unit_frame_coords) {
  const auto& sp = body.space();
  const Point anchor = interior_point(body);
  const auto frame = sp.tangent_frame(anchor);
  const double max_t = 12.0 / sp.a();
  BoundarySample out{{}, 0.0, anchor};
  for (const auto& c : unit_frame_coords) {
    if (c.size() != sp.dim()) throw Error("boundary_sample: direction has wrong dimension");
    TangentVector u = sp.zero_tangent(anchor);
    for (int k = 0; k < sp.dim(); ++k) u.vec += c[k] * frame[k].vec;
    u = sp.unit(u);
    if (auto p = ray_exit(body, anchor, u, max_t)) out.points.push_back(*p);
  }
  if (out.points.empty()) throw Error("boundary_sample: no ray from the anchor leaves the body");
  out.spacing = max_gap(sp, out.points, out.points.size() == unit_frame_coords.size());
  return out;
}

BoundarySample boundary_sample(const ConvexBody& body, int n) {
  if (body.space().dim() != 2) throw Error("boundary_sample: only m = 2 is supported");
  if (n < 3) throw Error("boundary_sample: need at least 3 samples");
  std::vector<Vec> dirs;
  dirs.reserve(n);
  for (int k = 0; k < n; ++k) {
    const double th = 2.0 * std::numbers::pi * k / n;
    Vec c(2);
    c << std::cos(th), std::sin(th);
    dirs.push_back(c);
  }
  return boundary_sample_directions(body, dirs);
}

std::optional<std::pair<double, double>> closed_form_ii(const ConvexBody& body) {
  const auto& sp = body.space();
  const double a = sp.a();
  using R = std::optional<std::pair<double, double>>;
  return std::visit(
      overloaded{
          [&](const Ball& b) -> R {
            if (!(b.radius > 0.0)) return std::nullopt;
            const double v = a / std::tanh(a * b.radius);
            return std::pair{v, v};
          },
          [&](const Horoball&) -> R { return std::pair{a, a}; },
          [&](const GeodesicTube& t) -> R {
            if (!(t.radius > 0.0)) return std::nullopt;
            const double along = a * std::tanh(a * t.radius);
            if (sp.dim() == 2) return std::pair{along, along};
            return std::pair{along, a / std::tanh(a * t.radius)};
          },
          [&](const HyperplaneTube& t) -> R {
            if (!(t.radius > 0.0)) return std::nullopt;
            const double v = a * std::tanh(a * t.radius);
            return std::pair{v, v};
          },
          [&](const HalfSpace& h) -> R {
            const double v = -a * std::tanh(a * h.offset);
            return std::pair{v, v};
          },
          [&](const auto&) -> R { return std::nullopt; }},
      body.shape());
}

}  // namespace epsconvex
