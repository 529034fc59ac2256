#include "epsconvex/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace epsconvex {

namespace {

// sinh(z)/z, accurate near 0.
double sinhc(double z) {
  if (std::abs(z) < 1e-4) return 1.0 + z * z / 6.0;
  return std::sinh(z) / z;
}

}  // namespace

double mink_inner(const Vec& u, const Vec& v) {
  if (u.size() != v.size() || u.size() < 1) {
    std::ostringstream msg;
    msg << "mink_inner: dimension mismatch (" << u.size() << " vs " << v.size() << ")";
    throw Error(msg.str());
  }
  return -u[0] * v[0] + u.tail(u.size() - 1).dot(v.tail(v.size() - 1));
}

HyperbolicSpace::HyperbolicSpace(SpaceParams params) : params_(params) {
  if (params_.m < 2) throw Error("HyperbolicSpace: dimension m must be >= 2");
  if (!(params_.a > 0.0) || !std::isfinite(params_.a))
    throw Error("HyperbolicSpace: curvature scale a must be positive");
}

Point HyperbolicSpace::origin() const {
  Vec c = Vec::Zero(params_.m + 1);
  c[0] = 1.0 / params_.a;
  return Point{c};
}

Point HyperbolicSpace::point_from_spatial(const Vec& spatial) const {
  if (spatial.size() != params_.m) throw Error("point_from_spatial: expected m coordinates");
  Vec c(params_.m + 1);
  c[0] = std::sqrt(1.0 / (params_.a * params_.a) + spatial.squaredNorm());
  c.tail(params_.m) = spatial;
  return Point{c};
}

Point HyperbolicSpace::normalize(const Vec& coords) const {
  if (coords.size() != params_.m + 1) throw Error("normalize: expected m+1 coordinates");
  if (!coords.allFinite()) throw Error("normalize: non-finite coordinates");
  return point_from_spatial(coords.tail(params_.m));
}

TangentVector HyperbolicSpace::tangent(const Point& x, const Vec& ambient) const {
  const double a2 = params_.a * params_.a;
  return TangentVector{x, ambient + a2 * mink_inner(x.coords, ambient) * x.coords};
}

TangentVector HyperbolicSpace::zero_tangent(const Point& x) const {
  return TangentVector{x, Vec::Zero(params_.m + 1)};
}

double HyperbolicSpace::inner(const TangentVector& u, const TangentVector& v) const {
  return mink_inner(u.vec, v.vec);
}

double HyperbolicSpace::norm(const TangentVector& v) const {
  return std::sqrt(std::max(0.0, mink_inner(v.vec, v.vec)));
}

TangentVector HyperbolicSpace::scaled(const TangentVector& v, double s) const {
  return TangentVector{v.base, s * v.vec};
}

TangentVector HyperbolicSpace::unit(const TangentVector& v) const {
  const double n = norm(v);
  if (!(n > 0.0)) throw Error("unit: zero tangent vector");
  return scaled(v, 1.0 / n);
}

Point HyperbolicSpace::exp_map(const Point& x, const TangentVector& v) const {
  const double a = params_.a;
  const double n = norm(v);
  const double z = a * n;
  Vec y = std::cosh(z) * x.coords + sinhc(z) * v.vec;
  return normalize(y);
}

namespace {

// cosh(a d) - 1 and d for the pair. Near the diagonal the chord <x-y, x-y>_M avoids the
// arccosh cancellation; far away it squares large coordinates, so use <x, y>_M instead.
struct Separation {
  double cosh_m1 = 0.0;
  double dist = 0.0;
};

Separation separation(const Vec& x, const Vec& y, double a) {
  const Vec diff = x - y;
  const double chord2 = std::max(0.0, mink_inner(diff, diff));
  Separation s;
  if (a * a * chord2 < 2.0) {
    s.cosh_m1 = 0.5 * a * a * chord2;
    s.dist = (2.0 / a) * std::asinh(0.5 * a * std::sqrt(chord2));
  } else {
    s.cosh_m1 = std::max(0.0, -a * a * mink_inner(x, y) - 1.0);
    s.dist = std::acosh(1.0 + s.cosh_m1) / a;
  }
  return s;
}

}  // namespace

double HyperbolicSpace::distance(const Point& x, const Point& y) const {
  return separation(x.coords, y.coords, params_.a).dist;
}

TangentVector HyperbolicSpace::log_map(const Point& x, const Point& y) const {
  const double a = params_.a;
  const Separation s = separation(x.coords, y.coords, a);
  if (s.dist == 0.0) return zero_tangent(x);
  // y - cosh(ad) x = sinh(ad)/a * unit direction.
  Vec u = (y.coords - x.coords) - s.cosh_m1 * x.coords;
  u = u / sinhc(a * s.dist);
  return tangent(x, u);
}

TangentVector HyperbolicSpace::parallel_transport(const Point& x, const Point& y,
                                                  const TangentVector& v) const {
  const double a2 = params_.a * params_.a;
  const double c = -a2 * mink_inner(x.coords, y.coords);
  Vec w = v.vec + (a2 * mink_inner(y.coords, v.vec) / (1.0 + c)) * (x.coords + y.coords);
  return tangent(y, w);
}

TangentVector HyperbolicSpace::geodesic_velocity(const Point& x, const TangentVector& unit_dir,
                                                 double t) const {
  const double a = params_.a;
  const Point y = exp_map(x, scaled(unit_dir, t));
  Vec w = a * std::sinh(a * t) * x.coords + std::cosh(a * t) * unit_dir.vec;
  return tangent(y, w);
}

std::vector<TangentVector> HyperbolicSpace::tangent_frame(const Point& x) const {
  // Spatial axes at the origin, transported along the geodesic to x.
  const double a = params_.a;
  const Vec sum = origin().coords + x.coords;
  const double denom = 1.0 + a * x.coords[0];
  std::vector<TangentVector> frame;
  frame.reserve(params_.m);
  for (int i = 0; i < params_.m; ++i) {
    Vec e = (a * a * x.coords[i + 1] / denom) * sum;
    e[i + 1] += 1.0;
    frame.push_back(TangentVector{x, e});
  }
  return frame;
}

std::vector<TangentVector> HyperbolicSpace::complement_frame(const TangentVector& normal) const {
  const TangentVector n = unit(normal);
  std::vector<TangentVector> frame;
  frame.reserve(params_.m - 1);
  for (const auto& e : tangent_frame(n.base)) {
    if (static_cast<int>(frame.size()) == params_.m - 1) break;
    TangentVector v = e;
    v.vec -= inner(v, n) * n.vec;
    for (const auto& f : frame) v.vec -= inner(v, f) * f.vec;
    if (norm(v) < 1e-3) continue;
    v = unit(v);
    // second pass against cancellation
    v.vec -= inner(v, n) * n.vec;
    for (const auto& f : frame) v.vec -= inner(v, f) * f.vec;
    frame.push_back(unit(v));
  }
  if (static_cast<int>(frame.size()) != params_.m - 1)
    throw Error("complement_frame: failed to build an orthonormal frame");
  return frame;
}

void HyperbolicSpace::check_point(const Point& x, double tol) const {
  if (x.coords.size() != params_.m + 1) throw Error("point has wrong dimension");
  const double a2 = params_.a * params_.a;
  const double scale = std::max(1.0, a2 * x.coords[0] * x.coords[0]);
  if (!(x.coords[0] > 0.0) ||
      std::abs(a2 * mink_inner(x.coords, x.coords) + 1.0) > tol * scale)
    throw Error("point is not on the upper sheet of the hyperboloid");
}

void HyperbolicSpace::check_tangent(const TangentVector& v, double tol) const {
  check_point(v.base, tol);
  if (v.vec.size() != params_.m + 1) throw Error("tangent vector has wrong dimension");
  const double scale = std::max(1.0, v.base.coords.norm() * v.vec.norm());
  if (std::abs(mink_inner(v.base.coords, v.vec)) > tol * scale)
    throw Error("vector is not tangent at its base point");
}

}  // namespace epsconvex
