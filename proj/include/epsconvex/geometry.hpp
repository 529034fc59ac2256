#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>
#include <vector>

namespace epsconvex {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Raised for violated preconditions and unrecoverable numerical failures.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Dimension and curvature scale of the model space (sectional curvature -a^2).
struct SpaceParams {
  int m = 2;
  double a = 1.0;
};

/// A point of the upper sheet <x,x>_M = -1/a^2, in Minkowski coordinates.
struct Point {
  Vec coords;
};

/// A tangent vector anchored at `base`; <base, vec>_M = 0.
struct TangentVector {
  Point base;
  Vec vec;
};

/// -u0 v0 + sum_{i>=1} ui vi.
double mink_inner(const Vec& u, const Vec& v);

/// Hyperboloid model of real hyperbolic m-space with curvature -a^2.
///
/// Every returned point is renormalized onto the hyperboloid and every
/// returned tangent vector is re-projected onto the tangent space of its base.
class HyperbolicSpace {
 public:
  explicit HyperbolicSpace(SpaceParams params);
  HyperbolicSpace(int m, double a) : HyperbolicSpace(SpaceParams{m, a}) {}

  const SpaceParams& params() const { return params_; }
  int dim() const { return params_.m; }
  double a() const { return params_.a; }

  /// (1/a, 0, ..., 0).
  Point origin() const;
  /// Lifts spatial coordinates (x1..xm) onto the upper sheet.
  Point point_from_spatial(const Vec& spatial) const;
  Point normalize(const Vec& coords) const;
  /// Projects an ambient vector onto T_x.
  TangentVector tangent(const Point& x, const Vec& ambient) const;
  TangentVector zero_tangent(const Point& x) const;

  double inner(const TangentVector& u, const TangentVector& v) const;
  double norm(const TangentVector& v) const;
  TangentVector scaled(const TangentVector& v, double s) const;
  TangentVector unit(const TangentVector& v) const;

  Point exp_map(const Point& x, const TangentVector& v) const;
  TangentVector log_map(const Point& x, const Point& y) const;
  double distance(const Point& x, const Point& y) const;
  /// Transport of v (based at x) along the geodesic from x to y.
  TangentVector parallel_transport(const Point& x, const Point& y,
                                   const TangentVector& v) const;
  /// Velocity at time t of the unit-speed geodesic t -> exp_x(t u), transported frame-free.
  TangentVector geodesic_velocity(const Point& x, const TangentVector& unit_dir, double t) const;

  /// Orthonormal basis of T_x: the spatial axes at the origin, parallel transported to x.
  std::vector<TangentVector> tangent_frame(const Point& x) const;
  /// Orthonormal basis of the orthogonal complement of `normal` in T_x.
  std::vector<TangentVector> complement_frame(const TangentVector& normal) const;

  void check_point(const Point& x, double tol = 1e-9) const;
  void check_tangent(const TangentVector& v, double tol = 1e-9) const;

 private:
  SpaceParams params_;
};

}  // namespace epsconvex
