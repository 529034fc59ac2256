#pragma once

#include "epsconvex/geometry.hpp"

#include <memory>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

namespace epsconvex {

class ConvexBody;

/// Closed ball; radius 0 is a point.
struct Ball {
  Point center;
  double radius = 0.0;
};

/// {x : -a^2 <x, u>_M <= level} for a future null vector u (a Busemann sublevel set).
struct Horoball {
  Vec ideal_direction;  // null vector, first coordinate 1
  double level = 1.0;
};

/// Points within `radius` of the geodesic through `point` with unit direction `direction`.
struct GeodesicTube {
  Point point;
  TangentVector direction;
  double radius = 0.0;
};

/// Points within `radius` of the totally geodesic hyperplane through `point` orthogonal to `normal`.
struct HyperplaneTube {
  Point point;
  TangentVector normal;
  double radius = 0.0;
};

/// {x : signed distance to H >= offset}, H the hyperplane through `point` orthogonal to
/// `normal`, signed positively on the side `normal` points to. offset = 0 is a half-space;
/// offset > 0 (an eroded half-space) is bounded by a concave equidistant.
struct HalfSpace {
  Point point;
  TangentVector normal;
  double offset = 0.0;
};

struct Intersection {
  std::vector<ConvexBody> parts;
};

/// {x : d(x, base) <= amount}, kept implicit for bodies without a closed form.
struct Dilation {
  std::shared_ptr<const ConvexBody> base;
  double amount = 0.0;
};

using Shape = std::variant<Ball, Horoball, GeodesicTube, HyperplaneTube, HalfSpace, Intersection,
                           Dilation>;

/// A closed convex set described by its shape, with exact distance oracles.
class ConvexBody {
 public:
  ConvexBody(const HyperbolicSpace& space, Shape shape);

  static ConvexBody ball(const HyperbolicSpace& space, const Point& center, double radius);
  /// Horoball centred at the ideal point in spatial direction `direction`; `level` as in Horoball.
  static ConvexBody horoball(const HyperbolicSpace& space, const Vec& direction, double level);
  static ConvexBody geodesic_tube(const HyperbolicSpace& space, const TangentVector& direction,
                                  double radius);
  static ConvexBody hyperplane_tube(const HyperbolicSpace& space, const TangentVector& normal,
                                    double radius);
  static ConvexBody half_space(const HyperbolicSpace& space, const TangentVector& normal,
                               double offset = 0.0);
  static ConvexBody intersection(std::vector<ConvexBody> parts);

  const HyperbolicSpace& space() const { return space_; }
  const Shape& shape() const { return shape_; }
  template <class T>
  const T* as() const { return std::get_if<T>(&shape_); }
  /// Ball, Horoball, tubes and HalfSpace.
  bool is_primitive() const;
  const char* kind() const;

 private:
  HyperbolicSpace space_;
  Shape shape_;
};

/// d(x, C); exactly 0 on C.
double distance_to_body(const ConvexBody& body, const Point& x);
/// d(x, boundary) for x in C; throws if x is outside.
double inner_distance(const ConvexBody& body, const Point& x);
/// distance outside, minus inner distance inside.
double signed_distance(const ConvexBody& body, const Point& x);
bool contains(const ConvexBody& body, const Point& x, double tol = 0.0);

/// Riemannian gradient of the signed distance (outward unit normal on level sets).
/// Closed form for primitives, central differences otherwise.
TangentVector signed_distance_gradient(const ConvexBody& body, const Point& x, double h = 1e-6);

/// Point of the boundary reached by following the gradient line of the signed distance.
Point project_to_boundary(const ConvexBody& body, const Point& x);

/// Inner parallel body {x in C : inner distance >= s}.
ConvexBody erode(const ConvexBody& body, double s);
/// Outer parallel body {x : d(x, C) <= s}.
ConvexBody dilate(const ConvexBody& body, double s);

/// A point of C, as deep as the description makes cheap.
Point interior_point(const ConvexBody& body);
/// Largest s with erode(body, s) nonempty; infinite for unbounded-depth bodies.
double inradius(const ConvexBody& body);

/// Boundary point on the geodesic ray exp_anchor(t u); empty if the ray stays in C up to max_t.
std::optional<Point> ray_exit(const ConvexBody& body, const Point& anchor,
                              const TangentVector& unit_dir, double max_t);

struct BoundarySample {
  std::vector<Point> points;
  double spacing = 0.0;  // max geodesic gap between consecutive points
  Point anchor;
};

/// n boundary points on rays from an interior anchor at angles 2 pi k / n (m = 2 only).
/// Directions whose ray never leaves C are skipped.
BoundarySample boundary_sample(const ConvexBody& body, int n);

/// Boundary points on rays from the interior anchor in the given unit directions (any m).
BoundarySample boundary_sample_directions(const ConvexBody& body,
                                          const std::vector<Vec>& unit_frame_coords);

/// Exact (inf, sup) of the second fundamental form on unit tangent vectors, for primitives
/// in constant curvature -a^2.
std::optional<std::pair<double, double>> closed_form_ii(const ConvexBody& body);

}  // namespace epsconvex
