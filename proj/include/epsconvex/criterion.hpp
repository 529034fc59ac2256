#pragma once

#include "epsconvex/bodies.hpp"
#include "epsconvex/riccati.hpp"

#include <optional>
#include <string>
#include <vector>

namespace epsconvex {

struct IIOptions {
  double step = 0.0;           // finite-difference step; 0 picks 1e-4 * max(1, 1/a)
  double corner_tol = 1e-3;    // relative disagreement of the two steps that marks a corner
  double boundary_tol = 1e-9;  // how far from the boundary x may sit
};

/// Unit normal at a boundary point, pointing into the body.
TangentVector inward_normal(const ConvexBody& body, const Point& x, const IIOptions& opt = {});

struct IIValue {
  double value = 0.0;
  double step = 0.0;
  bool corner = false;
};

/// -<grad_v n, v> by transported central differences of the normal along the boundary,
/// Richardson-extrapolated over steps h and h/2.
IIValue second_fundamental_form_detail(const ConvexBody& body, const Point& x,
                                       const TangentVector& v, const IIOptions& opt = {});
double second_fundamental_form(const ConvexBody& body, const Point& x, const TangentVector& v,
                               const IIOptions& opt = {});

/// Shape operator at x in the frame `frame` (orthonormal, orthogonal to the normal).
/// Numerical, by polarization of second_fundamental_form.
SymOperator shape_operator(const ConvexBody& body, const Point& x,
                           const std::vector<TangentVector>& frame, const IIOptions& opt = {});
/// Exact shape operator for primitives in constant curvature; empty otherwise.
std::optional<SymOperator> closed_form_shape_operator(const ConvexBody& body, const Point& x,
                                                      const std::vector<TangentVector>& frame);
/// Orthonormal frame of T_x S, deterministic.
std::vector<TangentVector> boundary_frame(const ConvexBody& body, const Point& x,
                                          const IIOptions& opt = {});

struct IIEstimate {
  Point point;
  double lower = 0.0;
  double upper = 0.0;
  double step = 0.0;
  bool corner = false;
};

IIEstimate ii_estimate(const ConvexBody& body, const Point& x, const IIOptions& opt = {});

struct IIBounds {
  double lower = 0.0;
  double upper = 0.0;
  bool closed_form = false;
  int samples = 0;   // points that entered the bounds
  int corners = 0;   // points excluded as corners
};

/// (inf lower, sup upper) over the sample, skipping corners. `directions_per_point` is the
/// number of random unit directions probed per point when m >= 3 (0 = full shape operator).
IIBounds ii_bounds(const ConvexBody& body, const BoundarySample& sample, int directions_per_point,
                   const IIOptions& opt = {});
/// Closed form when available, otherwise a sample of `samples` boundary points.
IIBounds ii_bounds(const ConvexBody& body, int samples = 512, const IIOptions& opt = {});

enum class VerdictKind { necessary, sufficient, iff_constant_curvature };
const char* verdict_name(VerdictKind kind);

struct CheckOptions {
  double tolerance = 1e-4;
  int samples = 512;
  IIOptions ii;
};

struct CriterionVerdict {
  VerdictKind kind = VerdictKind::necessary;
  double eps = 0.0;
  bool passed = false;
  double margin = 0.0;        // min(ii_low - bound_low, bound_high - ii_high)
  bool inconclusive = false;  // |margin| < tolerance
  double tolerance = 0.0;
  double bound_low = 0.0;
  double bound_high = 0.0;
  double ii_low = 0.0;
  double ii_high = 0.0;
  bool strictly_convex = true;  // false when ii_low <= tolerance
  int corners = 0;
  std::string note;
};

CriterionVerdict check_necessary(const ConvexBody& body, double eps, const PinchBounds& bounds,
                                 const CheckOptions& opt = {});
CriterionVerdict check_sufficient(const ConvexBody& body, double eps, const PinchBounds& bounds,
                                  const CheckOptions& opt = {});
/// Requires the space curvature scale to equal `a`.
CriterionVerdict check_iff_constant_curvature(const ConvexBody& body, double eps, double a,
                                              const CheckOptions& opt = {});
/// Same verdicts from already computed bounds.
CriterionVerdict make_verdict(VerdictKind kind, const IIBounds& ii, double eps,
                              const PinchBounds& bounds, double tolerance);

/// exp_x(t n(x)); negative t flows outward.
Point normal_flow(const ConvexBody& body, const Point& x, double t, const IIOptions& opt = {});

struct CurvatureProfile {
  std::vector<double> times;
  std::vector<double> lambda_minus;
  std::vector<double> lambda_plus;
  std::optional<double> focal_time;   // pole estimate when the Riccati flow blows up
  bool blow_up = false;
  double last_step = 0.0;
  SymOperator initial;                // A(0) in the boundary frame
};

/// A(0) from the shape operator at x, then dA/dt = A^2 - a^2 Id sampled at t_k = k eps / steps.
CurvatureProfile flow_curvature_profile(const ConvexBody& body, const Point& x, double eps,
                                        int steps, const IIOptions& opt = {},
                                        const RiccatiOptions& riccati = {});

/// First zero of an S-Jacobi field along the normal geodesic, searched on [0, t_max].
std::optional<double> focal_time(const ConvexBody& body, const Point& x, double t_max, int steps,
                                 const IIOptions& opt = {});

/// II of the flowed hypersurface S_t at exp_x(t n(x)), in the direction of the flowed image
/// of v, measured from flowed neighbouring boundary points.
double flowed_second_fundamental_form(const ConvexBody& body, const Point& x,
                                      const TangentVector& v, double t, const IIOptions& opt = {});

struct RoundTripReport {
  double eps = 0.0;
  int probes = 0;
  double defect = 0.0;         // sup |signed distance| between the two boundaries
  double spacing = 0.0;        // max gap of the probe sample
  bool set_equal = false;      // defect <= 2 * spacing
  bool core_convex = false;    // convexity probe of erode(body, eps)
  double core_violation = 0.0; // worst signed distance of a probed geodesic point to the core
  CriterionVerdict iff;
  bool passed = false;
};

RoundTripReport erode_dilate_check(const ConvexBody& body, double eps, int n_probe,
                                   std::uint64_t seed = 0, const CheckOptions& opt = {});

}  // namespace epsconvex
