#pragma once

#include "epsconvex/sym_operator.hpp"

#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace epsconvex {

/// Curvature pinching a^2 Id <= R <= b^2 Id, 0 < a <= b.
struct PinchBounds {
  double a = 1.0;
  double b = 1.0;

  static PinchBounds make(double a, double b);
};

/// c coth(c (eps - t)); solves -x' + x^2 - c^2 = 0 and blows up at t = eps.
double scalar_coth_barrier(double c, double eps, double t);
/// c tanh(c (eps - t)); solves -x' + x^2 - c^2 = 0 and vanishes at t = eps.
double scalar_tanh_barrier(double c, double eps, double t);

using CurvatureFn = std::function<SymOperator(double)>;

/// Constant operator R(t) = c^2 Id.
CurvatureFn constant_curvature(int rank, double c);

/// Right-continuous piecewise-constant curvature operator.
class PiecewiseCurvature {
 public:
  PiecewiseCurvature(std::vector<double> knots, std::vector<SymOperator> pieces);

  /// Random partition of [0, horizon] into 1..max_pieces pieces, each a random
  /// rotation of a diagonal operator with spectrum drawn uniformly in [a^2, b^2].
  static PiecewiseCurvature random(int rank, const PinchBounds& bounds, double horizon,
                                   std::mt19937_64& rng, int max_pieces = 5);

  SymOperator operator()(double t) const;
  /// Interior knots where R jumps.
  std::vector<double> breakpoints() const;
  CurvatureFn as_function() const;

 private:
  std::vector<double> knots_;  // piece i covers [knots_[i], knots_[i+1])
  std::vector<SymOperator> pieces_;
};

/// Random symmetric operator with eigenvalues uniform in [lo, hi].
SymOperator random_symmetric(int rank, double lo, double hi, std::mt19937_64& rng);

struct RiccatiOptions {
  double tol = 1e-12;                 // local error per step (absolute and relative)
  double blow_up_threshold = 1e6;     // stop once lambda_+ reaches this
  double max_step = std::numeric_limits<double>::infinity();
  int max_steps = 500000;
  std::vector<double> output_times;   // the integrator lands on these exactly
  std::vector<double> breakpoints;    // times where R may jump
};

struct RiccatiTrajectory {
  std::vector<double> times;          // strictly increasing, starts at 0
  std::vector<SymOperator> states;
  bool blow_up_detected = false;
  /// Pole estimate detection_time + 1/lambda_+ (exact to O(lambda_+^-3)).
  std::optional<double> blow_up_time;
  std::optional<double> detection_time;
  double last_step = 0.0;
  int rejected_steps = 0;
  /// For each requested output time that was reached, its index into `times`.
  std::vector<std::size_t> output_index;

  double end_time() const { return times.back(); }
};

/// Adaptive Dormand-Prince integration of dA/dt = A^2 - R(t) on [0, t_end].
RiccatiTrajectory integrate_riccati(const SymOperator& a0, const CurvatureFn& curvature,
                                    double t_end, const RiccatiOptions& options = {});

struct PositivityReport {
  double eps = 0.0;
  double margin = 0.0;                // integration stops at eps - margin
  bool stayed_finite = false;
  double min_lambda_minus = 0.0;
  double min_lambda_minus_time = 0.0;
  bool positive = false;
  /// max_t (lambda_+(t) - s(t)) / max(1, s(t)) with s(t) = a coth(a(eps - t)); <= 0 when the
  /// upper barrier holds.
  double upper_barrier_excess = 0.0;
  /// max_t b tanh(b(eps - t)) - lambda_-(t); <= 0 when the lower barrier holds.
  double lower_barrier_excess = 0.0;
  RiccatiTrajectory trajectory;
};

struct ComparisonOptions {
  double margin_fraction = 1e-3;      // margin = margin_fraction * eps
  RiccatiOptions riccati;
  double nonnegative_tol = 1e-9;
  double bound_tol = 1e-9;
};

/// Forward direction: eigenvalues of A0 inside [b tanh(b eps), a coth(a eps)] keep A
/// defined and positive on [0, eps). Throws if A0 is outside that band.
PositivityReport forward_positivity_check(const SymOperator& a0, const CurvatureFn& curvature,
                                          const PinchBounds& bounds, double eps,
                                          const ComparisonOptions& options = {});

struct ConverseReport {
  double eps = 0.0;
  bool hypothesis_met = false;        // A stayed defined and nonnegative on the window
  std::string note;
  double min_lambda_minus = 0.0;
  double lambda_minus0 = 0.0;
  double lambda_plus0 = 0.0;
  double lower_bound = 0.0;           // a tanh(a eps)
  double upper_bound = 0.0;           // b coth(b eps)
  bool bounds_hold = false;
};

/// Converse direction: a trajectory defined and nonnegative on [0, eps) starts inside
/// [a tanh(a eps), b coth(b eps)].
ConverseReport converse_bounds_check(const SymOperator& a0, const CurvatureFn& curvature,
                                     const PinchBounds& bounds, double eps,
                                     const ComparisonOptions& options = {});

/// Real function sampled on the uniform grid t_i = t0 + i * dt.
struct SampledPath {
  double t0 = 0.0;
  double dt = 0.0;
  std::vector<double> values;

  double time(std::size_t i) const { return t0 + static_cast<double>(i) * dt; }
  std::size_t size() const { return values.size(); }
};

enum class WitnessKind { phi, psi };

/// phi: (s_{c,eps} - s) exp(-int (s_{c,eps} + s)); psi: (i - i_{c,eps}) exp(-int (i + i_{c,eps})).
/// The integral uses the cumulative trapezoid rule on the grid.
SampledPath comparison_witness(WitnessKind kind, const SampledPath& path, double c, double eps);

}  // namespace epsconvex
