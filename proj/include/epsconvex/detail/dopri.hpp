#pragma once

// Dormand-Prince 5(4) single step on matrix-valued states.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

namespace epsconvex::detail {

struct DopriStepResult {
  Eigen::MatrixXd y;
  Eigen::MatrixXd k_end;  // f(t + h, y), reusable as the next k1 (FSAL)
  double error = 0.0;     // scaled max-norm, accept when <= 1
};

/// f(t, y) -> dy/dt. `eval_time` maps stage times to the time passed to f.
template <class F, class TimeMap>
DopriStepResult dopri_step(F&& f, TimeMap&& eval_time, double t, const Eigen::MatrixXd& y,
                           const Eigen::MatrixXd& k1, double h, double rtol, double atol) {
  using M = Eigen::MatrixXd;
  static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                          a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                          a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                          b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                          e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

  const M k2 = f(eval_time(t + c2 * h), M(y + h * (a21 * k1)));
  const M k3 = f(eval_time(t + c3 * h), M(y + h * (a31 * k1 + a32 * k2)));
  const M k4 = f(eval_time(t + c4 * h), M(y + h * (a41 * k1 + a42 * k2 + a43 * k3)));
  const M k5 = f(eval_time(t + c5 * h), M(y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4)));
  const M k6 = f(eval_time(t + h),
                 M(y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5)));
  DopriStepResult out;
  out.y = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
  out.k_end = f(eval_time(t + h), out.y);
  const M err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * out.k_end);

  double worst = 0.0;
  for (Eigen::Index j = 0; j < y.cols(); ++j) {
    for (Eigen::Index i = 0; i < y.rows(); ++i) {
      const double sc = atol + rtol * std::max(std::abs(y(i, j)), std::abs(out.y(i, j)));
      worst = std::max(worst, std::abs(err(i, j)) / sc);
    }
  }
  out.error = std::isfinite(worst) ? worst : INFINITY;
  return out;
}

/// Standard step-size update for an order-5 pair.
inline double dopri_next_step(double h, double error) {
  if (error == 0.0) return 5.0 * h;
  const double factor = 0.9 * std::pow(error, -0.2);
  return h * std::clamp(factor, 0.2, 5.0);
}

}  // namespace epsconvex::detail
