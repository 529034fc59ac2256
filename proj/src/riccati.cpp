#include "epsconvex/riccati.hpp"

#include "epsconvex/detail/dopri.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace epsconvex {

PinchBounds PinchBounds::make(double a, double b) {
  if (!(a > 0.0) || !(b >= a) || !std::isfinite(b))
    throw Error("PinchBounds: require 0 < a <= b");
  return PinchBounds{a, b};
}

double scalar_coth_barrier(double c, double eps, double t) {
  if (!(c > 0.0) || !(eps > 0.0)) throw Error("scalar_coth_barrier: c and eps must be positive");
  if (!(t < eps)) throw Error("scalar_coth_barrier: t must be < eps (barrier blows up at eps)");
  return c / std::tanh(c * (eps - t));
}

double scalar_tanh_barrier(double c, double eps, double t) {
  if (!(c > 0.0) || !(eps > 0.0)) throw Error("scalar_tanh_barrier: c and eps must be positive");
  return c * std::tanh(c * (eps - t));
}

CurvatureFn constant_curvature(int rank, double c) {
  const SymOperator r = SymOperator::identity(rank, c * c);
  return [r](double) { return r; };
}

PiecewiseCurvature::PiecewiseCurvature(std::vector<double> knots, std::vector<SymOperator> pieces)
    : knots_(std::move(knots)), pieces_(std::move(pieces)) {
  if (pieces_.empty() || knots_.size() != pieces_.size() + 1)
    throw Error("PiecewiseCurvature: need one more knot than pieces");
  if (!std::is_sorted(knots_.begin(), knots_.end()) ||
      std::adjacent_find(knots_.begin(), knots_.end()) != knots_.end())
    throw Error("PiecewiseCurvature: knots must be strictly increasing");
  for (const auto& p : pieces_)
    if (p.rank() != pieces_.front().rank()) throw Error("PiecewiseCurvature: rank mismatch");
}

SymOperator random_symmetric(int rank, double lo, double hi, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss;
  std::uniform_real_distribution<double> spec(lo, hi);
  Mat g(rank, rank);
  for (int j = 0; j < rank; ++j)
    for (int i = 0; i < rank; ++i) g(i, j) = gauss(rng);
  const Mat q = Eigen::HouseholderQR<Mat>(g).householderQ();
  Vec d(rank);
  for (int i = 0; i < rank; ++i) d[i] = spec(rng);
  return SymOperator::symmetrized(q * d.asDiagonal() * q.transpose());
}

PiecewiseCurvature PiecewiseCurvature::random(int rank, const PinchBounds& bounds, double horizon,
                                              std::mt19937_64& rng, int max_pieces) {
  std::uniform_int_distribution<int> count(1, std::max(1, max_pieces));
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const int n = count(rng);
  std::vector<double> cuts;
  for (int i = 0; i + 1 < n; ++i) cuts.push_back(horizon * unit(rng));
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  std::vector<double> knots{0.0};
  for (double c : cuts)
    if (c > 0.0 && c < horizon) knots.push_back(c);
  knots.push_back(std::numeric_limits<double>::infinity());

  std::vector<SymOperator> pieces;
  const double lo = bounds.a * bounds.a, hi = bounds.b * bounds.b;
  for (std::size_t i = 0; i + 1 < knots.size(); ++i)
    pieces.push_back(random_symmetric(rank, lo, hi, rng));
  return PiecewiseCurvature(std::move(knots), std::move(pieces));
}

SymOperator PiecewiseCurvature::operator()(double t) const {
  if (t <= knots_.front()) return pieces_.front();
  auto it = std::upper_bound(knots_.begin(), knots_.end(), t);
  const auto idx = static_cast<std::size_t>(std::distance(knots_.begin(), it)) - 1;
  return pieces_[std::min(idx, pieces_.size() - 1)];
}

std::vector<double> PiecewiseCurvature::breakpoints() const {
  std::vector<double> out;
  for (std::size_t i = 1; i + 1 < knots_.size(); ++i) out.push_back(knots_[i]);
  return out;
}

CurvatureFn PiecewiseCurvature::as_function() const {
  return [self = *this](double t) { return self(t); };
}

namespace {

double max_eigen(const Mat& m) {
  return eigen_extremes(SymOperator::symmetrized(m)).second;
}

}  // namespace

RiccatiTrajectory integrate_riccati(const SymOperator& a0, const CurvatureFn& curvature,
                                    double t_end, const RiccatiOptions& options) {
  if (!(t_end > 0.0)) throw Error("integrate_riccati: t_end must be positive");
  if (!(options.tol > 0.0)) throw Error("integrate_riccati: tol must be positive");
  const int n = a0.rank();

  // Stops: requested outputs, curvature jumps, and t_end.
  std::vector<double> stops;
  for (double t : options.output_times)
    if (t > 0.0 && t < t_end) stops.push_back(t);
  std::vector<double> jumps;
  for (double t : options.breakpoints)
    if (t > 0.0 && t < t_end) jumps.push_back(t);
  stops.insert(stops.end(), jumps.begin(), jumps.end());
  stops.push_back(t_end);
  std::sort(stops.begin(), stops.end());
  stops.erase(std::unique(stops.begin(), stops.end()), stops.end());
  std::sort(jumps.begin(), jumps.end());

  auto rhs = [&](double t, const Mat& a) -> Mat {
    const SymOperator r = curvature(t);
    if (r.rank() != n) throw Error("integrate_riccati: curvature operator rank mismatch");
    return a * a - r.matrix();
  };

  RiccatiTrajectory traj;
  traj.times.push_back(0.0);
  traj.states.push_back(a0);

  auto record_output = [&](double t) {
    for (double want : options.output_times)
      if (want == t) traj.output_index.push_back(traj.times.size() - 1);
  };
  record_output(0.0);

  double t = 0.0;
  Mat y = a0.matrix();
  Mat k1 = rhs(0.0, y);
  double h = std::min({0.01 * t_end, 0.1 / (1.0 + y.cwiseAbs().maxCoeff()), options.max_step});
  std::size_t stop_idx = 0;
  int steps = 0;

  while (t < t_end) {
    while (stop_idx < stops.size() && stops[stop_idx] <= t) ++stop_idx;
    const double target = stops[stop_idx];
    // Upper end of the current smooth segment; R is evaluated as a left limit there.
    auto jump = std::upper_bound(jumps.begin(), jumps.end(), t);
    const double seg_hi = jump == jumps.end() ? INFINITY : *jump;
    auto eval_time = [seg_hi](double tau) {
      return std::isfinite(seg_hi) ? std::min(tau, std::nextafter(seg_hi, -INFINITY)) : tau;
    };

    h = std::min(h, options.max_step);
    const double h_free = h;
    bool lands = false;
    if (t + h >= target - 1e-12 * std::max(1.0, std::abs(target))) {
      h = target - t;
      lands = true;
    }

    if (++steps > options.max_steps) {
      std::ostringstream msg;
      msg << "integrate_riccati: step budget exhausted at t = " << t;
      throw Error(msg.str());
    }

    auto step = detail::dopri_step(rhs, eval_time, t, y, k1, h, options.tol, options.tol);
    if (!(step.error <= 1.0)) {
      ++traj.rejected_steps;
      if (!std::isfinite(step.error)) {
        h *= 0.2;
      } else {
        h = detail::dopri_next_step(h, step.error);
      }
      if (h < 1e-15 * std::max(1.0, t)) {
        std::ostringstream msg;
        msg << "integrate_riccati: step size underflow at t = " << t;
        throw Error(msg.str());
      }
      continue;
    }
    if (!step.y.allFinite()) {
      std::ostringstream msg;
      msg << "integrate_riccati: non-finite state at t = " << t + h;
      throw Error(msg.str());
    }

    const double t_new = lands ? target : t + h;
    traj.last_step = t_new - t;
    t = t_new;
    y = 0.5 * (step.y + step.y.transpose());
    traj.times.push_back(t);
    traj.states.push_back(SymOperator::symmetrized(y));
    record_output(t);

    const bool at_jump = std::binary_search(jumps.begin(), jumps.end(), t);
    k1 = at_jump ? rhs(t, y) : Mat(0.5 * (step.k_end + step.k_end.transpose()));
    h = lands ? std::max(h_free, detail::dopri_next_step(h, step.error))
              : detail::dopri_next_step(h, step.error);

    const double lam_plus = max_eigen(y);
    if (lam_plus >= options.blow_up_threshold) {
      traj.blow_up_detected = true;
      traj.detection_time = t;
      traj.blow_up_time = t + 1.0 / lam_plus;
      break;
    }
  }
  return traj;
}

namespace {

std::vector<std::pair<double, double>> extremes_along(const RiccatiTrajectory& traj) {
  std::vector<std::pair<double, double>> out;
  out.reserve(traj.states.size());
  for (const auto& s : traj.states) out.push_back(eigen_extremes(s));
  return out;
}

}  // namespace

PositivityReport forward_positivity_check(const SymOperator& a0, const CurvatureFn& curvature,
                                          const PinchBounds& bounds, double eps,
                                          const ComparisonOptions& options) {
  if (!(eps > 0.0)) throw Error("forward_positivity_check: eps must be positive");
  const auto [lmin, lmax] = eigen_extremes(a0);
  const double lower = bounds.b * std::tanh(bounds.b * eps);
  const double upper = bounds.a / std::tanh(bounds.a * eps);
  if (lmin < lower - 1e-12) {
    std::ostringstream msg;
    msg << "forward_positivity_check: lower bound violated, lambda_-(A0) = " << lmin
        << " < b tanh(b eps) = " << lower;
    throw Error(msg.str());
  }
  if (lmax > upper + 1e-12) {
    std::ostringstream msg;
    msg << "forward_positivity_check: upper bound violated, lambda_+(A0) = " << lmax
        << " > a coth(a eps) = " << upper;
    throw Error(msg.str());
  }

  PositivityReport rep;
  rep.eps = eps;
  rep.margin = options.margin_fraction * eps;
  const double t_end = eps - rep.margin;
  rep.trajectory = integrate_riccati(a0, curvature, t_end, options.riccati);
  rep.stayed_finite = !rep.trajectory.blow_up_detected;

  rep.min_lambda_minus = INFINITY;
  rep.upper_barrier_excess = -INFINITY;
  rep.lower_barrier_excess = -INFINITY;
  const auto ext = extremes_along(rep.trajectory);
  for (std::size_t i = 0; i < ext.size(); ++i) {
    const double t = rep.trajectory.times[i];
    if (ext[i].first < rep.min_lambda_minus) {
      rep.min_lambda_minus = ext[i].first;
      rep.min_lambda_minus_time = t;
    }
    const double upper_t = scalar_coth_barrier(bounds.a, eps, t);
    const double lower_t = scalar_tanh_barrier(bounds.b, eps, t);
    rep.upper_barrier_excess =
        std::max(rep.upper_barrier_excess, (ext[i].second - upper_t) / std::max(1.0, upper_t));
    rep.lower_barrier_excess = std::max(rep.lower_barrier_excess, lower_t - ext[i].first);
  }
  rep.positive = rep.stayed_finite && rep.min_lambda_minus > 0.0;
  return rep;
}

ConverseReport converse_bounds_check(const SymOperator& a0, const CurvatureFn& curvature,
                                     const PinchBounds& bounds, double eps,
                                     const ComparisonOptions& options) {
  if (!(eps > 0.0)) throw Error("converse_bounds_check: eps must be positive");
  ConverseReport rep;
  rep.eps = eps;
  std::tie(rep.lambda_minus0, rep.lambda_plus0) = eigen_extremes(a0);
  rep.lower_bound = bounds.a * std::tanh(bounds.a * eps);
  rep.upper_bound = bounds.b / std::tanh(bounds.b * eps);

  const double t_end = eps * (1.0 - options.margin_fraction);
  const auto traj = integrate_riccati(a0, curvature, t_end, options.riccati);
  rep.min_lambda_minus = INFINITY;
  for (const auto& [lo, hi] : extremes_along(traj)) rep.min_lambda_minus = std::min(rep.min_lambda_minus, lo);

  if (traj.blow_up_detected) {
    rep.note = "hypothesis not met: A(t) blows up before eps";
    return rep;
  }
  if (rep.min_lambda_minus < -options.nonnegative_tol) {
    rep.note = "hypothesis not met: A(t) is not nonnegative on [0, eps)";
    return rep;
  }
  rep.hypothesis_met = true;
  rep.bounds_hold = rep.lower_bound - options.bound_tol <= rep.lambda_minus0 &&
                    rep.lambda_plus0 <= rep.upper_bound + options.bound_tol;
  rep.note = rep.bounds_hold ? "bounds hold" : "bounds violated";
  return rep;
}

SampledPath comparison_witness(WitnessKind kind, const SampledPath& path, double c, double eps) {
  if (path.size() < 8) throw Error("comparison_witness: grid too coarse (need >= 8 samples)");
  if (!(path.dt > 0.0)) throw Error("comparison_witness: grid step must be positive");
  if (path.t0 != 0.0) throw Error("comparison_witness: grid must start at t = 0");
  const double t_last = path.time(path.size() - 1);
  if (kind == WitnessKind::phi && !(t_last < eps))
    throw Error("comparison_witness: phi requires the grid to end before eps");

  SampledPath out{path.t0, path.dt, std::vector<double>(path.size())};
  double integral = 0.0;
  double prev_sum = 0.0;
  for (std::size_t i = 0; i < path.size(); ++i) {
    const double t = path.time(i);
    const double s = path.values[i];
    const double barrier = kind == WitnessKind::phi ? scalar_coth_barrier(c, eps, t)
                                                    : scalar_tanh_barrier(c, eps, t);
    const double sum = barrier + s;
    if (i > 0) integral += 0.5 * path.dt * (prev_sum + sum);
    prev_sum = sum;
    const double diff = kind == WitnessKind::phi ? barrier - s : s - barrier;
    out.values[i] = diff * std::exp(-integral);
  }
  return out;
}

}  // namespace epsconvex
