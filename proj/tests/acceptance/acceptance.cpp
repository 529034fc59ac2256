// One PASS/FAIL line per acceptance criterion; exit status is the number of failures.
#include "epsconvex/criterion.hpp"
#include "epsconvex/smoothing.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

using namespace epsconvex;

namespace {

using Clock = std::chrono::steady_clock;

double coth(double x) { return 1.0 / std::tanh(x); }

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

int failures = 0;

void report(int id, const std::string& name, bool pass, const std::string& detail) {
  std::printf("%s  %2d  %-34s %s\n", pass ? "PASS" : "FAIL", id, name.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

Point boundary_at(const ConvexBody& body, double angle) {
  const auto& sp = body.space();
  const Point anchor = interior_point(body);
  const auto f = sp.tangent_frame(anchor);
  const TangentVector u{anchor, std::cos(angle) * f[0].vec + std::sin(angle) * f[1].vec};
  const auto q = ray_exit(body, anchor, sp.unit(u), 50.0 / sp.a());
  if (!q) throw Error("no boundary point in the requested direction");
  return *q;
}

TangentVector tangent_at(const ConvexBody& body, const Point& x) {
  return boundary_frame(body, x).front();
}

Point random_point(const HyperbolicSpace& sp, double max_radius, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> r(0.0, max_radius), th(0.0, 2.0 * std::numbers::pi);
  const Point o = sp.origin();
  const auto f = sp.tangent_frame(o);
  const double rho = r(rng), angle = th(rng);
  return sp.exp_map(o, TangentVector{o, rho * (std::cos(angle) * f[0].vec + std::sin(angle) * f[1].vec)});
}

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double fa,
                        double fm, double fb, double whole, double tol, int depth) {
  const double m = 0.5 * (a + b), lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  if (depth <= 0 || std::abs(left + right - whole) < 15.0 * tol)
    return left + right + (left + right - whole) / 15.0;
  return adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

void riccati_barrier() {
  double worst_err = 0.0, worst_time = 0.0;
  bool detected = true;
  std::string detections;
  for (auto [a, eps] : {std::pair{1.0, 1.0}, std::pair{2.0, 0.5}, std::pair{0.5, 2.0}}) {
    const auto start = Clock::now();
    RiccatiOptions opt;
    const int n = 400;
    for (int k = 0; k <= n; ++k) opt.output_times.push_back((eps - 0.01) * k / n);
    const auto tr = integrate_riccati(SymOperator::identity(2, a * coth(a * eps)),
                                      constant_curvature(2, a), eps + 0.01, opt);
    for (std::size_t i = 0; i < tr.output_index.size(); ++i) {
      const double t = opt.output_times[i];
      const double exact = a * coth(a * (eps - t));
      const Mat& s = tr.states[tr.output_index[i]].matrix();
      worst_err = std::max(worst_err, (s - exact * Mat::Identity(2, 2)).cwiseAbs().maxCoeff() / exact);
    }
    detected = detected && tr.output_index.size() == opt.output_times.size() && tr.blow_up_detected &&
               tr.detection_time && *tr.detection_time > eps - 0.01 && *tr.detection_time < eps + 0.01;
    detections += " " + sci(tr.detection_time.value_or(NAN) - eps);
    worst_time = std::max(worst_time, seconds_since(start));
  }
  report(1, "Riccati barrier fidelity", worst_err <= 1e-8 && detected && worst_time < 1.0,
         "max rel err " + sci(worst_err) + ", detection - eps:" + detections + ", slowest case " +
             sci(worst_time) + " s");
}

void forward_suite() {
  const auto start = Clock::now();
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const int ranks[] = {2, 3, 6};
  double worst = INFINITY;
  int bad = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int rank = ranks[trial % 3];
    double a, b, eps;
    do {
      a = 0.3 + 1.5 * u(rng);
      b = a * (1.0 + 1.5 * u(rng));
      eps = 0.2 + 2.0 * u(rng);
    } while (b * std::tanh(b * eps) > a * coth(a * eps));
    const PinchBounds pb = PinchBounds::make(a, b);
    const auto r = PiecewiseCurvature::random(rank, pb, eps, rng);
    const SymOperator a0 = random_symmetric(rank, b * std::tanh(b * eps), a * coth(a * eps), rng);
    ComparisonOptions opt;
    opt.riccati.breakpoints = r.breakpoints();
    const auto rep = forward_positivity_check(a0, r.as_function(), pb, eps, opt);
    worst = std::min(worst, rep.min_lambda_minus);
    if (!rep.stayed_finite || rep.min_lambda_minus < -1e-9) ++bad;
  }
  const double elapsed = seconds_since(start);
  report(2, "Forward comparison suite", bad == 0 && elapsed < 30.0,
         "1000 trials, " + std::to_string(bad) + " violations, min lambda_- " + sci(worst) + ", " +
             sci(elapsed) + " s");
}

void converse_suite() {
  std::mt19937_64 rng(2025);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const int ranks[] = {2, 3, 6};
  int met = 0, bad = 0;
  double worst = -INFINITY;
  for (int trial = 0; trial < 1000; ++trial) {
    const int rank = ranks[trial % 3];
    const double a = 0.3 + 1.5 * u(rng);
    const double b = a * (1.0 + 1.5 * u(rng));
    const double eps = 0.2 + 2.0 * u(rng);
    const PinchBounds pb = PinchBounds::make(a, b);
    const auto r = PiecewiseCurvature::random(rank, pb, eps, rng);
    const double lo = 0.5 * a * std::tanh(a * eps), hi = 1.2 * b * coth(b * eps);
    const SymOperator a0 = random_symmetric(rank, lo, hi, rng);
    ComparisonOptions opt;
    opt.riccati.breakpoints = r.breakpoints();
    opt.bound_tol = 1e-6;
    const auto rep = converse_bounds_check(a0, r.as_function(), pb, eps, opt);
    if (!rep.hypothesis_met) continue;
    ++met;
    worst = std::max({worst, rep.lower_bound - rep.lambda_minus0, rep.lambda_plus0 - rep.upper_bound});
    if (!rep.bounds_hold) ++bad;
  }
  report(3, "Converse comparison suite", bad == 0 && met > 0,
         std::to_string(met) + " of 1000 trials met the hypothesis, " + std::to_string(bad) +
             " violations, worst excess " + sci(worst));
}

void sphere_curvature() {
  double worst = 0.0;
  for (double a : {0.5, 1.0, 2.0}) {
    const HyperbolicSpace sp(2, a);
    Vec c(2);
    c << 0.3 / a, -0.2 / a;
    for (double r : {0.25, 1.0, 2.5}) {
      const double radius = r / a;
      const auto ball = ConvexBody::ball(sp, sp.point_from_spatial(c), radius);
      for (int k = 0; k < 8; ++k) {
        const Point x = boundary_at(ball, 0.4 + 2.0 * std::numbers::pi * k / 8);
        const double ii = second_fundamental_form(ball, x, tangent_at(ball, x));
        worst = std::max(worst, std::abs(ii - a * coth(a * radius)));
      }
    }
  }
  report(4, "Sphere curvature", worst <= 1e-5, "max |II - a coth(a r)| " + sci(worst));
}

void tube_curvature() {
  double worst = 0.0;
  for (double a : {0.5, 1.0, 2.0}) {
    const HyperbolicSpace sp(2, a);
    const Point o = sp.origin();
    for (double eps : {0.3, 1.0, 2.0}) {
      const auto tube = ConvexBody::geodesic_tube(sp, sp.tangent_frame(o)[0], eps);
      for (double angle : {1.2, 1.7, 2.9, 4.4}) {
        const Point x = boundary_at(tube, angle);
        const double ii = second_fundamental_form(tube, x, tangent_at(tube, x));
        worst = std::max(worst, std::abs(ii - a * std::tanh(a * eps)));
      }
    }
  }
  report(5, "Tube curvature", worst <= 1e-5, "max |II - a tanh(a eps)| " + sci(worst));
}

void horosphere_curvature() {
  double worst_ii = 0.0, worst_flow = 0.0;
  Vec dir(2);
  dir << 0.6, 0.8;
  for (double a : {0.5, 1.0, 2.0}) {
    const HyperbolicSpace sp(2, a);
    const auto horo = ConvexBody::horoball(sp, dir, 1.0);
    // Rays pointing away from the ideal point exit near the anchor.
    const double away = std::atan2(dir[1], dir[0]) + std::numbers::pi;
    for (double angle : {away - 0.8, away, away + 0.5}) {
      const Point x = boundary_at(horo, angle);
      worst_ii = std::max(worst_ii, std::abs(second_fundamental_form(horo, x, tangent_at(horo, x)) - a));
      const auto prof = flow_curvature_profile(horo, x, 2.0 / a, 32);
      for (std::size_t k = 0; k < prof.times.size(); ++k)
        worst_flow = std::max({worst_flow, std::abs(prof.lambda_minus[k] - a),
                               std::abs(prof.lambda_plus[k] - a)});
    }
  }
  report(6, "Horosphere curvature", worst_ii <= 1e-5 && worst_flow <= 1e-6,
         "max |II - a| " + sci(worst_ii) + ", max profile deviation " + sci(worst_flow));
}

void iff_grid() {
  const HyperbolicSpace sp(2, 1.0);
  int agree = 0, total = 0;
  for (int i = 0; i < 10; ++i) {
    const double r = 0.2 + 0.25 * i;
    const auto ball = ConvexBody::ball(sp, sp.origin(), r);
    for (int j = 0; j < 10; ++j) {
      const double eps = 0.25 + 0.25 * j;
      if (std::abs(r - eps) < 1e-3) continue;
      ++total;
      if (check_iff_constant_curvature(ball, eps, 1.0).passed == (r >= eps)) ++agree;
    }
  }
  report(7, "Constant-curvature iff grid", agree == total,
         std::to_string(agree) + "/" + std::to_string(total) + " agree with R >= eps");
}

void half_space() {
  const HyperbolicSpace sp(2, 1.0);
  const auto hs = ConvexBody::half_space(sp, sp.tangent_frame(sp.origin())[1]);
  const PinchBounds pb = PinchBounds::make(1.0, 1.0);
  bool ok = true;
  double worst = -INFINITY;
  for (double eps : {0.1, 0.5, 1.0, 2.0}) {
    const auto v = check_necessary(hs, eps, pb);
    worst = std::max(worst, v.margin);
    ok = ok && !v.passed && v.margin <= -std::tanh(0.1) + 1e-6;
  }
  report(8, "Half-space counterexample", ok, "largest margin " + sci(worst) + " (limit " +
                                                 sci(-std::tanh(0.1) + 1e-6) + ")");
}

void focal_times() {
  double worst = 0.0, worst_steps = 0.0;
  bool ok = true;
  for (double a : {0.5, 1.0, 2.0}) {
    const HyperbolicSpace sp(2, a);
    for (double r : {0.5, 1.0, 2.0}) {
      const double radius = r / a;
      const auto ball = ConvexBody::ball(sp, sp.origin(), radius);
      const Point x = boundary_at(ball, 0.8);
      const auto ft = focal_time(ball, x, 2.0 * radius, 200);
      const auto prof = flow_curvature_profile(ball, x, 2.0 * radius, 8);
      if (!ft || !prof.focal_time) {
        ok = false;
        continue;
      }
      worst = std::max(worst, std::abs(*ft - radius));
      worst_steps = std::max(worst_steps, std::abs(*ft - *prof.focal_time) / prof.last_step);
    }
  }
  report(9, "Focal-time oracle", ok && worst <= 1e-4 && worst_steps <= 2.0,
         "max |focal - R| " + sci(worst) + ", max gap to blow-up " + sci(worst_steps) + " steps");
}

void flowed_consistency() {
  const HyperbolicSpace sp(2, 1.0);
  const Point o = sp.origin();
  const auto f = sp.tangent_frame(o);
  Vec dir(2);
  dir << -0.8, 0.6;
  struct Case {
    const char* name;
    ConvexBody body;
    double horizon;
  };
  const Case cases[] = {{"ball", ConvexBody::ball(sp, o, 1.5), 1.3},
                        {"geodesic_tube", ConvexBody::geodesic_tube(sp, f[0], 0.8), 0.7},
                        {"hyperplane_tube", ConvexBody::hyperplane_tube(sp, f[1], 1.2), 1.1},
                        {"horoball", ConvexBody::horoball(sp, dir, 1.0), 2.0}};
  double worst = 0.0;
  for (const auto& c : cases) {
    const Point x = boundary_at(c.body, 1.3);
    const auto prof = flow_curvature_profile(c.body, x, c.horizon * 9.0 / 8.0, 9);
    const TangentVector v = tangent_at(c.body, x);
    for (std::size_t k = 1; k < prof.times.size(); ++k) {
      const double ii = flowed_second_fundamental_form(c.body, x, v, prof.times[k]);
      worst = std::max(worst, std::abs(ii - prof.lambda_minus[k]));
    }
  }
  report(10, "Flowed II against Riccati", worst <= 1e-4,
         "4 bodies x 8 times, max |II(S_t) - lambda(t)| " + sci(worst));
}

void smoothing_approximation() {
  double norm_err = 0.0;
  for (double kappa : {0.01, 0.05, 0.1}) {
    const BumpKernel k = BumpKernel::make(kappa);
    auto f = [&](double r) { return kernel_eval(k, r) * r; };
    const double fa = f(0.0), fb = f(kappa), fm = f(0.5 * kappa);
    const double mass = 2.0 * std::numbers::pi *
                        adaptive_simpson(f, 0.0, kappa, fa, fm, fb, kappa / 6.0 * (fa + 4 * fm + fb), 1e-14, 50);
    norm_err = std::max(norm_err, std::abs(mass - 1.0));
  }
  const HyperbolicSpace sp(2, 1.0);
  const Point o = sp.origin();
  const ConvexBody bodies[] = {ConvexBody::ball(sp, o, 1.0),
                               ConvexBody::geodesic_tube(sp, sp.tangent_frame(o)[0], 1.0)};
  double worst_ratio = 0.0;
  int probes = 0;
  for (double kappa : {0.01, 0.05}) {
    for (const auto& body : bodies) {
      const SmoothedField field(body, kappa);
      std::mt19937_64 rng(11);
      for (int i = 0; i < 100; ++i, ++probes) {
        const Point x = random_point(sp, 2.5, rng);
        worst_ratio = std::max(worst_ratio,
                               std::abs(smoothed_value(field, x) - distance_to_body(body, x)) / kappa);
      }
    }
  }
  report(11, "Smoothing approximation", worst_ratio < 1.0 && norm_err <= 1e-8,
         std::to_string(probes) + " probes, max |f_k - f| / kappa " + sci(worst_ratio) +
             ", kernel mass error " + sci(norm_err));
}

void levelset_check() {
  const auto start = Clock::now();
  const HyperbolicSpace sp(2, 1.0);
  const auto ball = ConvexBody::ball(sp, sp.origin(), 1.0);
  const double c = coth(1.0);
  const auto rep = smoothed_levelset_check(ball, c, c, 0.3, 0.9 * coth(1.3), 1.1 * c);
  const double elapsed = seconds_since(start);
  std::ostringstream d;
  d << "eta' " << rep.eta_prime << ", kappa " << rep.kappa << ", t " << rep.level << ", "
    << rep.inclusion_failures << "/" << rep.inclusion_probes << " probe failures, level II in ["
    << rep.curvature_low << ", " << rep.curvature_high << "] within [" << rep.bound_low << ", "
    << rep.bound_high << "], " << sci(elapsed) << " s";
  report(12, "Smoothed level-set check", rep.passed && elapsed < 60.0, d.str());
}

void round_trip() {
  const HyperbolicSpace sp(2, 1.0);
  const Point o = sp.origin();
  const ConvexBody bodies[] = {ConvexBody::ball(sp, o, 1.0),
                               ConvexBody::geodesic_tube(sp, sp.tangent_frame(o)[0], 0.8)};
  double worst = 0.0;
  bool ok = true;
  for (const auto& body : bodies) {
    const auto rep = erode_dilate_check(body, 0.5 * inradius(body), 512);
    worst = std::max(worst, rep.defect);
    ok = ok && rep.probes == 1024 && rep.defect <= 1e-8;
  }
  report(13, "Erosion-dilation round trip", ok, "512 probes on each boundary, max defect " + sci(worst));
}

}  // namespace

int main() {
  const std::function<void()> checks[] = {riccati_barrier,   forward_suite,     converse_suite,
                                          sphere_curvature,  tube_curvature,    horosphere_curvature,
                                          iff_grid,          half_space,        focal_times,
                                          flowed_consistency, smoothing_approximation,
                                          levelset_check,    round_trip};
  int id = 0;
  for (const auto& check : checks) {
    ++id;
    try {
      check();
    } catch (const std::exception& e) {
      report(id, "criterion raised", false, e.what());
    }
  }
  std::printf("%d of 13 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
