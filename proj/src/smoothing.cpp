#include "epsconvex/smoothing.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

namespace epsconvex {

namespace {

double flat_top(double s) { return s > 0.0 ? std::exp(-1.0 / s) : 0.0; }

// Smooth step from 0 at s = 0 to 1 at s = 1.
double smooth_step(double s) {
  if (s <= 0.0) return 0.0;
  if (s >= 1.0) return 1.0;
  const double p = flat_top(s), q = flat_top(1.0 - s);
  return p / (p + q);
}

double sphere_area(int m) {
  // Area of the unit sphere in R^m.
  return 2.0 * std::pow(std::numbers::pi, 0.5 * m) / std::tgamma(0.5 * m);
}

}  // namespace

double bump_profile(double u, double plateau) {
  u = std::abs(u);
  if (u <= plateau) return 1.0;
  if (u >= 1.0) return 0.0;
  return smooth_step((1.0 - u) / (1.0 - plateau));
}

void gauss_legendre(int n, double lo, double hi, std::vector<double>& nodes,
                    std::vector<double>& weights) {
  if (n < 1) throw Error("gauss_legendre: need at least one node");
  nodes.assign(n, 0.0);
  weights.assign(n, 0.0);
  const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int k = 1; k <= n; ++k) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p2) / k;
      }
      dp = n * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    nodes[i] = mid - half * z;
    nodes[n - 1 - i] = mid + half * z;
    weights[i] = weights[n - 1 - i] = 2.0 * half / ((1.0 - z * z) * dp * dp);
  }
}

BumpKernel BumpKernel::make(double kappa, int m, double plateau) {
  if (!(kappa > 0.0)) throw Error("BumpKernel: kappa must be positive");
  if (!(plateau > 0.0 && plateau < 1.0)) throw Error("BumpKernel: plateau must lie in (0, 1)");
  if (m < 1) throw Error("BumpKernel: dimension must be positive");
  // int_0^1 profile(u) u^{m-1} du: exact on the plateau, composite Gauss-Legendre after it.
  double radial = std::pow(plateau, m) / m;
  std::vector<double> x, w;
  const int panels = 200;
  const double width = (1.0 - plateau) / panels;
  for (int k = 0; k < panels; ++k) {
    gauss_legendre(12, plateau + k * width, plateau + (k + 1) * width, x, w);
    for (std::size_t i = 0; i < x.size(); ++i)
      radial += w[i] * bump_profile(x[i], plateau) * std::pow(x[i], m - 1);
  }
  BumpKernel k;
  k.kappa = kappa;
  k.plateau = plateau;
  k.m = m;
  k.norm_const = 1.0 / (sphere_area(m) * radial);
  return k;
}

double kernel_eval(const BumpKernel& k, double t) {
  return k.norm_const / std::pow(k.kappa, k.m) * bump_profile(t / k.kappa, k.plateau);
}

SmoothedField::SmoothedField(ConvexBody b, double kappa, int radial, int angular)
    : body(std::move(b)), kernel(BumpKernel::make(kappa, 2)), radial_nodes(radial),
      angular_nodes(angular) {
  if (body.space().dim() != 2) throw Error("SmoothedField: only m = 2 is supported");
  if (radial < 16 || angular < 32)
    throw Error("SmoothedField: need at least 16 radial and 32 angular nodes");
  std::vector<double> x, w;
  const double edge = kernel.plateau * kappa;
  for (auto [lo, hi] : {std::pair{0.0, edge}, std::pair{edge, kappa}}) {
    gauss_legendre(radial, lo, hi, x, w);
    for (std::size_t i = 0; i < x.size(); ++i) {
      radii.push_back(x[i]);
      weights.push_back(w[i] * kernel_eval(kernel, x[i]) * x[i]);
    }
  }
  double mass = 0.0;
  for (double v : weights) mass += v;
  for (double& v : weights) v /= mass;
  for (int j = 0; j < angular; ++j) {
    const double th = 2.0 * std::numbers::pi * j / angular;
    cosines.push_back(std::cos(th));
    sines.push_back(std::sin(th));
  }
}

double smoothed_value(const SmoothedField& field, const Point& x) {
  const auto& sp = field.body.space();
  const auto frame = sp.tangent_frame(x);
  double total = 0.0;
  for (std::size_t i = 0; i < field.radii.size(); ++i) {
    double ring = 0.0;
    for (std::size_t j = 0; j < field.cosines.size(); ++j) {
      const TangentVector v{x, field.radii[i] * (field.cosines[j] * frame[0].vec +
                                                 field.sines[j] * frame[1].vec)};
      ring += distance_to_body(field.body, sp.exp_map(x, v));
    }
    total += field.weights[i] * ring;
  }
  return total / static_cast<double>(field.cosines.size());
}

namespace {

void check_step(const SmoothedField& field, double h) {
  if (!(h > 0.0) || h > 0.25 * field.kernel.kappa * (1.0 + 1e-12)) {
    std::ostringstream msg;
    msg << "finite-difference step h = " << h << " must lie in (0, kappa/4 = "
        << 0.25 * field.kernel.kappa << "]";
    throw Error(msg.str());
  }
}

double along(const SmoothedField& field, const Point& x, const Vec& dir, double h) {
  const auto& sp = field.body.space();
  return smoothed_value(field, sp.exp_map(x, TangentVector{x, h * dir}));
}

}  // namespace

TangentVector numeric_gradient(const SmoothedField& field, const Point& x, double h) {
  check_step(field, h);
  const auto& sp = field.body.space();
  TangentVector g = sp.zero_tangent(x);
  for (const auto& e : sp.tangent_frame(x))
    g.vec += (along(field, x, e.vec, h) - along(field, x, e.vec, -h)) / (2.0 * h) * e.vec;
  return g;
}

SymOperator numeric_hessian(const SmoothedField& field, const Point& x, double h) {
  check_step(field, h);
  const auto& sp = field.body.space();
  const auto frame = sp.tangent_frame(x);
  const double f0 = smoothed_value(field, x);
  auto second = [&](const Vec& dir) {
    return (along(field, x, dir, h) - 2.0 * f0 + along(field, x, dir, -h)) / (h * h);
  };
  const int k = static_cast<int>(frame.size());
  Mat hess(k, k);
  for (int i = 0; i < k; ++i) hess(i, i) = second(frame[i].vec);
  const double r2 = 1.0 / std::sqrt(2.0);
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j)
      hess(i, j) = hess(j, i) =
          0.5 * (second(r2 * (frame[i].vec + frame[j].vec)) - second(r2 * (frame[i].vec - frame[j].vec)));
  return SymOperator::symmetrized(hess);
}

double level_set_curvature(const SmoothedField& field, const Point& x, double h) {
  const auto& sp = field.body.space();
  const auto frame = sp.tangent_frame(x);
  const TangentVector g = numeric_gradient(field, x, h);
  Vec gc(2);
  gc << sp.inner(g, frame[0]), sp.inner(g, frame[1]);
  const double gn = gc.norm();
  if (!(gn > 0.0)) throw Error("level_set_curvature: vanishing gradient");
  Vec z(2);
  z << -gc[1] / gn, gc[0] / gn;
  return z.dot(numeric_hessian(field, x, h).matrix() * z) / gn;
}

LevelSetReport smoothed_levelset_check(const ConvexBody& body, double alpha, double beta,
                                       double eta, double alpha_p, double beta_p,
                                       const LevelSetOptions& opt) {
  if (!(0.0 < alpha_p)) throw Error("smoothed_levelset_check: need 0 < alpha'");
  if (!(alpha_p < alpha)) throw Error("smoothed_levelset_check: need alpha' < alpha");
  if (!(alpha <= beta)) throw Error("smoothed_levelset_check: need alpha <= beta");
  if (!(beta < beta_p)) throw Error("smoothed_levelset_check: need beta < beta'");
  if (!(eta > 0.0)) throw Error("smoothed_levelset_check: need eta > 0");
  const auto& sp = body.space();
  if (sp.dim() != 2) throw Error("smoothed_levelset_check: only m = 2 is supported");
  const auto cf = closed_form_ii(body);
  if (!cf) throw Error("smoothed_levelset_check: body needs a closed-form second fundamental form");
  if (cf->first < alpha - 1e-12 || cf->second > beta + 1e-12)
    throw Error("smoothed_levelset_check: closed-form II of the body is outside [alpha, beta]");

  LevelSetReport rep;
  rep.eta = eta;
  rep.alpha_pp = 0.5 * (alpha_p + alpha);
  rep.beta_pp = 0.5 * (beta + beta_p);

  // Largest eta / 2^k whose parallel surfaces keep II inside [alpha'', beta''].
  for (int k = 0; k < 40 && rep.eta_prime == 0.0; ++k) {
    const double cand = eta / std::pow(2.0, k);
    bool ok = true;
    for (int i = 0; i <= 32 && ok; ++i) {
      const auto ii = closed_form_ii(dilate(body, cand * i / 32.0));
      ok = ii && ii->first >= rep.alpha_pp && ii->second <= rep.beta_pp;
    }
    if (ok) rep.eta_prime = cand;
  }
  if (rep.eta_prime == 0.0) throw Error("smoothed_levelset_check: no admissible eta'");
  if (opt.kappa > rep.eta_prime / 12.0 * (1.0 + 1e-12))
    throw Error("smoothed_levelset_check: kappa must not exceed eta'/12");
  rep.kappa = opt.kappa > 0.0 ? opt.kappa : rep.eta_prime / 12.0;
  const SmoothedField field(body, rep.kappa);
  const double h = 0.25 * rep.kappa;
  const double ep = rep.eta_prime, kap = rep.kappa;

  // Outward normal rays from boundary points: there the distance to the body is the arclength.
  const BoundarySample bs = boundary_sample(body, opt.level_points);
  std::vector<TangentVector> outward;
  for (const auto& q : bs.points) outward.push_back(sp.scaled(signed_distance_gradient(body, q), 1.0));
  auto ray = [&](std::size_t i, double s) {
    return sp.exp_map(bs.points[i], sp.scaled(sp.unit(outward[i]), s));
  };
  auto level_point = [&](std::size_t i, double t) {
    double lo = std::max(0.0, t - 2.0 * kap), hi = t + 2.0 * kap;
    for (int it = 0; it < 48; ++it) {
      const double mid = 0.5 * (lo + hi);
      (smoothed_value(field, ray(i, mid)) <= t ? lo : hi) = mid;
    }
    return ray(i, 0.5 * (lo + hi));
  };

  // Level value with the gradient-norm regularity probe.
  const double shifts[] = {0.0, ep / 12.0, -ep / 12.0};
  std::vector<Point> level;
  for (int attempt = 0; attempt < 3; ++attempt) {
    rep.level = 0.5 * ep + shifts[attempt];
    rep.level_shifts = attempt;
    level.clear();
    rep.min_gradient = INFINITY;
    for (std::size_t i = 0; i < bs.points.size(); ++i) {
      level.push_back(level_point(i, rep.level));
      rep.min_gradient = std::min(rep.min_gradient, sp.norm(numeric_gradient(field, level.back(), h)));
    }
    if (rep.min_gradient >= 0.5) break;
  }
  const double t = rep.level;

  // Inclusion chain probes.
  auto probe = [&](bool ok) {
    ++rep.inclusion_probes;
    if (!ok) ++rep.inclusion_failures;
  };
  std::mt19937_64 rng(opt.seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (std::size_t i = 0; i < bs.points.size(); ++i) {
    // C in N_{3 kappa} C in the sublevel set.
    probe(smoothed_value(field, bs.points[i]) <= t + opt.probe_tol);
    probe(smoothed_value(field, ray(i, 3.0 * kap)) <= t + opt.probe_tol);
    probe(smoothed_value(field, ray(i, 3.0 * kap * unif(rng))) <= t + opt.probe_tol);
    // The sublevel set stays inside N_{eta'} C.
    probe(distance_to_body(body, level[i]) <= ep + opt.probe_tol);
    probe(smoothed_value(field, ray(i, ep)) > t - opt.probe_tol);
  }
  std::uniform_int_distribution<std::size_t> pick(0, bs.points.size() - 1);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int k = 0; k < opt.random_probes; ++k) {
    const std::size_t i = pick(rng);
    const double s = -kap + (1.2 * ep + kap) * unif(rng);
    const Point base = s >= 0.0 ? ray(i, s) : sp.exp_map(bs.points[i], sp.scaled(sp.unit(outward[i]), s));
    const auto frame = sp.tangent_frame(base);
    const Point p = sp.exp_map(base, TangentVector{base, 0.5 * kap * (g(rng) * frame[0].vec + g(rng) * frame[1].vec)});
    const double d = distance_to_body(body, p), fk = smoothed_value(field, p);
    if (d <= 3.0 * kap) probe(fk <= t + opt.probe_tol);
    if (fk <= t) probe(d <= ep + opt.probe_tol);
  }
  rep.inclusion_ok = rep.inclusion_failures == 0;

  // Level-set curvature.
  rep.curvature_low = INFINITY;
  rep.curvature_high = -INFINITY;
  for (const auto& y : level) {
    const double c = level_set_curvature(field, y, h);
    rep.curvature_low = std::min(rep.curvature_low, c);
    rep.curvature_high = std::max(rep.curvature_high, c);
  }
  rep.bound_low = alpha_p - opt.curvature_slack;
  rep.bound_high = beta_p + opt.curvature_slack;
  rep.curvature_ok = rep.curvature_low >= rep.bound_low && rep.curvature_high <= rep.bound_high;
  rep.passed = rep.inclusion_ok && rep.curvature_ok;
  return rep;
}

}  // namespace epsconvex
