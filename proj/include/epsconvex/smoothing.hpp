#pragma once

#include "epsconvex/bodies.hpp"
#include "epsconvex/sym_operator.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace epsconvex {

/// Radial bump psi_kappa(t) = norm_const / kappa^m * profile(|t| / kappa), where the profile is 1
/// on [0, plateau], 0 from 1 on, and a smooth step in between.
struct BumpKernel {
  double kappa = 0.1;
  double plateau = 0.1;
  int m = 2;
  double norm_const = 1.0;  // makes the integral over R^m equal to 1

  static BumpKernel make(double kappa, int m = 2, double plateau = 0.1);
};

/// Unnormalized profile on [0, inf).
double bump_profile(double u, double plateau);
double kernel_eval(const BumpKernel& k, double t);

/// Gauss-Legendre nodes and weights on [lo, hi].
void gauss_legendre(int n, double lo, double hi, std::vector<double>& nodes,
                    std::vector<double>& weights);

/// Convolution of the distance to `body` with the bump, over tangent disks (m = 2).
struct SmoothedField {
  ConvexBody body;
  BumpKernel kernel;
  int radial_nodes = 32;   // per radial segment (plateau, transition)
  int angular_nodes = 64;

  SmoothedField(ConvexBody b, double kappa, int radial = 32, int angular = 64);

  // Quadrature rule: radii with weights psi_kappa(rho) rho w_rho w_theta, and unit directions.
  std::vector<double> radii;
  std::vector<double> weights;
  std::vector<double> cosines;
  std::vector<double> sines;
};

double smoothed_value(const SmoothedField& field, const Point& x);
/// Central differences along tangent_frame(x). Requires h <= kappa / 4.
TangentVector numeric_gradient(const SmoothedField& field, const Point& x, double h);
/// Geodesic second differences along the frame and its diagonals, symmetrized; in tangent_frame(x).
SymOperator numeric_hessian(const SmoothedField& field, const Point& x, double h);
/// Hess(Z, Z) / |grad| for the unit Z orthogonal to the gradient: the curvature of the level set.
double level_set_curvature(const SmoothedField& field, const Point& x, double h);

struct LevelSetOptions {
  double kappa = 0.0;          // 0 picks eta' / 12
  int level_points = 16;       // level-set points probed for curvature
  int random_probes = 100;     // seeded membership probes around the body
  std::uint64_t seed = 0;
  double probe_tol = 1e-6;
  double curvature_slack = 5e-3;
};

struct LevelSetReport {
  double eta = 0.0;
  double eta_prime = 0.0;
  double kappa = 0.0;
  double level = 0.0;          // the t of f_kappa^{-1}([0, t])
  int level_shifts = 0;        // Sard-surrogate perturbations applied
  double alpha_pp = 0.0;       // midpoints used for the eta' choice
  double beta_pp = 0.0;
  bool inclusion_ok = false;
  int inclusion_probes = 0;
  int inclusion_failures = 0;
  double min_gradient = 0.0;
  double curvature_low = 0.0;  // measured level-set II range
  double curvature_high = 0.0;
  double bound_low = 0.0;      // alpha' - slack
  double bound_high = 0.0;     // beta' + slack
  bool curvature_ok = false;
  bool passed = false;
};

/// Samples the smoothing construction: eta' <= eta, kappa <= eta'/12, t in [eta'/3, 2 eta'/3],
/// the inclusions C in N_{3 kappa}C in f_kappa^{-1}([0,t]) in N_{eta'}C, and the level-set
/// curvature against [alpha', beta'].
LevelSetReport smoothed_levelset_check(const ConvexBody& body, double alpha, double beta,
                                       double eta, double alpha_p, double beta_p,
                                       const LevelSetOptions& opt = {});

}  // namespace epsconvex
