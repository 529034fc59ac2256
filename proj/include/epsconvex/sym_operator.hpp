#pragma once

#include "epsconvex/geometry.hpp"

#include <utility>

namespace epsconvex {

/// Small dense symmetric operator. Construction checks symmetry to 1e-10 (max norm)
/// and stores the exactly symmetrized matrix.
class SymOperator {
 public:
  SymOperator() = default;
  explicit SymOperator(const Mat& entries, double tol = 1e-10);

  static SymOperator identity(int n, double scale = 1.0);
  static SymOperator diagonal(const Vec& diag);
  /// Symmetrizes without checking; for integrator states and FD estimates.
  static SymOperator symmetrized(const Mat& entries);

  int rank() const { return static_cast<int>(m_.rows()); }
  const Mat& matrix() const { return m_; }
  double operator()(int i, int j) const { return m_(i, j); }

 private:
  Mat m_;
};

struct EigenDecomposition {
  Vec values;   // ascending
  Mat vectors;  // columns, orthonormal
};

/// Cyclic Jacobi rotations; intended for ranks <= 8.
EigenDecomposition jacobi_eigen(const SymOperator& a, double tol = 1e-15, int max_sweeps = 64);

/// (lambda_min, lambda_max).
std::pair<double, double> eigen_extremes(const SymOperator& a);

double max_asymmetry(const Mat& m);

}  // namespace epsconvex
