#include "epsconvex/sym_operator.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace epsconvex {

double max_asymmetry(const Mat& m) {
  if (m.rows() != m.cols()) return INFINITY;
  return (m - m.transpose()).cwiseAbs().maxCoeff();
}

SymOperator::SymOperator(const Mat& entries, double tol) {
  if (entries.rows() != entries.cols() || entries.rows() == 0)
    throw Error("SymOperator: matrix must be square and nonempty");
  if (!entries.allFinite()) throw Error("SymOperator: non-finite entries");
  const double asym = max_asymmetry(entries);
  if (asym > tol) {
    std::ostringstream msg;
    msg << "SymOperator: matrix is not symmetric (defect " << asym << ")";
    throw Error(msg.str());
  }
  m_ = 0.5 * (entries + entries.transpose());
}

SymOperator SymOperator::identity(int n, double scale) {
  return SymOperator(scale * Mat::Identity(n, n));
}

SymOperator SymOperator::diagonal(const Vec& diag) {
  return SymOperator(Mat(diag.asDiagonal()));
}

SymOperator SymOperator::symmetrized(const Mat& entries) {
  SymOperator s;
  s.m_ = 0.5 * (entries + entries.transpose());
  return s;
}

EigenDecomposition jacobi_eigen(const SymOperator& op, double tol, int max_sweeps) {
  const int n = op.rank();
  Mat a = op.matrix();
  Mat v = Mat::Identity(n, n);

  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
    const double scale = a.cwiseAbs().maxCoeff();
    if (std::sqrt(off) <= tol * std::max(scale, 1e-300)) break;

    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (int k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        for (int k = 0; k < n; ++k) {
          const double vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int i, int j) { return a(i, i) < a(j, j); });
  EigenDecomposition out{Vec(n), Mat(n, n)};
  for (int i = 0; i < n; ++i) {
    out.values[i] = a(order[i], order[i]);
    out.vectors.col(i) = v.col(order[i]);
  }
  return out;
}

std::pair<double, double> eigen_extremes(const SymOperator& a) {
  if (a.rank() == 1) return {a(0, 0), a(0, 0)};
  const auto eig = jacobi_eigen(a);
  return {eig.values[0], eig.values[a.rank() - 1]};
}

}  // namespace epsconvex
