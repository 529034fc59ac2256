#include "epsconvex/sym_operator.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <complex>
#include <random>

using namespace epsconvex;

namespace {

// Characteristic polynomial by Faddeev-LeVerrier, roots by Durand-Kerner.
std::vector<double> charpoly_roots(const Mat& a) {
  const int n = static_cast<int>(a.rows());
  std::vector<double> c(n + 1);
  c[n] = 1.0;
  Mat m = Mat::Zero(n, n);
  for (int k = 1; k <= n; ++k) {
    m = a * m + c[n - k + 1] * Mat::Identity(n, n);
    c[n - k] = -(a * m).trace() / k;
  }
  auto p = [&](std::complex<double> z) {
    std::complex<double> s = 0.0;
    for (int k = n; k >= 0; --k) s = s * z + c[k];
    return s;
  };
  std::vector<std::complex<double>> z(n);
  for (int i = 0; i < n; ++i) z[i] = std::pow(std::complex<double>(0.4, 0.9), i);
  for (int it = 0; it < 2000; ++it) {
    for (int i = 0; i < n; ++i) {
      std::complex<double> den = 1.0;
      for (int j = 0; j < n; ++j)
        if (j != i) den *= z[i] - z[j];
      z[i] -= p(z[i]) / den;
    }
  }
  std::vector<double> r;
  for (auto v : z) r.push_back(v.real());
  std::sort(r.begin(), r.end());
  return r;
}

}  // namespace

TEST(SymOperator, RejectsAsymmetry) {
  Mat m(2, 2);
  m << 1, 2, 2.1, 3;
  EXPECT_THROW(SymOperator{m}, Error);
  m(1, 0) = 2.0 + 1e-12;
  EXPECT_NO_THROW(SymOperator{m});
  EXPECT_EQ(max_asymmetry(SymOperator(m).matrix()), 0.0);
}

TEST(EigenExtremes, Basics) {
  Vec d(2);
  d << 1.0, 3.0;
  auto [lo, hi] = eigen_extremes(SymOperator::diagonal(d));
  EXPECT_DOUBLE_EQ(lo, 1.0);
  EXPECT_DOUBLE_EQ(hi, 3.0);
  auto [l2, h2] = eigen_extremes(SymOperator::identity(3, 2.5));
  EXPECT_DOUBLE_EQ(l2, 2.5);
  EXPECT_DOUBLE_EQ(h2, 2.5);
}

TEST(EigenExtremes, MatchesCharacteristicPolynomial) {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    Mat m(4, 4);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j <= i; ++j) m(i, j) = m(j, i) = g(rng);
    const auto roots = charpoly_roots(m);
    auto [lo, hi] = eigen_extremes(SymOperator(m));
    EXPECT_NEAR(lo, roots.front(), 1e-9);
    EXPECT_NEAR(hi, roots.back(), 1e-9);
  }
}

TEST(JacobiEigen, Reconstructs) {
  std::mt19937_64 rng(12);
  std::normal_distribution<double> g(0.0, 1.0);
  Mat m(6, 6);
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j <= i; ++j) m(i, j) = m(j, i) = g(rng);
  const auto e = jacobi_eigen(SymOperator(m));
  const Mat rec = e.vectors * e.values.asDiagonal() * e.vectors.transpose();
  EXPECT_LE((rec - m).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LE((e.vectors.transpose() * e.vectors - Mat::Identity(6, 6)).cwiseAbs().maxCoeff(),
            1e-12);
  for (int i = 1; i < 6; ++i) EXPECT_LE(e.values[i - 1], e.values[i]);
}
