#pragma once

// Plain reference implementations the tests pin library results against.
// Everything here is written as a direct transcription of the defining
// formulas, independent of the library's storage and propagation machinery.

#include <cmath>
#include <vector>

#include "curvlab/curvature.hpp"
#include "curvlab/linalg.hpp"
#include "curvlab/submanifold.hpp"

namespace testsupport {

using curvlab::CurvTensor;
using curvlab::Mat;
using curvlab::Vec;

inline double kronecker(int a, int b) { return a == b ? 1.0 : 0.0; }

// Gauss equation, one component at a time.
inline double gauss_component(double c, const std::vector<Mat>& ops, int i,
                              int j, int k, int l) {
  double v = c * (kronecker(i, l) * kronecker(j, k) -
                  kronecker(i, k) * kronecker(j, l));
  for (const Mat& a : ops) {
    v += a(i, l) * a(j, k) - a(i, k) * a(j, l);
  }
  return v;
}

inline Mat ricci_direct(const CurvTensor& R) {
  const int n = R.dim();
  Mat rho = Mat::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int a = 0; a < n; ++a) rho(i, j) += R(a, i, j, a);
    }
  }
  return rho;
}

inline Mat second_contraction_direct(const CurvTensor& R) {
  const int n = R.dim();
  Mat out = Mat::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      double s = 0.0;
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
          for (int c = 0; c < n; ++c) s += R(i, a, b, c) * R(j, a, b, c);
      out(i, j) = s;
    }
  }
  return out;
}

// Sectional value of the plane spanned by two arbitrary independent vectors.
inline double sectional_direct(const CurvTensor& R, const Vec& u,
                               const Vec& v) {
  const int n = R.dim();
  double num = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l)
          num += R(i, j, k, l) * u[i] * v[j] * v[k] * u[l];
  const double gram =
      u.squaredNorm() * v.squaredNorm() - std::pow(u.dot(v), 2);
  return num / gram;
}

// Worst deviation of the first Bianchi cyclic sum over all index quadruples.
inline double bianchi_defect(const CurvTensor& R) {
  const int n = R.dim();
  double worst = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          const double s = R(i, j, k, l) + R(i, k, l, j) + R(i, l, j, k);
          worst = std::max(worst, std::abs(s));
        }
  return worst;
}

inline std::vector<Mat> random_ops(int n, int p, std::mt19937_64& rng,
                                   double lo = -2.0, double hi = 2.0) {
  std::vector<Mat> ops;
  ops.reserve(p);
  for (int t = 0; t < p; ++t) ops.push_back(curvlab::random_symmetric(n, rng, lo, hi));
  return ops;
}

}  // namespace testsupport
