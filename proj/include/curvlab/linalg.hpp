#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace curvlab {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

inline constexpr double kDefaultTol = 1e-9;
inline constexpr double kClusterGap = 1e-7;  // absolute eigenvalue gap
inline constexpr double kRankTol = 1e-8;

// residual <= tol * max(1, scale).  All predicate flags in the library go
// through this so absolute and relative behaviour stay consistent.
inline bool within(double residual, double tol, double scale = 1.0) {
  return residual <= tol * std::max(1.0, scale);
}

inline double sup_norm(const Mat& m) {
  return m.cwiseAbs().maxCoeff();
}

// Deterministic stream splitting: one master seed, independent substreams.
inline std::mt19937_64 substream(std::uint64_t seed, std::uint64_t index) {
  // splitmix64 step keeps substreams decorrelated even for adjacent indices
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return std::mt19937_64(z ^ (z >> 31));
}

inline Mat random_symmetric(int n, std::mt19937_64& rng, double lo = -2.0,
                            double hi = 2.0) {
  std::uniform_real_distribution<double> dist(lo, hi);
  Mat a(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      a(i, j) = dist(rng);
      a(j, i) = a(i, j);
    }
  }
  return a;
}

// Haar-ish random rotation via QR of a Gaussian matrix, det fixed to +1.
inline Mat random_rotation(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Mat g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g(i, j) = gauss(rng);
  Eigen::HouseholderQR<Mat> qr(g);
  Mat q = qr.householderQ();
  Mat r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < n; ++i)
    if (r(i, i) < 0) q.col(i) *= -1.0;
  if (q.determinant() < 0) q.col(0) *= -1.0;
  return q;
}

// Sorted eigenvalues split into clusters by an absolute gap.
inline std::vector<std::vector<int>> cluster_values(const std::vector<double>& sorted_vals,
                                                    double gap) {
  std::vector<std::vector<int>> clusters;
  for (int i = 0; i < static_cast<int>(sorted_vals.size()); ++i) {
    if (clusters.empty() || sorted_vals[i] - sorted_vals[i - 1] > gap)
      clusters.emplace_back();
    clusters.back().push_back(i);
  }
  return clusters;
}

}  // namespace curvlab
