#include "curvlab/submanifold.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace curvlab {

ShapeOperatorSet::ShapeOperatorSet(int n, std::vector<Mat> ops, double tol)
    : n_(n), ops_(std::move(ops)) {
  if (n_ < 2) throw WrongDimension("submanifold dimension must be >= 2");
  if (ops_.empty()) throw BadArity("need at least one shape operator");
  for (const Mat& a : ops_) {
    if (a.rows() != n_ || a.cols() != n_)
      throw WrongDimension("shape operator must be n x n");
    if (!within(sup_norm(Mat(a - a.transpose())), tol, sup_norm(a)))
      throw NotSymmetric("shape operator must be symmetric");
  }
}

const Mat& ShapeOperatorSet::A(int t) const {
  if (t < 0 || t >= p()) throw IndexOutOfRange("normal index out of range");
  return ops_[t];
}

CurvTensor gauss_curvature(const AmbientSpace& amb, const ShapeOperatorSet& S) {
  const int n = S.n();
  if (amb.N != 0 && amb.N != n + S.p())
    throw DimensionMismatch("ambient dimension must equal n + p");
  auto d = [](int a, int b) { return a == b ? 1.0 : 0.0; };
  std::vector<double> comp(static_cast<std::size_t>(n) * n * n * n, 0.0);
  std::size_t idx = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l, ++idx) {
          double v = amb.c * (d(i, l) * d(j, k) - d(i, k) * d(j, l));
          for (const Mat& A : S.all())
            v += A(i, l) * A(j, k) - A(i, k) * A(j, l);
          comp[idx] = v;
        }
  return CurvTensor::from_components_unchecked(n, std::move(comp));
}

MeanCurvature mean_curvature(const ShapeOperatorSet& S) {
  MeanCurvature mc;
  mc.H = Vec(S.p());
  for (int t = 0; t < S.p(); ++t) mc.H[t] = S.A(t).trace() / S.n();
  mc.norm = mc.H.norm();
  return mc;
}

FlatnessResult normal_flatness(const ShapeOperatorSet& S, double tol) {
  double worst = 0.0;
  double scale = 0.0;
  for (int t = 0; t < S.p(); ++t) scale = std::max(scale, sup_norm(S.A(t)));
  for (int t = 0; t < S.p(); ++t)
    for (int s = t + 1; s < S.p(); ++s)
      worst = std::max(worst, sup_norm(Mat(S.A(t) * S.A(s) - S.A(s) * S.A(t))));
  return {within(worst, tol, scale * scale), worst};
}

EigenData joint_eigenbasis(const ShapeOperatorSet& S, double tol) {
  const int n = S.n(), p = S.p();
  const FlatnessResult fl = normal_flatness(S, tol);
  if (!fl.flat) {
    std::ostringstream os;
    os << "shape operators do not commute: worst commutator "
       << fl.max_commutator;
    throw NotCommuting(os.str());
  }

  // Refine an orthonormal basis operator by operator: diagonalize inside
  // each block of directions that is still degenerate for all earlier
  // operators, then split the block by eigenvalue clusters.
  Mat basis = Mat::Identity(n, n);
  std::vector<std::pair<int, int>> blocks{{0, n}};  // [begin, end)
  for (int t = 0; t < p; ++t) {
    std::vector<std::pair<int, int>> next;
    for (auto [b, e] : blocks) {
      const int m = e - b;
      if (m == 1) {
        next.emplace_back(b, e);
        continue;
      }
      Mat sub = basis.middleCols(b, m).transpose() * S.A(t) * basis.middleCols(b, m);
      Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (sub + sub.transpose()));
      // descending eigenvalue order inside the block
      Mat v(m, m);
      std::vector<double> vals(m);
      for (int i = 0; i < m; ++i) {
        v.col(i) = es.eigenvectors().col(m - 1 - i);
        vals[i] = es.eigenvalues()[m - 1 - i];
      }
      basis.middleCols(b, m) = basis.middleCols(b, m) * v;
      int start = 0;
      for (int i = 1; i <= m; ++i) {
        if (i == m || vals[i - 1] - vals[i] > kClusterGap) {
          next.emplace_back(b + start, b + i);
          start = i;
        }
      }
    }
    blocks = std::move(next);
  }

  // Deterministic signs: largest-magnitude entry of each direction positive.
  for (int i = 0; i < n; ++i) {
    int arg = 0;
    for (int r = 1; r < n; ++r)
      if (std::abs(basis(r, i)) > std::abs(basis(arg, i))) arg = r;
    if (basis(arg, i) < 0) basis.col(i) *= -1.0;
  }

  EigenData data;
  data.basis = basis;
  data.lambda.assign(p, std::vector<double>(n, 0.0));
  double scale = 0.0;
  double offdiag = 0.0;
  for (int t = 0; t < p; ++t) {
    Mat dt = basis.transpose() * S.A(t) * basis;
    scale = std::max(scale, sup_norm(S.A(t)));
    for (int i = 0; i < n; ++i) data.lambda[t][i] = dt(i, i);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (i != j) offdiag = std::max(offdiag, std::abs(dt(i, j)));
  }
  if (!within(offdiag, std::sqrt(tol), scale))
    throw NotCommuting("joint diagonalization failed");
  return data;
}

const char* to_string(DirectionLabel label) {
  switch (label) {
    case DirectionLabel::umbilical: return "umbilical";
    case DirectionLabel::quasi_umbilical: return "quasi-umbilical";
    case DirectionLabel::cylindrical: return "cylindrical";
    case DirectionLabel::generic: return "generic";
  }
  return "generic";
}

namespace {

DirectionLabel classify_one(const Mat& A, double tol, double gap) {
  const int n = static_cast<int>(A.rows());
  Eigen::SelfAdjointEigenSolver<Mat> es(A);
  std::vector<double> vals(es.eigenvalues().data(),
                           es.eigenvalues().data() + n);
  std::sort(vals.begin(), vals.end());
  const auto clusters = cluster_values(vals, gap);
  int best = 0;
  double best_mean = 0.0;
  for (const auto& cl : clusters) {
    double mean = 0.0;
    for (int idx : cl) mean += vals[idx];
    mean /= static_cast<double>(cl.size());
    if (static_cast<int>(cl.size()) > best) {
      best = static_cast<int>(cl.size());
      best_mean = mean;
    }
  }
  if (best >= n - 1 && within(std::abs(best_mean), tol))
    return DirectionLabel::cylindrical;
  if (best == n) return DirectionLabel::umbilical;
  if (best == n - 1) return DirectionLabel::quasi_umbilical;
  return DirectionLabel::generic;
}

// Distance of a symmetric matrix from "eigenvalue 0 with multiplicity
// >= n-1": sum of squares of all but the largest-magnitude eigenvalue.
double cylindrical_defect(const Mat& A) {
  Eigen::SelfAdjointEigenSolver<Mat> es(A);
  double worst = 0.0;
  double total = 0.0;
  for (int i = 0; i < A.rows(); ++i) {
    const double v = es.eigenvalues()[i];
    total += v * v;
    worst = std::max(worst, v * v);
  }
  return total - worst;
}

}  // namespace

DirectionReport classify_directions(const ShapeOperatorSet& S, double tol,
                                    double cluster_gap) {
  DirectionReport rep;
  rep.labels.reserve(S.p());
  for (int t = 0; t < S.p(); ++t)
    rep.labels.push_back(classify_one(S.A(t), tol, cluster_gap));

  if (S.p() == 2) {
    rep.tc_attempted = true;
    const Mat& A1 = S.A(0);
    const Mat& A2 = S.A(1);
    auto defect = [&](double theta) {
      const double c = std::cos(theta), s = std::sin(theta);
      return cylindrical_defect(c * A1 + s * A2) +
             cylindrical_defect(-s * A1 + c * A2);
    };
    const int steps = 720;
    double best_theta = 0.0, best = defect(0.0);
    for (int i = 1; i < steps; ++i) {
      const double theta = std::numbers::pi * i / steps;
      const double v = defect(theta);
      if (v < best) {
        best = v;
        best_theta = theta;
      }
    }
    // golden-section polish around the best grid angle
    double lo = best_theta - std::numbers::pi / steps;
    double hi = best_theta + std::numbers::pi / steps;
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
    double f1 = defect(x1), f2 = defect(x2);
    for (int it = 0; it < 80; ++it) {
      if (f1 < f2) {
        hi = x2; x2 = x1; f2 = f1;
        x1 = hi - gr * (hi - lo);
        f1 = defect(x1);
      } else {
        lo = x1; x1 = x2; f1 = f2;
        x2 = lo + gr * (hi - lo);
        f2 = defect(x2);
      }
    }
    rep.tc_angle = f1 < f2 ? x1 : x2;
    rep.tc_residual = std::sqrt(std::min(f1, f2));
    double scale = std::max(sup_norm(A1), sup_norm(A2));
    rep.totally_cylindrical = within(rep.tc_residual, tol, scale);
  }
  return rep;
}

ShapeOperatorSet chen_shape_operators(int n, int p, double a, double b,
                                      const std::vector<double>& c_list,
                                      const std::vector<double>& d_list) {
  if (n < 3) throw BadRange("need n >= 3");
  if (p < 1) throw BadRange("need p >= 1");
  if (static_cast<int>(c_list.size()) != p - 1 ||
      static_cast<int>(d_list.size()) != p - 1)
    throw BadArity("c_list and d_list must carry p - 1 entries");
  const double mu = a + b;
  std::vector<Mat> ops;
  Mat A1 = Mat::Zero(n, n);
  A1(0, 0) = a;
  A1(1, 1) = b;
  for (int i = 2; i < n; ++i) A1(i, i) = mu;
  ops.push_back(A1);
  for (int t = 0; t < p - 1; ++t) {
    Mat At = Mat::Zero(n, n);
    At(0, 0) = c_list[t];
    At(1, 1) = -c_list[t];
    At(0, 1) = d_list[t];
    At(1, 0) = d_list[t];
    ops.push_back(At);
  }
  return ShapeOperatorSet(n, std::move(ops));
}

}  // namespace curvlab
