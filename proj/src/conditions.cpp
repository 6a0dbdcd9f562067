#include "curvlab/conditions.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

namespace curvlab {

namespace {

// Full symmetrization of C_ijkl = sum_{a,b} comp(a,i,j,b) comp(b,k,l,a).
// Only the symmetrization matters for the quartic form X -> tr J_X^2.
std::vector<double> symmetrized_quartic(const CurvTensor& R) {
  const int n = R.dim();
  const std::size_t n4 = static_cast<std::size_t>(n) * n * n * n;
  std::vector<double> C(n4, 0.0);
  std::size_t idx = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l, ++idx) {
          double s = 0.0;
          for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) s += R(a, i, j, b) * R(b, k, l, a);
          C[idx] = s;
        }
  static constexpr std::array<std::array<int, 4>, 24> kPerms = {{
      {0, 1, 2, 3}, {0, 1, 3, 2}, {0, 2, 1, 3}, {0, 2, 3, 1}, {0, 3, 1, 2},
      {0, 3, 2, 1}, {1, 0, 2, 3}, {1, 0, 3, 2}, {1, 2, 0, 3}, {1, 2, 3, 0},
      {1, 3, 0, 2}, {1, 3, 2, 0}, {2, 0, 1, 3}, {2, 0, 3, 1}, {2, 1, 0, 3},
      {2, 1, 3, 0}, {2, 3, 0, 1}, {2, 3, 1, 0}, {3, 0, 1, 2}, {3, 0, 2, 1},
      {3, 1, 0, 2}, {3, 1, 2, 0}, {3, 2, 0, 1}, {3, 2, 1, 0},
  }};
  std::vector<double> S(n4, 0.0);
  idx = 0;
  std::array<int, 4> ix{};
  for (ix[0] = 0; ix[0] < n; ++ix[0])
    for (ix[1] = 0; ix[1] < n; ++ix[1])
      for (ix[2] = 0; ix[2] < n; ++ix[2])
        for (ix[3] = 0; ix[3] < n; ++ix[3], ++idx) {
          double s = 0.0;
          for (const auto& p : kPerms)
            s += C[((static_cast<std::size_t>(ix[p[0]]) * n + ix[p[1]]) * n +
                    ix[p[2]]) * n + ix[p[3]]];
          S[idx] = s / 24.0;
        }
  return S;
}

}  // namespace

ConditionReport condition_report(const CurvTensor& R, double tol) {
  const int n = R.dim();
  if (n < 2) throw WrongDimension("need dimension >= 2");
  const DerivedCurvature d = derive(R);
  ConditionReport rep;
  rep.tol = tol;
  rep.scale = std::max(1.0, d.normR2);

  const Mat id = Mat::Identity(n, n);
  rep.einstein_residual = sup_norm(Mat(d.rho - d.tau / n * id));
  rep.weakly_einstein_residual = sup_norm(Mat(d.checkR - d.normR2 / n * id));
  rep.semisym_residual = semisym_derivation_norm(R);

  TwoSteinReport& ts = rep.two_stein;
  ts.f1 = d.tau / n;
  ts.trace_residual = rep.einstein_residual;
  const std::vector<double> S = symmetrized_quartic(R);
  double trace2 = 0.0;  // sum_{i,j} Sym(C)_iijj
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      trace2 += S[((static_cast<std::size_t>(i) * n + i) * n + j) * n + j];
  ts.f2 = 3.0 * trace2 / (n * (n + 2.0));
  auto dd = [](int a, int b) { return a == b ? 1.0 : 0.0; };
  double worst = 0.0;
  std::size_t idx = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l, ++idx) {
          const double iso = (dd(i, j) * dd(k, l) + dd(i, k) * dd(j, l) +
                              dd(i, l) * dd(j, k)) / 3.0;
          worst = std::max(worst, std::abs(S[idx] - ts.f2 * iso));
        }
  ts.quartic_residual = worst;

  rep.flags.einstein = within(rep.einstein_residual, tol, rep.scale);
  rep.flags.weakly_einstein = within(rep.weakly_einstein_residual, tol, rep.scale);
  rep.flags.semisymmetric = within(rep.semisym_residual, tol, rep.scale);
  rep.flags.two_stein = rep.flags.einstein &&
                        within(ts.quartic_residual, tol, rep.scale);
  return rep;
}

std::pair<bool, double> we_hypersurface_eigencheck(
    const std::vector<double>& kappa, double c, double tol) {
  const int n = static_cast<int>(kappa.size());
  if (n < 3) throw WrongDimension("need n >= 3");
  double tr = 0.0, tr2 = 0.0;
  for (double k : kappa) {
    tr += k;
    tr2 += k * k;
  }
  double worst = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const double ki = kappa[i], kj = kappa[j];
      const double expr = (ki - kj) * (2.0 * c * tr +
                                       (ki + kj) * (-2.0 * c + tr2 - ki * ki - kj * kj));
      worst = std::max(worst, std::abs(expr));
    }
  // same scaling as the full-tensor predicate: |R|^2 of the induced tensor
  double normR2 = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const double kij = c + kappa[i] * kappa[j];
      normR2 += 4.0 * kij * kij;
    }
  return {within(worst, tol, std::max(1.0, normR2)), worst};
}

std::pair<bool, double> semisym_eigencheck(const std::vector<double>& kappa,
                                           double c, double tol) {
  const int n = static_cast<int>(kappa.size());
  if (n < 3) throw WrongDimension("need n >= 3");
  double worst = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      for (int l = 0; l < n; ++l) {
        if (l == i || l == j) continue;
        const double expr =
            (kappa[i] * kappa[j] + c) * (kappa[i] - kappa[j]) * kappa[l];
        worst = std::max(worst, std::abs(expr));
      }
    }
  double normR2 = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const double kij = c + kappa[i] * kappa[j];
      normR2 += 4.0 * kij * kij;
    }
  return {within(worst, tol, std::max(1.0, normR2)), worst};
}

TwoSteinReport two_stein_basis_report(const AmbientSpace& amb,
                                      const ShapeOperatorSet& S,
                                      double tol) {
  const int n = S.n(), p = S.p();
  const EigenData eig = joint_eigenbasis(S, tol);
  const CurvTensor R = gauss_curvature(amb, S);
  const DerivedCurvature der = derive(R);
  ConditionReport base = condition_report(R, tol);
  TwoSteinReport ts = base.two_stein;

  std::vector<double> trA(p), trAA(static_cast<std::size_t>(p) * p);
  for (int t = 0; t < p; ++t) {
    trA[t] = S.A(t).trace();
    for (int s = 0; s < p; ++s)
      trAA[static_cast<std::size_t>(t) * p + s] = (S.A(t) * S.A(s)).trace();
  }
  ts.basis_h1.assign(n, 0.0);
  ts.basis_h2.assign(n, 0.0);
  for (int i = 0; i < n; ++i) {
    double h1 = 0.0, h2 = 0.0;
    for (int t = 0; t < p; ++t) {
      const double lt = eig.lambda[t][i];
      h1 += trA[t] * lt - lt * lt;
      for (int s = 0; s < p; ++s) {
        const double ls = eig.lambda[s][i];
        const double prod = lt * ls;
        h2 += trAA[static_cast<std::size_t>(t) * p + s] * prod - prod * prod;
      }
    }
    ts.basis_h1[i] = h1;
    ts.basis_h2[i] = h2;
  }
  auto spread = [](const std::vector<double>& v) {
    const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    return *hi - *lo;
  };
  ts.basis_h1_spread = spread(ts.basis_h1);
  ts.basis_h2_spread = spread(ts.basis_h2);
  ts.h1 = std::accumulate(ts.basis_h1.begin(), ts.basis_h1.end(), 0.0) / n;
  ts.h2 = std::accumulate(ts.basis_h2.begin(), ts.basis_h2.end(), 0.0) / n;

  // the second contraction in the joint basis must match the per-direction
  // closed form 2 c^2 (n-1) + 4 c h1_i + 2 h2_i
  const Mat checkR_joint = eig.basis.transpose() * der.checkR * eig.basis;
  const double c = amb.c;
  double worst = 0.0;
  for (int i = 0; i < n; ++i) {
    const double closed =
        2.0 * c * c * (n - 1) + 4.0 * c * ts.basis_h1[i] + 2.0 * ts.basis_h2[i];
    worst = std::max(worst, std::abs(checkR_joint(i, i) - closed));
  }
  ts.checkR_consistency = worst;

  ts.h2_from_h1_residual = std::abs(
      ts.h2 - (der.normR2 / (2.0 * n) - c * c * (n - 1) - 2.0 * c * ts.h1));
  if (c != 0.0)
    ts.h1_from_h2_residual = std::abs(
        ts.h1 - (der.normR2 / n - 2.0 * c * c * (n - 1) - 2.0 * ts.h2) / (4.0 * c));
  return ts;
}

ChenReport chen_report(const AmbientSpace& amb, const ShapeOperatorSet& S,
                       const InfKOptions& opts, double tol) {
  const int n = S.n();
  const CurvTensor R = gauss_curvature(amb, S);
  const DerivedCurvature d = derive(R);
  ChenReport rep;
  rep.tau = d.tau;
  rep.mean_norm = mean_curvature(S).norm;
  rep.inf_plane = inf_sectional(R, opts.restarts, opts.seed, opts.tol);
  rep.inf_k = rep.inf_plane.value;
  rep.lhs = rep.tau / 2.0 - rep.inf_k;
  rep.rhs = n * n * (n - 2.0) / (2.0 * (n - 1.0)) * rep.mean_norm * rep.mean_norm +
            (n + 1.0) * (n - 2.0) * amb.c / 2.0;
  rep.gap = rep.rhs - rep.lhs;
  rep.equality = std::abs(rep.gap) <= tol * std::max(1.0, std::abs(rep.rhs));
  return rep;
}

}  // namespace curvlab
