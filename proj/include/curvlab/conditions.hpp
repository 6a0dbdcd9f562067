#pragma once

#include <utility>
#include <vector>

#include "curvlab/curvature.hpp"
#include "curvlab/solver.hpp"
#include "curvlab/submanifold.hpp"

namespace curvlab {

// Quartic direction dependence of the Jacobi operator.  The map
// X -> tr J_X^2 is the quartic form of C_ijkl = sum_{a,b} comp(a,i,j,b)
// comp(b,k,l,a); it is isotropic (= f2 |X|^4) exactly when the full
// symmetrization of C is f2 times the symmetrization of the metric square.
// f1, trace_residual capture the quadratic part tr J_X = f1 |X|^2, which is
// equivalent to the Einstein condition.
//
// basis_h1 / basis_h2 are populated only by two_stein_basis_report: the
// extrinsic per-direction sums over a joint eigenbasis of the shape
// operators,
//   h1_i = sum_t   (tr(A_t)        l_ti      - l_ti^2),
//   h2_i = sum_t,s (tr(A_t A_s)    l_ti l_si - (l_ti l_si)^2).
// Their spreads vanish on Einstein (h1) and 2-stein-type (h2) data; the
// residual fields cross-check the closed forms tying them to checkR.
struct TwoSteinReport {
  double f1 = 0.0;
  double f2 = 0.0;
  double trace_residual = 0.0;
  double quartic_residual = 0.0;
  std::vector<double> basis_h1;
  std::vector<double> basis_h2;
  double basis_h1_spread = 0.0;
  double basis_h2_spread = 0.0;
  double h1 = 0.0;  // means of the basis arrays
  double h2 = 0.0;
  // |checkR_ii - (2 c^2 (n-1) + 4 c h1_i + 2 h2_i)| over the joint basis
  double checkR_consistency = -1.0;
  // residual of h2 = |R|^2/(2n) - c^2 (n-1) - 2 c h1 (valid under
  // Einstein + weakly Einstein)
  double h2_from_h1_residual = -1.0;
  // residual of h1 = (|R|^2/n - 2 c^2 (n-1) - 2 h2) / (4c) (valid under
  // weakly Einstein + full quartic isotropy, c != 0)
  double h1_from_h2_residual = -1.0;
};

struct ConditionFlags {
  bool einstein = false;
  bool weakly_einstein = false;
  bool two_stein = false;  // trace and quartic residual both pass
  bool semisymmetric = false;
};

// Pointwise condition residuals of a curvature tensor.  Flags are
// residual <= tol * max(1, |R|^2).
struct ConditionReport {
  double einstein_residual = 0.0;        // sup |rho - (tau/n) Id|
  double weakly_einstein_residual = 0.0; // sup |checkR - (|R|^2/n) Id|
  double semisym_residual = 0.0;
  TwoSteinReport two_stein;
  double tol = kDefaultTol;
  double scale = 1.0;  // max(1, |R|^2)
  ConditionFlags flags;
};

ConditionReport condition_report(const CurvTensor& R, double tol = kDefaultTol);

// Hypersurface eigenvalue form of the weakly Einstein condition: for
// principal curvatures kappa and ambient curvature c the pair residual is
//   (k_i - k_j) (2 c tr(A) + (k_i + k_j)(-2c + tr(A^2) - k_i^2 - k_j^2)),
// twice of which equals checkR_ii - checkR_jj of the induced tensor.
// Returns (pass, worst absolute pair residual); pass compares against
// tol * max(1, |R|^2).
std::pair<bool, double> we_hypersurface_eigencheck(
    const std::vector<double>& kappa, double c, double tol = kDefaultTol);

// Eigenvalue form of semisymmetry for hypersurfaces: the worst value of
// (k_i k_j + c)(k_i - k_j) k_l over mutually distinct i, j, l, which equals
// the derivation sup-norm of the induced tensor.
std::pair<bool, double> semisym_eigencheck(const std::vector<double>& kappa,
                                           double c,
                                           double tol = kDefaultTol);

// Basis-level report for submanifolds with flat normal bundle; fills the
// basis_h1/basis_h2 machinery of TwoSteinReport on top of the intrinsic
// quantities of the induced tensor.
TwoSteinReport two_stein_basis_report(const AmbientSpace& amb,
                                      const ShapeOperatorSet& S,
                                      double tol = kDefaultTol);

// Extremality report: lhs = tau/2 - inf K against the mean curvature bound
//   rhs = n^2 (n-2) / (2 (n-1)) |H|^2 + (n+1)(n-2) c / 2.
struct ChenReport {
  double tau = 0.0;
  double inf_k = 0.0;
  double mean_norm = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
  double gap = 0.0;  // rhs - lhs, nonnegative up to solver accuracy
  bool equality = false;
  PlaneMin inf_plane;
};

struct InfKOptions {
  int restarts = 64;
  std::uint64_t seed = 0;
  double tol = 1e-7;
};

ChenReport chen_report(const AmbientSpace& amb, const ShapeOperatorSet& S,
                       const InfKOptions& opts = {},
                       double tol = kDefaultTol);

}  // namespace curvlab
