#pragma once

#include <vector>

#include "curvlab/errors.hpp"
#include "curvlab/linalg.hpp"

namespace curvlab {

// Algebraic curvature tensor at a point, stored densely over an orthonormal
// frame (the metric is the identity).  Component order is R(e_i,e_j,e_k,e_l)
// with the sign conventions
//
//   K_ij      = comp(i,j,j,i)                (sectional value of e_i ^ e_j)
//   rho_ij    = sum_a comp(a,i,j,a)          (Ricci)
//   constant_curvature(n,c):
//     comp(i,j,k,l) = c * (d_il d_jk - d_ik d_jl),
//
// so a round sphere of curvature c > 0 has K_ij = c and rho = (n-1) c Id.
// Factories validate the two antisymmetries, the pair symmetry and the first
// Bianchi identity; violations throw SymmetryViolation.
class CurvTensor {
 public:
  CurvTensor() = default;  // 0-dimensional identity element for direct_sum

  static CurvTensor zero(int n);
  // Takes ownership of a dense component array of size n^4 (row-major in
  // (i,j,k,l)) and validates all four symmetries against tol (relative to
  // the sup-norm of the components, floored at 1).
  static CurvTensor from_components(int n, std::vector<double> comp,
                                    double tol = kDefaultTol);
  // Trusted path for internal builders that construct symmetric data.
  static CurvTensor from_components_unchecked(int n, std::vector<double> comp);

  int dim() const { return n_; }
  double operator()(int i, int j, int k, int l) const {
    return comp_[((static_cast<std::size_t>(i) * n_ + j) * n_ + k) * n_ + l];
  }
  double at(int i, int j, int k, int l) const;  // bounds-checked
  const std::vector<double>& raw() const { return comp_; }

  double sectional_entry(int i, int j) const { return (*this)(i, j, j, i); }
  double sup() const;
  // Worst violation over antisymmetry (both pairs), pair symmetry, Bianchi.
  double symmetry_residual() const;
  void validate(double tol) const;

 private:
  int n_ = 0;
  std::vector<double> comp_;
};

struct CurvEntry {
  int i, j, k, l;
  double value;
};

// Derived pointwise quantities.  checkR is the full second-order contraction
//   checkR_ij = sum_{a,b,c} comp(i,a,b,c) * comp(j,a,b,c),
// so for tensors whose only nonzero components are sectional ones,
// checkR_ii = 2 * sum_j K_ij^2 (each component family appears twice in the
// triple sum).  All branch predicates in this library use this normalization
// consistently; only scale-invariant comparisons depend on it.
struct DerivedCurvature {
  Mat rho;        // Ricci
  double tau;     // scalar curvature = tr(rho)
  Mat checkR;     // second-order curvature contraction (see above)
  Mat checkRho;   // rho * rho
  Mat RofRho;     // R[rho]_ij = sum_{a,b} comp(i,a,b,j) rho_ab
  double normR2;  // |R|^2  = tr(checkR)
  double normRho2;  // |rho|^2 = tr(checkRho)
};

// Curvature operator on 2-forms: basis {e_i ^ e_j : i < j} ordered
// lexicographically, entry <(i,j),(k,l)> = -comp(i,j,k,l).
struct CurvOperator {
  int dim2 = 0;
  Mat mat;
  std::vector<double> singular_values;  // descending
  double rank_tol = kRankTol;
  int rank = 0;
};

// Builds the tensor from representative entries: each entry is propagated to
// its full symmetry orbit; conflicting assignments beyond tol and Bianchi
// violations throw SymmetryViolation.  Unspecified components are zero.
CurvTensor make_curvature(int n, const std::vector<CurvEntry>& entries,
                          double tol = kDefaultTol);

CurvTensor constant_curvature(int n, double c);

// Tensor whose only nonzero components are sectional: comp(i,j,j,i) = K(i,j)
// (plus symmetry images).  K must be symmetric with irrelevant diagonal.
CurvTensor diagonal_type(int n, const Mat& K);

// Block-diagonal combination; either argument may be 0-dimensional.
CurvTensor direct_sum(const CurvTensor& a, const CurvTensor& b);

// Pointwise curvature of I x_f B(c) at a point where the warping function
// takes value f > 0 and first derivative fp, with the generating ODE
// eliminating f'': K(dt, X) = (fp^2 - c) / f^2 and K(X, Y) = (c - fp^2) / f^2
// for base directions X, Y.  Index 0 is the interval direction; m = dim B.
CurvTensor warped_product_point(double f, double fp, double c, int m);

// n = 3 reconstruction: curvature is determined by Ricci,
//   R_ijkl = rho_il d_jk + rho_jk d_il - rho_ik d_jl - rho_jl d_ik
//            - (tau/2) (d_il d_jk - d_ik d_jl).
CurvTensor three_dim_from_ricci(const Mat& rho, double tol = kDefaultTol);

DerivedCurvature derive(const CurvTensor& R);

// K(u, v) = R(u,v,v,u) / (|u|^2 |v|^2 - <u,v>^2); throws DegeneratePlane when
// the Gram determinant is <= tol.
double sectional(const CurvTensor& R, const Vec& u, const Vec& v,
                 double tol = 1e-12);

// Jacobi operator of the direction x: J_ab = sum_{i,j} comp(a,i,j,b) x_i x_j.
// Symmetric; trace equals rho(x, x).
Mat jacobi(const CurvTensor& R, const Vec& x);

// Four-dimensional pointwise identity combining checkR, checkRho, R[rho] and
// rho; vanishes identically on curvature tensors realized by 4-manifolds.
// Returns the full left-hand-side matrix.
Mat berger_residual(const CurvTensor& R);

// Sup-norm of the curvature tensor acting on itself as a derivation,
//   (R(e_i,e_j) . R)(e_k,e_l) =
//     [R_ij, R_kl] - R(R_ij e_k, e_l) - R(e_k, R_ij e_l),
// taken over all index pairs; zero exactly for semisymmetric tensors.
double semisym_derivation_norm(const CurvTensor& R);

CurvOperator curvature_operator(const CurvTensor& R, double rank_tol = kRankTol);

}  // namespace curvlab
