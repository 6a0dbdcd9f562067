#pragma once

#include <optional>
#include <vector>

#include "curvlab/curvature.hpp"
#include "curvlab/errors.hpp"
#include "curvlab/linalg.hpp"

namespace curvlab {

// Ambient space form of constant curvature c.  N is the ambient dimension;
// N = 0 means "derive from the shape operator set" (n + p).
struct AmbientSpace {
  double c = 0.0;
  int N = 0;
};

// Shape operators of an n-dimensional submanifold at a point, one symmetric
// n x n matrix per orthonormal normal direction.
class ShapeOperatorSet {
 public:
  ShapeOperatorSet(int n, std::vector<Mat> ops, double tol = kDefaultTol);

  int n() const { return n_; }
  int p() const { return static_cast<int>(ops_.size()); }
  const Mat& A(int t) const;
  const std::vector<Mat>& all() const { return ops_; }

 private:
  int n_;
  std::vector<Mat> ops_;
};

// Induced curvature tensor via the Gauss equation:
//   comp(i,j,k,l) = c (d_il d_jk - d_ik d_jl)
//                   + sum_t ((A_t)_il (A_t)_jk - (A_t)_ik (A_t)_jl).
CurvTensor gauss_curvature(const AmbientSpace& amb, const ShapeOperatorSet& S);

struct MeanCurvature {
  Vec H;        // components tr(A_t)/n per normal direction
  double norm;  // Euclidean norm of H
};
MeanCurvature mean_curvature(const ShapeOperatorSet& S);

struct FlatnessResult {
  bool flat;
  double max_commutator;  // sup-norm of the worst [A_t, A_s]
};
FlatnessResult normal_flatness(const ShapeOperatorSet& S,
                               double tol = kDefaultTol);

// Common orthonormal eigenbasis of a commuting shape operator set.
// basis column i is the i-th joint direction; lambda[t][i] its eigenvalue
// under A_t.  Directions are ordered by the tuple (lambda[1][i],
// lambda[2][i], ...) lexicographically descending.  Throws NotCommuting when
// the set is not simultaneously diagonalizable to tol.
struct EigenData {
  Mat basis;
  std::vector<std::vector<double>> lambda;
};
EigenData joint_eigenbasis(const ShapeOperatorSet& S, double tol = kDefaultTol);

// Per-normal-direction eigenvalue structure.  An operator is umbilical when
// all eigenvalues agree, cylindrical when 0 has multiplicity >= n-1 (total
// geodesy included), quasi-umbilical when some eigenvalue has multiplicity
// n-1, and generic otherwise.  Eigenvalues cluster by absolute gap.
enum class DirectionLabel { umbilical, quasi_umbilical, cylindrical, generic };

const char* to_string(DirectionLabel label);

struct DirectionReport {
  std::vector<DirectionLabel> labels;
  // p = 2 only: scan of the normal-frame rotation angle for a frame in which
  // both operators are cylindrical.
  bool tc_attempted = false;
  bool totally_cylindrical = false;
  double tc_angle = 0.0;
  double tc_residual = 0.0;
};
DirectionReport classify_directions(const ShapeOperatorSet& S,
                                    double tol = kDefaultTol,
                                    double cluster_gap = kClusterGap);

// Canonical extremal shape operator set: A_1 = diag(a, b, mu, ..., mu) with
// mu = a + b, and, for each further normal direction t, a traceless 2 x 2
// block [[c_t, d_t], [d_t, -c_t]] in the top-left corner.  c_list and d_list
// both carry p - 1 entries.
ShapeOperatorSet chen_shape_operators(int n, int p, double a, double b,
                                      const std::vector<double>& c_list,
                                      const std::vector<double>& d_list);

}  // namespace curvlab
