#pragma once

#include <cstdint>
#include <functional>

#include "curvlab/curvature.hpp"
#include "curvlab/linalg.hpp"

namespace curvlab {

// Minimum of the sectional value over all tangent planes, found by
// multi-start projected gradient descent on orthonormal pairs (u, v).
// Every coordinate plane is always included as a start, so the result never
// exceeds the best coordinate value; `restarts` counts additional random
// starts.  The reported pair is gauge-fixed: u is the normalized projection
// of the lowest-index coordinate direction meeting the plane, and the sign
// of v makes its first significant component positive.
struct PlaneMin {
  Vec u, v;
  double value = 0.0;
  int restarts_used = 0;
  bool converged = false;
  // gap between the best and the second-best distinct local value found;
  // +inf when every start reached the same value
  double spread = 0.0;
};

PlaneMin inf_sectional(const CurvTensor& R, int restarts = 64,
                       std::uint64_t seed = 0, double tol = 1e-7);

// Search for an orthonormal basis in which a 4-dimensional tensor has only
// sectional-type components and the three all-distinct-index components:
// everything of mixed type R(i,j,i,k), j != k, must vanish.  Q is built as
// exp of skew perturbations refined by Levenberg-Marquardt from random
// rotations; the residual is the Frobenius norm of the off-form components.
// Entries are read from the rotated tensor with the sectional convention
//   a = K_12, b = K_13, c = K_14, ap = K_34, bp = K_24, cp = K_23,
//   d = R(1,2,3,4), e = R(1,3,4,2),
// and the basis is canonicalized over the 24 coordinate relabelings so that
// (a, b, c, ap, bp, cp) is lexicographically maximal.
struct STBasisResult {
  Mat Q;
  double residual = 0.0;
  bool converged = false;
  double a = 0, b = 0, c = 0, ap = 0, bp = 0, cp = 0, d = 0, e = 0;
  bool relations_ok = false;  // a^2 = ap^2, b^2 = bp^2, c^2 = cp^2 to tol
  double relation_residual = 0.0;
};

STBasisResult singer_thorpe_search(const CurvTensor& R, std::uint64_t seed = 0,
                                   int restarts = 32, double tol = 1e-6);

// Dense Levenberg-Marquardt on a small nonlinear system with a central
// difference Jacobian.  Returns x with |residual(x)| <= tol (Euclidean);
// throws NoSolution when damping saturates before reaching it.
struct LMOptions {
  double tol = 1e-10;
  int max_iters = 200;
  double initial_lambda = 1e-3;
  double fd_step = 1e-6;
};

Vec refine_family_params(const std::function<Vec(const Vec&)>& residual,
                         const Vec& x0, const LMOptions& opts = {});

}  // namespace curvlab
