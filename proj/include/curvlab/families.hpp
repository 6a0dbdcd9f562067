#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "curvlab/conditions.hpp"
#include "curvlab/curvature.hpp"
#include "curvlab/submanifold.hpp"

namespace curvlab {

enum class FamilyId {
  product,
  isoparametric_sphere,
  isoparametric_hyperbolic,
  chen,
  warped,
  r6_23,
  r6_24,
  r6_25,
  r6_26,
  r6_27,
};

const char* to_string(FamilyId id);
FamilyId family_from_string(const std::string& s);

// A concrete point of a named family: resolved parameters, the extrinsic
// data when the family carries one, the induced (or intrinsic) tensor, and
// independently predicted condition flags that a report must reproduce.
struct FamilyInstance {
  FamilyId family_id = FamilyId::product;
  std::map<std::string, double> params;
  AmbientSpace ambient;
  std::optional<ShapeOperatorSet> shape;
  CurvTensor intrinsic;
  std::map<std::string, bool> expected;
};

// M1(c1) x M2(c2) as a curvature tensor; Einstein iff the factor Ricci
// values agree, (n1-1) c1 = (n2-1) c2, and the second contraction is
// isotropic iff c1^2 (n1-1) = c2^2 (n2-1).  One-dimensional factors carry
// zero curvature.
FamilyInstance product_space_form(int n1, double c1, int n2, double c2);

// Isoparametric product hypersurface with two curvature groups.
// ambient_sign = +1: principal curvatures (cot theta x p, -tan theta x q)
// in the unit sphere; the induced tensor is the product of spheres of
// curvature 1/sin^2 and 1/cos^2.  ambient_sign = -1: (coth theta x p,
// tanh theta x q) in hyperbolic space, product of a sphere of curvature
// 1/sinh^2 and a hyperbolic factor of curvature -1/cosh^2.  The isotropy
// criterion is tan^4 theta = (p-1)/(q-1) resp. tanh^4 theta = (p-1)/(q-1).
FamilyInstance isoparametric_product_hypersurface(int p, int q, double theta,
                                                  int ambient_sign);

FamilyInstance chen_family(int n, int p, double c, double a, double b,
                           const std::vector<double>& c_list,
                           const std::vector<double>& d_list);

FamilyInstance warped_family(double f, double fp, double c, int m);

// Classification of an extremal instance that is weakly Einstein.
// theorem: "euclidean" (c = 0) or "nonflat" (c != 0).  Branch labels are
// the case items of the corresponding classification:
//   c = 0:  "(i)" flat, "(ii)" a = b with pinned extremal value;
//   c != 0, p = 1: "(i.a)", "(i.b)" for c > 0, "(ii.a)".."(ii.c)" for c < 0;
//   c != 0, p >= 2: "(iii.a)".."(iii.c)" for c > 0, "(iv.a)".."(iv.c)".
// Throws NotWeaklyEinstein when the instance is not weakly Einstein.
struct BranchVerdict {
  std::string theorem;
  std::string branch;
  std::map<std::string, double> residuals;
  bool consistent = false;
};

BranchVerdict chen_branch(int n, int p, double c, double a, double b,
                          const std::vector<double>& c_list,
                          const std::vector<double>& d_list,
                          double tol = kDefaultTol);

// Four-dimensional codimension-two families over a flat ambient space with
// diagonal shape operators A1 = diag(a1..a4), A2 = diag(0, b2, b3, b4).
// kind selects the shape pattern (23..27); free parameters come in `params`
// (alpha, beta, gamma, delta, sign switches), dependent ones are resolved by
// Levenberg-Marquardt on the full componentwise constraint system and the
// result is certified isotropic by direct second-contraction computation.
// Throws NoSolution when the system is infeasible for the given signs.
FamilyInstance r6_family(int kind, const std::map<std::string, double>& params,
                         std::uint64_t seed = 0, double tol = 1e-9);

// Characteristic-polynomial check for the diagonal families above: a1 must
// be a root of x^4 - tr(A1^2) x^2 + |R|^2/8, and the discriminant identity
// tr(A1^2)^2 - |R|^2/2 = (a1^2 - a2^2 - a3^2 - a4^2)^2 must hold.  Returns
// the worst absolute defect; throws FormMismatch off the family form.
double quartic_check(const FamilyInstance& inst, double tol = kDefaultTol);

// Dispatch used by the scenario layer.
FamilyInstance make_family(FamilyId id,
                           const std::map<std::string, double>& params,
                           std::uint64_t seed = 0, double tol = 1e-9);

}  // namespace curvlab
