#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "curvlab/curvature.hpp"
#include "curvlab/errors.hpp"
#include "curvlab/submanifold.hpp"
#include "test_support.hpp"

using namespace curvlab;

TEST_CASE("constant curvature pinned numbers") {
  const CurvTensor R = constant_curvature(4, 1.0);
  const DerivedCurvature der = derive(R);
  CHECK(sup_norm(Mat(der.rho - 3.0 * Mat::Identity(4, 4))) <= 1e-12);
  CHECK(der.tau == doctest::Approx(12.0).epsilon(1e-12));
  CHECK(sup_norm(Mat(der.checkR - 6.0 * Mat::Identity(4, 4))) <= 1e-12);
  CHECK(der.normR2 == doctest::Approx(24.0).epsilon(1e-12));
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      if (i != j) CHECK(R.sectional_entry(i, j) == doctest::Approx(1.0));
  CHECK(R.symmetry_residual() <= 1e-15);
}

TEST_CASE("berger residual vanishes on four-dimensional space forms") {
  for (double c : {-2.0, 0.5, 1.0}) {
    CHECK(sup_norm(berger_residual(constant_curvature(4, c))) <= 1e-12);
  }
  CHECK_THROWS_AS(berger_residual(constant_curvature(3, 1.0)),
                  WrongDimension);
}

TEST_CASE("component access and symmetries on random Gauss data") {
  auto rng = substream(7, 0);
  const auto ops = testsupport::random_ops(4, 2, rng);
  const CurvTensor R =
      gauss_curvature(AmbientSpace{-1.0, 6}, ShapeOperatorSet(4, ops));
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 4; ++l) {
          const double direct =
              testsupport::gauss_component(-1.0, ops, i, j, k, l);
          CHECK(R(i, j, k, l) == doctest::Approx(direct).epsilon(1e-13));
          CHECK(R(i, j, k, l) == doctest::Approx(-R(j, i, k, l)));
          CHECK(R(i, j, k, l) == doctest::Approx(R(k, l, i, j)));
        }
  CHECK(testsupport::bianchi_defect(R) <= 1e-12);
  CHECK(R.at(0, 1, 2, 3) == R(0, 1, 2, 3));
  CHECK_THROWS_AS(R.at(0, 1, 2, 4), IndexOutOfRange);
}

TEST_CASE("make_curvature propagates orbits and rejects violations") {
  // single sectional representative fills the whole orbit
  const CurvTensor R =
      make_curvature(3, {CurvEntry{0, 1, 1, 0, 2.5}});
  CHECK(R(0, 1, 1, 0) == doctest::Approx(2.5));
  CHECK(R(1, 0, 0, 1) == doctest::Approx(2.5));
  CHECK(R(0, 1, 0, 1) == doctest::Approx(-2.5));
  CHECK(R(0, 2, 2, 0) == 0.0);

  // conflicting orbit values
  CHECK_THROWS_AS(make_curvature(3, {CurvEntry{0, 1, 1, 0, 1.0},
                                     CurvEntry{1, 0, 0, 1, 2.0}}),
                  SymmetryViolation);
  // lone all-distinct component violates the cyclic identity
  CHECK_THROWS_AS(make_curvature(4, {CurvEntry{0, 1, 2, 3, 1.0}}),
                  SymmetryViolation);
  // a Bianchi-consistent completion is accepted
  const CurvTensor B = make_curvature(
      4, {CurvEntry{0, 1, 2, 3, 1.0}, CurvEntry{0, 2, 3, 1, 1.0},
          CurvEntry{0, 3, 1, 2, -2.0}});
  CHECK(testsupport::bianchi_defect(B) <= 1e-12);
  CHECK_THROWS_AS(make_curvature(1, {}), WrongDimension);
}

TEST_CASE("diagonal_type stores exactly the sectional data") {
  Mat K = Mat::Zero(4, 4);
  K(0, 1) = K(1, 0) = 2.0;
  K(2, 3) = K(3, 2) = -1.0;
  const CurvTensor R = diagonal_type(4, K);
  CHECK(R.sectional_entry(0, 1) == doctest::Approx(2.0));
  CHECK(R.sectional_entry(3, 2) == doctest::Approx(-1.0));
  CHECK(R.sectional_entry(0, 2) == 0.0);
  CHECK(R(0, 1, 2, 3) == 0.0);
  CHECK(R(0, 1, 1, 2) == 0.0);
}

TEST_CASE("direct_sum builds block tensors") {
  const CurvTensor A = constant_curvature(2, 1.0);
  const CurvTensor B = constant_curvature(3, -1.0);
  const CurvTensor R = direct_sum(A, B);
  CHECK(R.dim() == 5);
  CHECK(R.sectional_entry(0, 1) == doctest::Approx(1.0));
  CHECK(R.sectional_entry(2, 3) == doctest::Approx(-1.0));
  CHECK(R.sectional_entry(0, 2) == 0.0);
  CHECK(R.sectional_entry(1, 4) == 0.0);

  const CurvTensor same = direct_sum(CurvTensor(), A);
  CHECK(same.dim() == 2);
  CHECK(same.sectional_entry(0, 1) == doctest::Approx(1.0));
}

TEST_CASE("warped point tensor has the two pinned sectional values") {
  const CurvTensor R = warped_product_point(2.0, 1.0, 0.0, 4);
  CHECK(R.dim() == 5);
  for (int j = 1; j < 5; ++j)
    CHECK(R.sectional_entry(0, j) == doctest::Approx(0.25));
  for (int i = 1; i < 5; ++i)
    for (int j = i + 1; j < 5; ++j)
      CHECK(R.sectional_entry(i, j) == doctest::Approx(-0.25));
  const DerivedCurvature der = derive(R);
  CHECK(der.rho(0, 0) == doctest::Approx(1.0));
  for (int i = 1; i < 5; ++i)
    CHECK(der.rho(i, i) == doctest::Approx(-0.5));
  CHECK_THROWS_AS(warped_product_point(0.0, 1.0, 0.0, 4), NonPositiveWarp);
  CHECK_THROWS_AS(warped_product_point(1.0, 1.0, 0.0, 1), BadRange);
}

TEST_CASE("three-dimensional reconstruction from Ricci") {
  Mat rho = Mat::Zero(3, 3);
  rho(0, 0) = 5.0;
  const CurvTensor R = three_dim_from_ricci(rho);
  // K_ij = rho_ii + rho_jj - tau/2 in dimension three
  CHECK(R.sectional_entry(0, 1) == doctest::Approx(2.5));
  CHECK(R.sectional_entry(0, 2) == doctest::Approx(2.5));
  CHECK(R.sectional_entry(1, 2) == doctest::Approx(-2.5));
  const DerivedCurvature der = derive(R);
  CHECK(sup_norm(Mat(der.rho - rho)) <= 1e-12);
  // this Ricci produces an isotropic second contraction
  CHECK(sup_norm(Mat(der.checkR - (der.normR2 / 3.0) * Mat::Identity(3, 3))) <=
        1e-12);

  Mat rho2 = Mat::Zero(3, 3);
  rho2(0, 0) = 1.0;
  rho2(1, 1) = 2.0;
  const DerivedCurvature der2 = derive(three_dim_from_ricci(rho2));
  CHECK(der2.checkR(0, 0) == doctest::Approx(5.0));
  CHECK(der2.checkR(1, 1) == doctest::Approx(5.0));
  CHECK(der2.checkR(2, 2) == doctest::Approx(1.0));

  // round trip on a random symmetric Ricci
  auto rng = substream(11, 3);
  const Mat any = random_symmetric(3, rng);
  CHECK(sup_norm(Mat(derive(three_dim_from_ricci(any)).rho - any)) <= 1e-11);

  Mat bad = Mat::Zero(3, 3);
  bad(0, 1) = 1.0;  // not symmetric
  CHECK_THROWS_AS(three_dim_from_ricci(bad), NotSymmetric);
}

TEST_CASE("derive matches brute-force contractions") {
  auto rng = substream(13, 1);
  const auto ops = testsupport::random_ops(4, 2, rng);
  const CurvTensor R =
      gauss_curvature(AmbientSpace{1.0, 6}, ShapeOperatorSet(4, ops));
  const DerivedCurvature der = derive(R);
  CHECK(sup_norm(Mat(der.rho - testsupport::ricci_direct(R))) <= 1e-12);
  const Mat check = testsupport::second_contraction_direct(R);
  CHECK(sup_norm(Mat(der.checkR - check)) <= 1e-11);
  CHECK(der.normR2 == doctest::Approx(check.trace()).epsilon(1e-12));
  CHECK(der.tau == doctest::Approx(der.rho.trace()).epsilon(1e-12));
  CHECK(sup_norm(Mat(der.checkRho - der.rho * der.rho)) <= 1e-12);
}

TEST_CASE("sectional values and the Jacobi operator") {
  const CurvTensor R = constant_curvature(5, -2.0);
  auto rng = substream(17, 0);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int rep = 0; rep < 5; ++rep) {
    Vec u(5), v(5);
    for (int i = 0; i < 5; ++i) {
      u[i] = g(rng);
      v[i] = g(rng);
    }
    CHECK(sectional(R, u, v) == doctest::Approx(-2.0).epsilon(1e-10));
  }
  Vec u = Vec::Unit(5, 0);
  CHECK_THROWS_AS(sectional(R, u, Vec(2.0 * u)), DegeneratePlane);

  const auto ops = testsupport::random_ops(4, 1, rng);
  const CurvTensor G =
      gauss_curvature(AmbientSpace{0.0, 5}, ShapeOperatorSet(4, ops));
  Vec x(4);
  for (int i = 0; i < 4; ++i) x[i] = g(rng);
  const Mat J = jacobi(G, x);
  CHECK(sup_norm(Mat(J - J.transpose())) <= 1e-12);
  const Mat rho = testsupport::ricci_direct(G);
  CHECK(J.trace() == doctest::Approx(x.dot(rho * x)).epsilon(1e-10));
}

TEST_CASE("semisymmetry derivation norm") {
  CHECK(semisym_derivation_norm(constant_curvature(4, 2.0)) <= 1e-12);
  // product of space forms is semisymmetric
  const CurvTensor P =
      direct_sum(constant_curvature(2, 1.0), constant_curvature(2, -3.0));
  CHECK(semisym_derivation_norm(P) <= 1e-12);
  // generic hypersurface in the sphere is not
  Mat A = Mat::Zero(4, 4);
  A.diagonal() << 1.0, 2.0, 3.0, 4.0;
  const CurvTensor G =
      gauss_curvature(AmbientSpace{1.0, 5}, ShapeOperatorSet(4, {A}));
  CHECK(semisym_derivation_norm(G) > 1e-2);
}

TEST_CASE("curvature operator rank counts nonzero sectional pairs") {
  const CurvOperator full = curvature_operator(constant_curvature(4, 1.0));
  CHECK(full.dim2 == 6);
  CHECK(full.rank == 6);
  CHECK(sup_norm(Mat(full.mat - Mat::Identity(6, 6))) <= 1e-12);

  Mat K = Mat::Zero(4, 4);
  K(0, 1) = K(1, 0) = 2.0;
  K(2, 3) = K(3, 2) = -2.0;
  const CurvOperator two = curvature_operator(diagonal_type(4, K));
  CHECK(two.rank == 2);
  CHECK(two.singular_values.front() == doctest::Approx(2.0));
}
