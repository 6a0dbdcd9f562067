#include <doctest.h>

#include <cmath>
#include <map>
#include <string>

#include "curvlab/conditions.hpp"
#include "curvlab/errors.hpp"
#include "curvlab/families.hpp"
#include "curvlab/submanifold.hpp"

using namespace curvlab;

namespace {

ConditionReport report_of(const FamilyInstance& inst, double tol = 1e-9) {
  return condition_report(inst.intrinsic, tol);
}

}  // namespace

TEST_CASE("product space forms") {
  // curvatures tuned so the balance condition holds without being Einstein
  FamilyInstance inst = product_space_form(2, std::sqrt(2.0), 3, -1.0);
  ConditionReport rep = report_of(inst);
  CHECK(rep.flags.weakly_einstein);
  CHECK_FALSE(rep.flags.einstein);
  CHECK(inst.expected.at("weakly_einstein"));
  CHECK_FALSE(inst.expected.at("einstein"));

  // equal factors: Einstein and balanced at once
  FamilyInstance round = product_space_form(2, 1.0, 2, 1.0);
  ConditionReport rrep = report_of(round);
  CHECK(rrep.flags.einstein);
  CHECK(rrep.flags.weakly_einstein);
  CHECK(round.intrinsic.sectional_entry(0, 1) == doctest::Approx(1.0));
  CHECK(round.intrinsic.sectional_entry(0, 2) == doctest::Approx(0.0));

  // Ricci balances while the quadratic invariant does not
  FamilyInstance ric = product_space_form(2, 2.0, 3, 1.0);
  ConditionReport rcrep = report_of(ric);
  CHECK(rcrep.flags.einstein);
  CHECK_FALSE(rcrep.flags.weakly_einstein);

  // generic mismatch keeps both conditions off
  FamilyInstance off = product_space_form(2, 2.0, 3, 0.5);
  ConditionReport orep = report_of(off);
  CHECK_FALSE(orep.flags.einstein);
  CHECK_FALSE(orep.flags.weakly_einstein);
  CHECK(orep.flags.semisymmetric);
}

TEST_CASE("isoparametric product hypersurfaces") {
  const double theta = std::atan(std::pow(0.25, 0.25));
  FamilyInstance inst = isoparametric_product_hypersurface(2, 5, theta, +1);
  REQUIRE(inst.shape.has_value());
  CHECK(inst.shape->n() == 7);
  CHECK(inst.shape->p() == 1);
  // principal curvatures cot(theta) and -tan(theta) with multiplicities 2, 5
  const double k1 = inst.params.at("kappa1");
  const double k2 = inst.params.at("kappa2");
  CHECK(k1 == doctest::Approx(1.0 / std::tan(theta)).epsilon(1e-12));
  CHECK(k2 == doctest::Approx(-std::tan(theta)).epsilon(1e-12));
  CHECK(k1 * k2 == doctest::Approx(-1.0).epsilon(1e-12));
  // tan^4(theta) = (p-1)/(q-1) puts the example on the balance locus
  CHECK(std::pow(std::tan(theta), 4) == doctest::Approx(0.25).epsilon(1e-12));
  ConditionReport rep = report_of(inst);
  CHECK(rep.flags.weakly_einstein);
  CHECK(rep.flags.semisymmetric);
  CHECK_FALSE(rep.flags.einstein);
  CHECK(inst.expected.at("weakly_einstein"));
  CHECK(inst.expected.at("semisymmetric"));

  // off the locus the balance fails but semisymmetry survives
  FamilyInstance off =
      isoparametric_product_hypersurface(2, 5, theta + 0.1, +1);
  ConditionReport orep = report_of(off);
  CHECK_FALSE(orep.flags.weakly_einstein);
  CHECK(orep.flags.semisymmetric);
  CHECK_FALSE(off.expected.at("weakly_einstein"));

  // hyperbolic counterpart with tanh^4(t) = (p-1)/(q-1)
  const double t = std::atanh(std::pow(0.25, 0.25));
  FamilyInstance hyp = isoparametric_product_hypersurface(2, 5, t, -1);
  ConditionReport hrep = report_of(hyp);
  CHECK(hrep.flags.weakly_einstein);
  CHECK(hrep.flags.semisymmetric);
  CHECK_FALSE(hrep.flags.einstein);
}

TEST_CASE("two block shape operator family") {
  FamilyInstance inst =
      chen_family(4, 2, 0.0, 0.5, 0.5, {std::sqrt(5.0) / 2.0}, {0.0});
  REQUIRE(inst.shape.has_value());
  const Mat& A1 = inst.shape->A(0);
  CHECK(A1(0, 0) == doctest::Approx(0.5));
  CHECK(A1(1, 1) == doctest::Approx(0.5));
  CHECK(A1(2, 2) == doctest::Approx(1.0));
  CHECK(A1(3, 3) == doctest::Approx(1.0));
  const Mat& A2 = inst.shape->A(1);
  CHECK(A2.trace() == doctest::Approx(0.0));
  CHECK(A2(0, 0) == doctest::Approx(std::sqrt(5.0) / 2.0));
  CHECK(inst.expected.at("chen_equality"));
  ConditionReport rep = report_of(inst);
  CHECK(rep.flags.weakly_einstein);
  CHECK_FALSE(rep.flags.einstein);

  CHECK_THROWS_AS(chen_family(4, 2, 0.0, 1.0, 1.0, {}, {}), BadArity);
  CHECK_THROWS_AS(chen_family(2, 1, 0.0, 1.0, 1.0, {}, {}), BadRange);
}

TEST_CASE("warped metrics over an interval") {
  FamilyInstance inst = warped_family(2.0, 1.0, 0.0, 4);
  CHECK(inst.params.at("kappa") == doctest::Approx(-0.25).epsilon(1e-14));
  ConditionReport rep = report_of(inst);
  CHECK(rep.flags.weakly_einstein);
  CHECK_FALSE(rep.flags.einstein);
  CHECK(inst.expected.at("weakly_einstein"));
  CHECK_FALSE(inst.expected.at("einstein"));

  // fp^2 = c collapses the fiber curvature and the metric goes flat
  FamilyInstance flat = warped_family(1.0, 1.0, 1.0, 3);
  CHECK(std::abs(flat.params.at("kappa")) <= 1e-14);
  CHECK(flat.expected.at("einstein"));
  CHECK(report_of(flat).flags.einstein);

  CHECK_THROWS_AS(warped_family(-1.0, 0.0, 1.0, 4), NonPositiveWarp);
  CHECK_THROWS_AS(warped_family(1.0, 0.0, 1.0, 1), BadRange);
}

TEST_CASE("diagonal families on a flat six dimensional background") {
  SUBCASE("rank two kind") {
    FamilyInstance inst = r6_family(
        23, {{"alpha", 1.0}, {"beta", 2.0}, {"sign", -1.0}, {"p", 1.0}});
    REQUIRE(inst.shape.has_value());
    const Mat& A2 = inst.shape->A(1);
    CHECK(A2(2, 2) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(A2(3, 3) == doctest::Approx(-2.0).epsilon(1e-10));
    ConditionReport rep = report_of(inst);
    CHECK(rep.flags.weakly_einstein);
    CHECK_FALSE(rep.flags.einstein);
    CHECK(quartic_check(inst) <= 1e-12);
    CHECK(curvature_operator(inst.intrinsic).rank == 2);
  }

  SUBCASE("rank four kind") {
    FamilyInstance inst = r6_family(24, {{"alpha", 1.0},
                                         {"beta", 1.0},
                                         {"gamma", 2.0},
                                         {"s", 1.0},
                                         {"sigma2", 1.0}});
    REQUIRE(inst.shape.has_value());
    CHECK(report_of(inst).flags.weakly_einstein);
    CHECK(quartic_check(inst) <= 1e-10);
    CHECK(curvature_operator(inst.intrinsic).rank == 4);
    CHECK(std::abs(inst.intrinsic.sectional_entry(0, 1)) <= 1e-12);
    CHECK(std::abs(inst.intrinsic.sectional_entry(2, 3)) <= 1e-12);
  }

  SUBCASE("alternating kind is Einstein in its symmetric form") {
    FamilyInstance e =
        r6_family(25, {{"alpha", 1.0}, {"form", 1.0}, {"b4", 0.5}});
    ConditionReport erep = report_of(e);
    CHECK(erep.flags.einstein);
    CHECK(erep.flags.weakly_einstein);
    CHECK(curvature_operator(e.intrinsic).rank == 6);

    FamilyInstance ne =
        r6_family(25, {{"alpha", 1.0}, {"form", 2.0}, {"b4", 0.5}});
    ConditionReport nrep = report_of(ne);
    CHECK(nrep.flags.weakly_einstein);
    CHECK_FALSE(nrep.flags.einstein);
  }

  SUBCASE("full rank kinds") {
    FamilyInstance k26 = r6_family(26, {{"alpha", 1.1},
                                        {"beta", 0.7},
                                        {"s3", 1.0},
                                        {"s4", -1.0},
                                        {"sigma3", 1.0},
                                        {"p", 1.0}});
    CHECK(report_of(k26).flags.weakly_einstein);
    CHECK(quartic_check(k26) <= 1e-9);
    CHECK(curvature_operator(k26.intrinsic).rank == 6);

    int solved = 0, rejected = 0;
    for (int s1 = -1; s1 <= 1; s1 += 2)
      for (int s2 = -1; s2 <= 1; s2 += 2)
        for (int s3 = -1; s3 <= 1; s3 += 2) {
          std::map<std::string, double> params = {
              {"alpha", 1.0},     {"beta", 1.0},
              {"gamma", 1.0},     {"delta", 1.0},
              {"sigma1", 1.0 * s1}, {"sigma2", 1.0 * s2},
              {"sigma3", 1.0 * s3}};
          try {
            FamilyInstance k27 = r6_family(27, params);
            ++solved;
            CHECK(report_of(k27).flags.weakly_einstein);
            CHECK(curvature_operator(k27.intrinsic).rank == 6);
          } catch (const NoSolution&) {
            ++rejected;
          }
        }
    // the sign pattern gates feasibility in both directions
    CHECK(solved >= 1);
    CHECK(rejected >= 1);
    CHECK(solved + rejected == 8);
  }
}

TEST_CASE("classification branches") {
  SUBCASE("flat ambient") {
    // totally geodesic point: the tensor vanishes outright
    BranchVerdict m = chen_branch(4, 1, 0.0, 0.0, 0.0, {}, {});
    CHECK(m.theorem == "euclidean");
    CHECK(m.branch == "(i)");
    CHECK(m.consistent);

    BranchVerdict v =
        chen_branch(4, 2, 0.0, 0.5, 0.5, {std::sqrt(5.0) / 2.0}, {0.0});
    CHECK(v.theorem == "euclidean");
    CHECK(v.branch == "(ii)");
    CHECK(v.consistent);
  }

  SUBCASE("curved ambient") {
    const double w = std::sqrt(2.0 / 3.0);
    BranchVerdict v = chen_branch(3, 1, -1.0, w, w, {}, {});
    CHECK(v.theorem == "nonflat");
    CHECK(v.branch == "(ii.b)");
    CHECK(v.consistent);

    BranchVerdict m =
        chen_branch(5, 1, 1.0, std::sqrt(2.0), -std::sqrt(2.0), {}, {});
    CHECK(m.theorem == "nonflat");
    CHECK(m.branch == "(i.b)");
    CHECK(m.consistent);
  }

  SUBCASE("rejects instances off the balance locus") {
    CHECK_THROWS_AS(chen_branch(4, 1, 1.0, 0.3, 0.9, {}, {}),
                    NotWeaklyEinstein);
  }
}

TEST_CASE("factory dispatch") {
  FamilyInstance inst = make_family(FamilyId::product, {});
  CHECK(inst.family_id == FamilyId::product);
  CHECK(report_of(inst).flags.weakly_einstein);

  FamilyInstance iso = make_family(FamilyId::isoparametric_sphere, {});
  CHECK(report_of(iso).flags.weakly_einstein);

  FamilyInstance chen = make_family(FamilyId::chen, {});
  REQUIRE(chen.shape.has_value());
  CHECK(chen.shape->n() == 4);

  CHECK(family_from_string("r6_25") == FamilyId::r6_25);
  CHECK(to_string(FamilyId::isoparametric_hyperbolic) ==
        "isoparametric_hyperbolic");
  CHECK_THROWS_AS(family_from_string("moebius"), SchemaError);
}

TEST_CASE("quartic certificate rejects off form tensors") {
  FamilyInstance inst =
      r6_family(23, {{"alpha", 1.0}, {"beta", 2.0}, {"sign", 1.0}});
  CHECK(quartic_check(inst) <= 1e-12);
  FamilyInstance other = product_space_form(2, 1.0, 2, 1.0);
  CHECK_THROWS_AS(quartic_check(other), FormMismatch);
}
