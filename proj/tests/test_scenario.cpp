#include <doctest.h>

#include <cmath>
#include <limits>

#include "curvlab/errors.hpp"
#include "curvlab/scenario.hpp"

using namespace curvlab;

TEST_CASE("extrinsic scenario round trip") {
  Scenario s;
  s.tolerance = 1e-8;
  s.seed = 17;
  Scenario::Extrinsic ext;
  ext.ambient = AmbientSpace{-1.0, 5};
  ext.submanifold_dim = 4;
  Mat a = 0.5 * Mat::Identity(4, 4);
  a(0, 1) = a(1, 0) = 0.125;
  ext.shape_operators = {a};
  s.extrinsic = std::move(ext);

  const Scenario back = scenario_from_json(scenario_to_json(s));
  CHECK(back.tolerance == s.tolerance);
  CHECK(back.seed == s.seed);
  REQUIRE(back.extrinsic.has_value());
  CHECK_FALSE(back.intrinsic.has_value());
  CHECK_FALSE(back.family.has_value());
  CHECK(back.extrinsic->ambient.c == -1.0);
  CHECK(back.extrinsic->ambient.N == 5);
  CHECK(back.extrinsic->submanifold_dim == 4);
  REQUIRE(back.extrinsic->shape_operators.size() == 1);
  // doubles survive serialization bit for bit
  CHECK(back.extrinsic->shape_operators[0](0, 1) == 0.125);
  CHECK(back.extrinsic->shape_operators[0](2, 2) == 0.5);
}

TEST_CASE("family scenario round trip") {
  Scenario s;
  Scenario::Family fam;
  fam.family_id = FamilyId::r6_24;
  fam.params = {{"alpha", 1.5}, {"beta", -0.25}};
  fam.seed = 3;
  s.family = std::move(fam);
  const Scenario back = scenario_from_json(scenario_to_json(s));
  REQUIRE(back.family.has_value());
  CHECK(back.family->family_id == FamilyId::r6_24);
  CHECK(back.family->params.at("alpha") == 1.5);
  CHECK(back.family->params.at("beta") == -0.25);
  CHECK(back.family->seed == 3);
}

TEST_CASE("instance scenarios pick the richest payload") {
  // shape data present: extrinsic, with the ambient dimension filled in
  FamilyInstance iso = make_family(FamilyId::isoparametric_sphere, {});
  Scenario se = instance_scenario(iso, 1e-9, 0);
  REQUIRE(se.extrinsic.has_value());
  CHECK(se.extrinsic->ambient.N == 8);
  CHECK(se.extrinsic->submanifold_dim == 7);

  // intrinsic-only instance: orbit representatives, i<j and k<l ordered
  FamilyInstance prod = product_space_form(2, std::sqrt(2.0), 3, -1.0);
  Scenario si = instance_scenario(prod, 1e-9, 0);
  REQUIRE(si.intrinsic.has_value());
  CHECK(si.intrinsic->dim == 5);
  CHECK_FALSE(si.intrinsic->components.empty());
  for (const CurvEntry& e : si.intrinsic->components) {
    CHECK(e.i < e.j);
    CHECK(e.k < e.l);
    CHECK((e.k > e.i || (e.k == e.i && e.l >= e.j)));
    CHECK(e.value != 0.0);
  }
  // the components rebuild the same tensor
  Report rep = evaluate(si);
  CHECK(rep.conditions.flags.weakly_einstein);
  CHECK_FALSE(rep.conditions.flags.einstein);
  CHECK(rep.timings.count("build") == 1);
  CHECK(rep.timings.count("conditions") == 1);
}

TEST_CASE("evaluating a chen family scenario attaches bound and branch") {
  Scenario s;
  Scenario::Family fam;
  fam.family_id = FamilyId::chen;
  fam.params = {{"n", 4.0}, {"p", 2.0}, {"c", 0.0},
                {"a", 0.5}, {"b", 0.5}, {"c2", std::sqrt(5.0) / 2.0},
                {"d2", 0.0}};
  s.family = std::move(fam);

  Report rep = evaluate(s);
  CHECK(rep.conditions.flags.weakly_einstein);
  REQUIRE(rep.chen.has_value());
  CHECK(rep.chen->equality);
  REQUIRE(rep.branch.has_value());
  CHECK(rep.branch->theorem == "euclidean");
  CHECK(rep.branch->branch == "(ii)");
  CHECK(rep.branch->consistent);
  CHECK(rep.branch_note.empty());
  // the shape operators commute, so the basis-level report is attached
  CHECK_FALSE(rep.two_stein.basis_h1.empty());
  REQUIRE(rep.plane.has_value());
  CHECK(rep.plane->value == doctest::Approx(-1.0).epsilon(1e-7));

  // off the balance locus: evaluation still works, branch gets a note
  Scenario bad = s;
  bad.family->params["a"] = 0.3;
  bad.family->params["b"] = 0.9;
  Report brep = evaluate(bad);
  CHECK_FALSE(brep.conditions.flags.weakly_einstein);
  CHECK_FALSE(brep.branch.has_value());
  CHECK_FALSE(brep.branch_note.empty());
}

TEST_CASE("report json round trip") {
  FamilyInstance iso = make_family(FamilyId::isoparametric_sphere, {});
  Scenario s = instance_scenario(iso, 1e-9, 5);
  Report rep = evaluate(s);
  Report back = report_from_json(report_to_json(rep));

  CHECK(back.conditions.flags.weakly_einstein ==
        rep.conditions.flags.weakly_einstein);
  CHECK(back.conditions.flags.einstein == rep.conditions.flags.einstein);
  CHECK(back.conditions.einstein_residual == rep.conditions.einstein_residual);
  CHECK(back.conditions.scale == rep.conditions.scale);
  CHECK(back.two_stein.quartic_residual == rep.two_stein.quartic_residual);
  CHECK(back.two_stein.basis_h1 == rep.two_stein.basis_h1);
  REQUIRE(back.chen.has_value());
  CHECK(back.chen->gap == rep.chen->gap);
  CHECK(back.chen->equality == rep.chen->equality);
  REQUIRE(back.plane.has_value());
  CHECK(back.plane->value == rep.plane->value);
  CHECK(back.plane->u.size() == rep.plane->u.size());
  CHECK(back.timings == rep.timings);
  CHECK_FALSE(back.branch.has_value());

  const std::string text = report_to_text(rep);
  CHECK(text.find("weakly einstein   yes") != std::string::npos);
  CHECK(text.find("chen bound") != std::string::npos);
}

TEST_CASE("infinite spreads survive serialization as null") {
  Scenario s;
  Scenario::Intrinsic in;
  in.dim = 3;
  in.components = {{0, 1, 0, 1, -2.0}, {0, 2, 0, 2, -2.0}, {1, 2, 1, 2, -2.0}};
  s.intrinsic = std::move(in);

  EvalOptions opts;
  opts.want_infk = true;
  opts.restarts = 8;
  Report rep = evaluate(s, opts);
  REQUIRE(rep.plane.has_value());
  CHECK(rep.plane->value == doctest::Approx(2.0).epsilon(1e-9));
  REQUIRE_FALSE(std::isfinite(rep.plane->spread));

  Report back = report_from_json(report_to_json(rep));
  REQUIRE(back.plane.has_value());
  CHECK_FALSE(std::isfinite(back.plane->spread));
  CHECK(back.plane->spread > 0);
}

TEST_CASE("malformed scenarios are rejected") {
  CHECK_THROWS_AS(scenario_from_json("not json"), SchemaError);
  CHECK_THROWS_AS(scenario_from_json("[1,2,3]"), SchemaError);
  // no payload
  CHECK_THROWS_AS(scenario_from_json("{\"tolerance\": 1e-9}"), SchemaError);
  // two payloads at once
  CHECK_THROWS_AS(
      scenario_from_json(
          "{\"family\": {\"family_id\": \"product\"},"
          " \"intrinsic\": {\"dim\": 3, \"components\": []}}"),
      SchemaError);
  // unknown family id
  CHECK_THROWS_AS(
      scenario_from_json("{\"family\": {\"family_id\": \"torus\"}}"),
      SchemaError);
  // component rows must have five entries
  CHECK_THROWS_AS(
      scenario_from_json(
          "{\"intrinsic\": {\"dim\": 3, \"components\": [[0,1,0,1]]}}"),
      SchemaError);
  // shape operators must match the declared dimension
  CHECK_THROWS_AS(
      scenario_from_json(
          "{\"extrinsic\": {\"ambient\": {\"dim\": 4, \"curvature\": 0},"
          " \"submanifold_dim\": 3, \"shape_operators\": [[[1,0],[0,1]]]}}"),
      SchemaError);
  CHECK_THROWS_AS(load_scenario("/nonexistent/scenario.json"), SchemaError);

  // structurally valid input with a skew operator fails at evaluation
  Scenario s = scenario_from_json(
      "{\"extrinsic\": {\"ambient\": {\"dim\": 4, \"curvature\": 0},"
      " \"submanifold_dim\": 3,"
      " \"shape_operators\": [[[0,1,0],[-1,0,0],[0,0,0]]]}}");
  CHECK_THROWS_AS(evaluate(s), NotSymmetric);
}
