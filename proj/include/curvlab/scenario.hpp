#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "curvlab/conditions.hpp"
#include "curvlab/families.hpp"

namespace curvlab {

// A scenario file describes exactly one point datum: extrinsic shape data,
// an intrinsic component list, or a named family.  Parsing throws
// SchemaError on anything malformed; matrices are symmetry-checked by the
// usual constructors.
struct Scenario {
  double tolerance = 1e-9;
  std::uint64_t seed = 0;

  struct Extrinsic {
    AmbientSpace ambient;
    int submanifold_dim = 0;
    std::vector<Mat> shape_operators;
  };
  struct Intrinsic {
    int dim = 0;
    std::vector<CurvEntry> components;
  };
  struct Family {
    FamilyId family_id = FamilyId::product;
    std::map<std::string, double> params;
    std::uint64_t seed = 0;
  };

  std::optional<Extrinsic> extrinsic;
  std::optional<Intrinsic> intrinsic;
  std::optional<Family> family;
};

Scenario scenario_from_json(const std::string& text);
std::string scenario_to_json(const Scenario& s);
Scenario load_scenario(const std::string& path);

// Scenario for a family instance (used by `search` and `families emit`):
// the instance's extrinsic data when present, otherwise its intrinsic
// components, with the resolved parameters echoed alongside.
Scenario instance_scenario(const FamilyInstance& inst, double tolerance,
                           std::uint64_t seed);

struct EvalOptions {
  int restarts = 64;
  bool want_infk = false;  // force the plane search even without shape data
};

// Evaluated bundle for one scenario.
struct Report {
  Scenario scenario;
  ConditionReport conditions;
  TwoSteinReport two_stein;             // basis fields set with flat normal data
  std::optional<ChenReport> chen;       // needs shape data
  std::optional<BranchVerdict> branch;  // chen family scenarios only
  std::string branch_note;              // set when a branch was requested but skipped
  std::optional<PlaneMin> plane;
  std::map<std::string, double> timings;  // seconds per stage
};

Report evaluate(const Scenario& s, const EvalOptions& opts = {});

std::string report_to_json(const Report& r);
Report report_from_json(const std::string& text);
std::string report_to_text(const Report& r);

}  // namespace curvlab
