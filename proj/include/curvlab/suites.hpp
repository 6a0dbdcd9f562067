#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "curvlab/curvature.hpp"

namespace curvlab {

// One verification suite run: per-case detail lines plus a one-line summary.
// `pass` covers every check in the suite; failures keep their detail lines.
struct SuiteResult {
  int criterion = 0;
  std::string name;
  bool pass = false;
  double seconds = 0.0;
  std::vector<std::string> lines;
  std::string summary;
};

// Fixed-seed verification batteries, numbered 1..10.  Each is deterministic
// for a given seed and self-contained; see the implementations for the
// constructions and tolerances, which are pinned there rather than
// configurable.
SuiteResult run_criterion(int id, std::uint64_t seed = 0);
int criterion_count();

// Named suites exposed by the command line `verify` command; a subset of the
// criteria under stable ids.  Throws UnknownSuite for anything else.
const std::vector<std::string>& suite_ids();
SuiteResult run_suite(const std::string& id, std::uint64_t seed = 0);

// Reference minimizer for 3-dimensional tensors: dense enumeration over a
// Fibonacci net of plane normals followed by shrinking compass refinement.
// Independent of the gradient-based solver; used as its oracle.
double grid_min_sectional_3d(const CurvTensor& R, int points = 1000000);

}  // namespace curvlab
