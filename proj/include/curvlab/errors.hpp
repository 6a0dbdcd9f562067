#pragma once

#include <stdexcept>
#include <string>

namespace curvlab {

// Base class for every error this library throws on bad input or on a
// solver that could not certify its result.  Callers that only need a
// coarse verdict can catch this and map it to an exit code.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Input shape / range problems.
class IndexOutOfRange : public Error {
 public:
  using Error::Error;
};
class WrongDimension : public Error {
 public:
  using Error::Error;
};
class DimensionMismatch : public Error {
 public:
  using Error::Error;
};
class BadArity : public Error {
 public:
  using Error::Error;
};
class BadRange : public Error {
 public:
  using Error::Error;
};
class SchemaError : public Error {
 public:
  using Error::Error;
};

// Semantic violations of a type's invariants.
class SymmetryViolation : public Error {
 public:
  using Error::Error;
};
class NotSymmetric : public Error {
 public:
  using Error::Error;
};
class DegeneratePlane : public Error {
 public:
  using Error::Error;
};
class NotCommuting : public Error {
 public:
  using Error::Error;
};
class NonPositiveWarp : public Error {
 public:
  using Error::Error;
};
class FormMismatch : public Error {
 public:
  using Error::Error;
};
class NotWeaklyEinstein : public Error {
 public:
  using Error::Error;
};

class UnknownSuite : public Error {
 public:
  using Error::Error;
};

// Solver outcomes.
class NoSolution : public Error {
 public:
  using Error::Error;
};
class NonConvergence : public Error {
 public:
  using Error::Error;
};

}  // namespace curvlab
