#pragma once

#include <stdexcept>
#include <string>

#include "cloak/types.hpp"

namespace cloak {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed or out-of-range input: bad weights, radii out of order, a point
// outside a map's domain, an unparsable config.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

class UnsupportedFeature : public Error {
 public:
  using Error::Error;
};

// A scenario that violates one of the admissibility clauses. `clause` names
// the violated condition so callers can report it.
class AdmissibilityError : public Error {
 public:
  AdmissibilityError(std::string clause, const std::string& detail)
      : Error("admissibility (" + clause + "): " + detail), clause_(std::move(clause)) {}
  const std::string& clause() const { return clause_; }

 private:
  std::string clause_;
};

class SingularJacobian : public Error {
 public:
  SingularJacobian(const Vec& at, const std::string& detail) : Error(detail), at_(at) {}
  const Vec& location() const { return at_; }

 private:
  Vec at_;
};

class SolveError : public Error {
 public:
  SolveError(const std::string& detail, double residual) : Error(detail), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

}  // namespace cloak
