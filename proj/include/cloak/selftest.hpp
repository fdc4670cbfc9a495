#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace cloak {

struct SuiteResult {
  std::string name;
  bool passed = false;
  int cases = 0;
  double worst = 0;  // largest observed error in the suite's own units
  double seconds = 0;
  std::string detail;
};

// PDE-free property suites: map round trips, boundary identity, Jacobians
// against finite differences, conserved integrals under push-forward, the
// lossy-layer validator, the Bessel Wronskian and Kirchhoff radius
// independence.
std::vector<SuiteResult> run_property_suites(std::uint64_t seed = 20240601);

nlohmann::json to_json(const std::vector<SuiteResult>& r);

}  // namespace cloak
