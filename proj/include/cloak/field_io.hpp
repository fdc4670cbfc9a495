#pragma once

#include <string>

#include "cloak/solver.hpp"

namespace cloak {

// .cfld: one line of JSON describing the grid, then nx*ny little-endian
// float64 (re, im) pairs in row-major order (x fastest).
void write_field(const std::string& path, const DiscreteField& f);
DiscreteField read_field(const std::string& path);

}  // namespace cloak
