#pragma once

#include <vector>

#include "cloak/types.hpp"

namespace cloak {

// Bessel functions of integer order 0..M at x > 0, with derivatives.
struct BesselTable {
  std::vector<double> J, Y, dJ, dY;
};

// J by normalized downward recurrence, Y0/Y1 from the Neumann series in
// even-order J, higher Y by upward recurrence.
BesselTable bessel_table(int max_order, double x);

double bessel_j(int n, double x);
double bessel_y(int n, double x);
Complex hankel1(int n, double x);

}  // namespace cloak
