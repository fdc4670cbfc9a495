#pragma once

#include <utility>
#include <vector>

#include "cloak/geometry.hpp"

namespace cloak {

struct QuadPoint {
  Vec x;
  double w;
};

// Nodes and weights of the n-point Gauss-Legendre rule on [a, b].
std::vector<std::pair<double, double>> gauss_legendre(int n, double a, double b);

enum class RadialRule { Midpoint, Gauss };

struct ShellQuadOptions {
  int n_radial = 64;
  int n_angular = 256;  // azimuth samples (multiple of 4 keeps nodes off half-space cuts)
  int n_polar = 64;     // polar samples for 3D balls
  int n_extrude = 64;   // per extruded axis
  RadialRule rule = RadialRule::Midpoint;
};

// Product rule over {r_in <= region_distance <= r_out}, fitted to the
// components of geom: generalized polar coordinates on each ball part,
// tensor midpoints along extruded axes. r_in may be 0.
std::vector<QuadPoint> shell_quadrature(const AbcGeometry& geom, double r_in, double r_out,
                                        const ShellQuadOptions& opt = {});

}  // namespace cloak
