#pragma once

#include <string>
#include <vector>

#include "cloak/geometry.hpp"
#include "cloak/scenario.hpp"

namespace cloak {

struct PmlProfile {
  int cells = 0;
  int order = 3;
  double r0 = 1e-8;  // target normal-incidence reflection
};

// Cell faces along one axis, PML cells included at both ends.
struct Axis {
  std::vector<double> faces;
  int pml_lo = 0, pml_hi = 0;
  double lo = 0, hi = 0;  // interior (non-PML) bounds

  int cells() const { return static_cast<int>(faces.size()) - 1; }
  double center(int i) const { return 0.5 * (faces[i] + faces[i + 1]); }
  double width(int i) const { return faces[i + 1] - faces[i]; }
  // Largest i with center(i) <= x, clamped to [0, cells-1].
  int locate_center(double x) const;
  bool in_pml(int i) const { return i < pml_lo || i >= cells() - pml_hi; }
  double max_interior_width() const;
  double min_width() const;
};

struct GridSpec {
  Vec lo, hi;           // interior box
  double h = 0.1;       // coarse cell size
  std::vector<AxisZone> zones;
  std::vector<double> x_breaks, y_breaks;  // coordinates that must be faces
  PmlProfile pml;
  double growth = 1.2;  // ratio between neighbouring cells when grading
};

class Grid {
 public:
  explicit Grid(const GridSpec& spec);
  // Square cells of size h on [lo, hi] with the given PML thickness in cells.
  static Grid uniform(const Vec& lo, const Vec& hi, double h, int pml_cells);

  const Axis& x() const { return x_; }
  const Axis& y() const { return y_; }
  const GridSpec& spec() const { return spec_; }
  int nx() const { return x_.cells(); }
  int ny() const { return y_.cells(); }
  long size() const { return static_cast<long>(nx()) * ny(); }
  long index(int i, int j) const { return static_cast<long>(j) * nx() + i; }
  double coarse() const { return spec_.h; }
  const PmlProfile& pml() const { return spec_.pml; }

  // Complex coordinate stretch at coordinate t on the given axis (0 or 1).
  Complex stretch(int axis, double t, double k) const;

  // Resolution and PML thickness checks; empty when both hold.
  std::vector<std::string> check(double k) const;

 private:
  GridSpec spec_;
  Axis x_, y_;
};

Axis build_axis(double lo, double hi, double h, const std::vector<AxisZone>& zones, int axis,
                std::vector<double> breaks, int pml_cells, double growth);

}  // namespace cloak
