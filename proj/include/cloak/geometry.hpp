#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cloak/types.hpp"

namespace cloak {

enum class NormKind { L1, L2, Linf };

NormKind parse_norm(std::string_view s);
std::string to_string(NormKind p);

// Positive weights in (0, 1], one per coordinate.
class WeightVector {
 public:
  WeightVector() = default;
  explicit WeightVector(const Vec& entries);
  static WeightVector ones(int dim);

  int dim() const { return static_cast<int>(w_.size()); }
  double operator[](int i) const { return w_(i); }
  const Vec& entries() const { return w_; }
  double min() const { return w_.minCoeff(); }

 private:
  Vec w_;
};

// |x|_{w,p}: the l^p norm of (w_1 x_1, ..., w_N x_N).
double weighted_norm(const Vec& x, const WeightVector& w, NormKind p);
// Gradient of the weighted norm; a subgradient on ridges, zero at the origin.
Vec weighted_norm_gradient(const Vec& x, const WeightVector& w, NormKind p);

struct HalfSpace {
  int axis;
  int sign;  // keeps points with sign * (x[axis] - center[axis]) >= 0
};

struct Extent {
  int axis;
  double lo, hi;
};

// One building block of a region: a weighted l^p ball in the coordinates
// listed in ball_axes, optionally cut by half-spaces through its center, and
// extruded over the remaining coordinates. Radius 0 is allowed and gives the
// degenerate piece (a point, segment or rectangle).
struct Component {
  std::vector<int> ball_axes;
  Vec center;
  WeightVector w;
  NormKind p = NormKind::L2;
  double r = 0.0;
  std::vector<HalfSpace> halfspaces;
  std::vector<Extent> extrusion;

  int dim() const { return static_cast<int>(center.size()); }
  // x - center restricted to the ball axes (other coordinates zeroed).
  Vec ball_offset(const Vec& x) const;
  double ball_norm(const Vec& x) const;
  bool in_sector(const Vec& x) const;
  bool contains(const Vec& x) const { return in_sector(x) && ball_norm(x) <= r * (1 + 1e-14) + 1e-300; }
  Component with_radius(double r_new) const;
};

enum class GeometryKind { C, D, E, Box, PointNbhd };

std::string to_string(GeometryKind k);

struct DistanceConstants {
  double a;  // a * d <= region_distance
  double b;  // region_distance <= b * d
};

struct BoundingBox {
  Vec lo, hi;
  bool contains(const Vec& x, double slack = 0.0) const;
  BoundingBox expanded(double margin) const;
  static BoundingBox merge(const BoundingBox& a, const BoundingBox& b);
};

// The regions used as cloaked sets: capsule C in 2D, slender D and cushion E in
// 3D, an axis-aligned box, and weighted l^p balls around a point.
class AbcGeometry {
 public:
  static AbcGeometry capsule(double r, double a, NormKind p_left, NormKind p_right);
  static AbcGeometry slender(const WeightVector& w, double r, double a, NormKind p);
  static AbcGeometry cushion(double r, double a, double b, NormKind p);
  static AbcGeometry box(const Vec& lo, const Vec& hi);
  static AbcGeometry point_nbhd(const Vec& center, const WeightVector& w, NormKind p, double r);

  GeometryKind kind() const { return kind_; }
  int dim() const { return dim_; }
  double radius() const { return r_; }
  double a() const { return a_; }
  double b() const { return b_; }
  NormKind p() const { return p_; }
  NormKind p_right() const { return p_right_; }
  const WeightVector& weights() const { return w_; }
  const Vec& center() const { return center_; }
  const std::vector<Component>& components() const { return comps_; }

  AbcGeometry with_radius(double r) const;
  bool contains(const Vec& x) const;
  // Index of the first component containing x, or -1.
  int component_of(const Vec& x) const;
  BoundingBox bounding_box() const;

  // Weighted l^p distance to the core (the radius-0 member of the family),
  // normalized so that {region_distance <= r} is this geometry at radius r.
  double region_distance(const Vec& x) const;
  Vec region_distance_gradient(const Vec& x) const;
  DistanceConstants distance_constants() const;

 private:
  AbcGeometry() = default;
  void build();
  // Componentwise offset from the core, before weighting.
  Vec core_offset(const Vec& x) const;
  NormKind norm_at(const Vec& x) const;

  GeometryKind kind_ = GeometryKind::Box;
  int dim_ = 2;
  double r_ = 0, a_ = 0, b_ = 0;
  NormKind p_ = NormKind::L2, p_right_ = NormKind::L2;
  WeightVector w_;
  Vec center_, box_lo_, box_hi_;
  std::vector<Component> comps_;
};

// Restricted set of observation/incident directions {theta : |nu . theta| <= tau}.
struct ApertureSpec {
  Vec normal;
  double tau = 0.0;
};

bool in_aperture(const Vec& d, const ApertureSpec& ap);

}  // namespace cloak
