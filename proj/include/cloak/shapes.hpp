#pragma once

#include <memory>
#include <string>
#include <vector>

#include "cloak/geometry.hpp"
#include "cloak/transforms.hpp"

namespace cloak {

// Regions used for obstacles, inclusions and source supports.
class Shape {
 public:
  virtual ~Shape() = default;
  virtual int dim() const = 0;
  virtual bool contains(const Vec& x) const = 0;
  virtual BoundingBox bbox() const = 0;
  virtual std::vector<Vec> boundary_samples(int n) const = 0;
  virtual std::string describe() const = 0;
  // Zero-thickness screens have no interior; the solver blocks the grid
  // links they cut.
  virtual bool is_screen() const { return false; }
  // Points of a regular lattice over the bounding box that lie inside.
  std::vector<Vec> interior_samples(int per_axis) const;
};

using ShapePtr = std::shared_ptr<const Shape>;

class BallShape : public Shape {
 public:
  BallShape(Vec center, double radius);
  int dim() const override { return static_cast<int>(c_.size()); }
  bool contains(const Vec& x) const override { return (x - c_).norm() <= r_; }
  BoundingBox bbox() const override;
  std::vector<Vec> boundary_samples(int n) const override;
  std::string describe() const override;
  const Vec& center() const { return c_; }
  double radius() const { return r_; }

 private:
  Vec c_;
  double r_;
};

class BoxShape : public Shape {
 public:
  BoxShape(Vec lo, Vec hi);
  int dim() const override { return static_cast<int>(lo_.size()); }
  bool contains(const Vec& x) const override;
  BoundingBox bbox() const override { return {lo_, hi_}; }
  std::vector<Vec> boundary_samples(int n) const override;
  std::string describe() const override;

 private:
  Vec lo_, hi_;
};

// Straight 2D screen from p0 to p1.
class SegmentShape : public Shape {
 public:
  SegmentShape(Vec p0, Vec p1);
  int dim() const override { return 2; }
  bool contains(const Vec&) const override { return false; }
  BoundingBox bbox() const override;
  std::vector<Vec> boundary_samples(int n) const override;
  std::string describe() const override;
  bool is_screen() const override { return true; }
  const Vec& p0() const { return p0_; }
  const Vec& p1() const { return p1_; }

 private:
  Vec p0_, p1_;
};

class GeometryShape : public Shape {
 public:
  explicit GeometryShape(AbcGeometry g) : g_(std::move(g)) {}
  int dim() const override { return g_.dim(); }
  bool contains(const Vec& x) const override { return g_.contains(x); }
  BoundingBox bbox() const override { return g_.bounding_box(); }
  std::vector<Vec> boundary_samples(int n) const override;
  std::string describe() const override;
  const AbcGeometry& geometry() const { return g_; }

 private:
  AbcGeometry g_;
};

// Preimage of a shape under a map: x is inside when map(x) is inside the
// wrapped shape.
class MappedShape : public Shape {
 public:
  MappedShape(ShapePtr inner, PiecewiseMap map);
  int dim() const override { return inner_->dim(); }
  bool contains(const Vec& x) const override;
  BoundingBox bbox() const override { return bbox_; }
  std::vector<Vec> boundary_samples(int n) const override;
  std::string describe() const override;

 private:
  ShapePtr inner_;
  PiecewiseMap map_;
  BoundingBox bbox_;
};

}  // namespace cloak
