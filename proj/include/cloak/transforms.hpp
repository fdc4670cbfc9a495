#pragma once

#include <memory>
#include <string>
#include <vector>

#include "cloak/geometry.hpp"

namespace cloak {

class MapPiece {
 public:
  virtual ~MapPiece() = default;
  virtual bool in_domain(const Vec& x) const = 0;
  virtual bool in_image(const Vec& y) const = 0;
  virtual Vec apply(const Vec& x) const = 0;
  virtual Vec apply_inverse(const Vec& y) const = 0;
  virtual Mat jacobian(const Vec& x) const = 0;
  virtual std::string name() const = 0;
  // True when the Jacobian is constant on the whole piece.
  virtual bool is_affine() const { return false; }
};

using PiecePtr = std::shared_ptr<const MapPiece>;

struct BlowupCoefficients {
  double A, B;
};

// rho = A + B r sends r = eps to r1 and fixes r2.
BlowupCoefficients blowup_coefficients(double r1, double r2, double eps);

// Radial (or, for a single ball axis, axial) blow-up of one geometry
// component: the shell eps <= |x|_c <= r2 onto r1 <= |y|_c <= r2.
class ShellBlowupPiece : public MapPiece {
 public:
  ShellBlowupPiece(Component comp, double r1, double r2, double eps);
  bool in_domain(const Vec& x) const override;
  bool in_image(const Vec& y) const override;
  Vec apply(const Vec& x) const override;
  Vec apply_inverse(const Vec& y) const override;
  Mat jacobian(const Vec& x) const override;
  std::string name() const override { return "shell"; }
  const BlowupCoefficients& coefficients() const { return k_; }

 private:
  Component c_;
  double r1_, r2_, eps_;
  BlowupCoefficients k_;
};

// Similarity x -> c + (r1/eps)(x - c) on the ball axes of a component,
// sending the component at radius eps onto the component at radius r1.
class InteriorScalingPiece : public MapPiece {
 public:
  InteriorScalingPiece(Component comp, double r1, double eps);
  bool in_domain(const Vec& x) const override;
  bool in_image(const Vec& y) const override;
  Vec apply(const Vec& x) const override;
  Vec apply_inverse(const Vec& y) const override;
  Mat jacobian(const Vec& x) const override;
  std::string name() const override { return "interior"; }
  bool is_affine() const override { return true; }

 private:
  Component c_;
  double r1_, eps_, ratio_;
};

// Identity, optionally restricted to the complement of a region.
class IdentityPiece : public MapPiece {
 public:
  explicit IdentityPiece(int dim, std::shared_ptr<const AbcGeometry> excluded = nullptr);
  bool in_domain(const Vec& x) const override;
  bool in_image(const Vec& y) const override { return in_domain(y); }
  Vec apply(const Vec& x) const override { return x; }
  Vec apply_inverse(const Vec& y) const override { return y; }
  Mat jacobian(const Vec&) const override { return identity(dim_); }
  std::string name() const override { return "identity"; }
  bool is_affine() const override { return true; }

 private:
  int dim_;
  std::shared_ptr<const AbcGeometry> excluded_;
};

class AffinePiece : public MapPiece {
 public:
  AffinePiece(Mat m, Vec t);
  bool in_domain(const Vec& x) const override { return x.size() == t_.size(); }
  bool in_image(const Vec& y) const override { return y.size() == t_.size(); }
  Vec apply(const Vec& x) const override { return m_ * x + t_; }
  Vec apply_inverse(const Vec& y) const override { return minv_ * (y - t_); }
  Mat jacobian(const Vec&) const override { return m_; }
  std::string name() const override { return "affine"; }
  bool is_affine() const override { return true; }

 private:
  Mat m_, minv_;
  Vec t_;
};

enum class MapLabel { FullCloak, AbcC, AbcD, AbcE, Custom };

// An invertible piecewise-smooth map. Pieces are consulted in order and the
// first whose domain (or image, for the inverse) contains the point wins;
// shells come before interiors, identity last.
class PiecewiseMap {
 public:
  PiecewiseMap(int dim, std::vector<PiecePtr> pieces, MapLabel label = MapLabel::Custom);

  static PiecewiseMap identity(int dim);
  static PiecewiseMap affine(const Mat& m, const Vec& t);
  static PiecewiseMap dilation(int dim, double factor);

  int dim() const { return dim_; }
  MapLabel label() const { return label_; }
  const std::vector<PiecePtr>& pieces() const { return pieces_; }

  // -1 when the point is outside the domain (image).
  int piece_index(const Vec& x) const;
  int image_piece_index(const Vec& y) const;
  bool in_domain(const Vec& x) const { return piece_index(x) >= 0; }
  bool in_image(const Vec& y) const { return image_piece_index(y) >= 0; }

  Vec eval(const Vec& x) const;
  Vec eval_inverse(const Vec& y) const;
  Mat jacobian(const Vec& x) const;
  const MapPiece& piece_at(const Vec& x) const;
  PiecewiseMap inverse() const;

 private:
  int dim_;
  std::vector<PiecePtr> pieces_;
  MapLabel label_;
};

PiecewiseMap compose(const PiecewiseMap& outer, const PiecewiseMap& inner);

// Shell blow-up of a geometry family from radius eps to r1, fixing radius r2;
// identity outside radius r2. With include_interior the radius-eps region is
// mapped onto radius r1 by the per-component similarities; without it the
// radius-eps region is outside the domain.
PiecewiseMap build_blowup_map(const AbcGeometry& family, double r1, double r2, double eps,
                              bool include_interior, MapLabel label = MapLabel::Custom);

// Radial blow-up of a weighted l^p ball around the origin (no interior piece).
PiecewiseMap build_radial_blowup(const WeightVector& w, NormKind p, double r1, double r2, double eps);

// Full-cloak map: radial blow-up plus interior similarity x -> (r1/eps) x.
PiecewiseMap build_full_cloak_map(const WeightVector& w, NormKind p, double r1, double r2, double eps);

struct AbcMapParams {
  double r1 = 1, r2 = 2, eps = 0.01, a = 1, b = 1;
  NormKind p = NormKind::L2, p_right = NormKind::L2;
  WeightVector w;  // defaults to ones
};

PiecewiseMap build_abc_map(GeometryKind kind, const AbcMapParams& params);

// The geometry family a map of the given kind is built on (at radius r).
AbcGeometry abc_geometry(GeometryKind kind, const AbcMapParams& params, double r);

}  // namespace cloak
