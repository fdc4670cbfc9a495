#include "cloak/transforms.hpp"

#include <cmath>

#include "cloak/errors.hpp"

namespace cloak {

BlowupCoefficients blowup_coefficients(double r1, double r2, double eps) {
  if (!(eps > 0 && eps <= r1 && r1 < r2)) throw InvalidInput("blow-up needs 0 < eps <= r1 < r2");
  return {(r1 - eps) * r2 / (r2 - eps), (r2 - r1) / (r2 - eps)};
}

// ---------------------------------------------------------------- shells

ShellBlowupPiece::ShellBlowupPiece(Component comp, double r1, double r2, double eps)
    : c_(std::move(comp)), r1_(r1), r2_(r2), eps_(eps), k_(blowup_coefficients(r1, r2, eps)) {}

bool ShellBlowupPiece::in_domain(const Vec& x) const {
  if (!c_.in_sector(x)) return false;
  double r = c_.ball_norm(x);
  return r >= eps_ * (1 - 1e-14) && r <= r2_ * (1 + 1e-14);
}

bool ShellBlowupPiece::in_image(const Vec& y) const {
  if (!c_.in_sector(y)) return false;
  double r = c_.ball_norm(y);
  return r >= r1_ * (1 - 1e-14) && r <= r2_ * (1 + 1e-14);
}

Vec ShellBlowupPiece::apply(const Vec& x) const {
  Vec v = c_.ball_offset(x);
  double r = c_.ball_norm(x);
  return x + (k_.A / r + k_.B - 1.0) * v;
}

Vec ShellBlowupPiece::apply_inverse(const Vec& y) const {
  Vec v = c_.ball_offset(y);
  double rho = c_.ball_norm(y);
  double r = (rho - k_.A) / k_.B;
  return y + (r / rho - 1.0) * v;
}

Mat ShellBlowupPiece::jacobian(const Vec& x) const {
  const int n = c_.dim();
  Vec v = c_.ball_offset(x);
  double r = c_.ball_norm(x);
  Vec grad = Vec::Zero(n);
  {
    // Gradient of the component norm, embedded in the full coordinates.
    const int m = static_cast<int>(c_.ball_axes.size());
    Vec sub(m), ws(m);
    for (int i = 0; i < m; ++i) {
      sub(i) = v(c_.ball_axes[i]);
      ws(i) = c_.w[c_.ball_axes[i]];
    }
    Vec g = weighted_norm_gradient(sub, WeightVector(ws), c_.p);
    for (int i = 0; i < m; ++i) grad(c_.ball_axes[i]) = g(i);
  }
  Mat j = identity(n);
  double s = k_.A / r + k_.B;
  for (int a : c_.ball_axes) j(a, a) = s;
  j -= (k_.A / (r * r)) * v * grad.transpose();
  return j;
}

// ------------------------------------------------------------- interiors

InteriorScalingPiece::InteriorScalingPiece(Component comp, double r1, double eps)
    : c_(std::move(comp)), r1_(r1), eps_(eps), ratio_(r1 / eps) {
  if (!(eps > 0 && eps <= r1)) throw InvalidInput("interior scaling needs 0 < eps <= r1");
}

bool InteriorScalingPiece::in_domain(const Vec& x) const {
  return c_.in_sector(x) && c_.ball_norm(x) <= eps_ * (1 + 1e-14);
}

bool InteriorScalingPiece::in_image(const Vec& y) const {
  return c_.in_sector(y) && c_.ball_norm(y) <= r1_ * (1 + 1e-14);
}

Vec InteriorScalingPiece::apply(const Vec& x) const { return x + (ratio_ - 1.0) * c_.ball_offset(x); }

Vec InteriorScalingPiece::apply_inverse(const Vec& y) const {
  return y + (1.0 / ratio_ - 1.0) * c_.ball_offset(y);
}

Mat InteriorScalingPiece::jacobian(const Vec&) const {
  Mat j = identity(c_.dim());
  for (int a : c_.ball_axes) j(a, a) = ratio_;
  return j;
}

// -------------------------------------------------------------- identity

IdentityPiece::IdentityPiece(int dim, std::shared_ptr<const AbcGeometry> excluded)
    : dim_(dim), excluded_(std::move(excluded)) {}

bool IdentityPiece::in_domain(const Vec& x) const {
  if (x.size() != dim_) return false;
  return !excluded_ || !excluded_->contains(x);
}

AffinePiece::AffinePiece(Mat m, Vec t) : m_(std::move(m)), t_(std::move(t)) {
  if (m_.rows() != m_.cols() || m_.rows() != t_.size()) throw InvalidInput("affine piece: shape mismatch");
  double det = m_.determinant();
  if (!(std::abs(det) > 0)) throw SingularJacobian(Vec::Zero(t_.size()), "affine piece is singular");
  minv_ = m_.inverse();
}

namespace {

class CompositePiece : public MapPiece {
 public:
  CompositePiece(PiecewiseMap outer, PiecewiseMap inner) : outer_(std::move(outer)), inner_(std::move(inner)) {}
  bool in_domain(const Vec& x) const override {
    int i = inner_.piece_index(x);
    if (i < 0) return false;
    return outer_.in_domain(inner_.pieces()[i]->apply(x));
  }
  bool in_image(const Vec& y) const override {
    int i = outer_.image_piece_index(y);
    if (i < 0) return false;
    return inner_.in_image(outer_.pieces()[i]->apply_inverse(y));
  }
  Vec apply(const Vec& x) const override { return outer_.eval(inner_.eval(x)); }
  Vec apply_inverse(const Vec& y) const override { return inner_.eval_inverse(outer_.eval_inverse(y)); }
  Mat jacobian(const Vec& x) const override { return outer_.jacobian(inner_.eval(x)) * inner_.jacobian(x); }
  std::string name() const override { return "composite"; }

 private:
  PiecewiseMap outer_, inner_;
};

class InvertedPiece : public MapPiece {
 public:
  explicit InvertedPiece(PiecewiseMap m) : m_(std::move(m)) {}
  bool in_domain(const Vec& y) const override { return m_.in_image(y); }
  bool in_image(const Vec& x) const override { return m_.in_domain(x); }
  Vec apply(const Vec& y) const override { return m_.eval_inverse(y); }
  Vec apply_inverse(const Vec& x) const override { return m_.eval(x); }
  Mat jacobian(const Vec& y) const override { return m_.jacobian(m_.eval_inverse(y)).inverse(); }
  std::string name() const override { return "inverse"; }

 private:
  PiecewiseMap m_;
};

}  // namespace

// ---------------------------------------------------------- PiecewiseMap

PiecewiseMap::PiecewiseMap(int dim, std::vector<PiecePtr> pieces, MapLabel label)
    : dim_(dim), pieces_(std::move(pieces)), label_(label) {
  if (dim < 2 || dim > 3) throw InvalidInput("maps are two- or three-dimensional");
  if (pieces_.empty()) throw InvalidInput("a map needs at least one piece");
}

PiecewiseMap PiecewiseMap::identity(int dim) {
  return PiecewiseMap(dim, {std::make_shared<IdentityPiece>(dim)});
}

PiecewiseMap PiecewiseMap::affine(const Mat& m, const Vec& t) {
  return PiecewiseMap(static_cast<int>(t.size()), {std::make_shared<AffinePiece>(m, t)});
}

PiecewiseMap PiecewiseMap::dilation(int dim, double factor) {
  if (!(factor > 0)) throw InvalidInput("dilation factor must be positive");
  return affine(factor * cloak::identity(dim), Vec::Zero(dim));
}

int PiecewiseMap::piece_index(const Vec& x) const {
  if (x.size() != dim_) throw InvalidInput("map: dimension mismatch");
  for (size_t i = 0; i < pieces_.size(); ++i)
    if (pieces_[i]->in_domain(x)) return static_cast<int>(i);
  return -1;
}

int PiecewiseMap::image_piece_index(const Vec& y) const {
  if (y.size() != dim_) throw InvalidInput("map: dimension mismatch");
  for (size_t i = 0; i < pieces_.size(); ++i)
    if (pieces_[i]->in_image(y)) return static_cast<int>(i);
  return -1;
}

const MapPiece& PiecewiseMap::piece_at(const Vec& x) const {
  int i = piece_index(x);
  if (i < 0) throw InvalidInput("point outside the map's domain");
  return *pieces_[i];
}

Vec PiecewiseMap::eval(const Vec& x) const { return piece_at(x).apply(x); }

Vec PiecewiseMap::eval_inverse(const Vec& y) const {
  int i = image_piece_index(y);
  if (i < 0) throw InvalidInput("point outside the map's image");
  return pieces_[i]->apply_inverse(y);
}

Mat PiecewiseMap::jacobian(const Vec& x) const { return piece_at(x).jacobian(x); }

PiecewiseMap PiecewiseMap::inverse() const {
  return PiecewiseMap(dim_, {std::make_shared<InvertedPiece>(*this)});
}

PiecewiseMap compose(const PiecewiseMap& outer, const PiecewiseMap& inner) {
  if (outer.dim() != inner.dim()) throw InvalidInput("compose: dimension mismatch");
  return PiecewiseMap(inner.dim(), {std::make_shared<CompositePiece>(outer, inner)});
}

// -------------------------------------------------------------- builders

PiecewiseMap build_blowup_map(const AbcGeometry& family, double r1, double r2, double eps,
                              bool include_interior, MapLabel label) {
  blowup_coefficients(r1, r2, eps);  // validates ordering
  AbcGeometry outer = family.with_radius(r2);
  std::vector<PiecePtr> pieces;
  for (const Component& c : outer.components())
    pieces.push_back(std::make_shared<ShellBlowupPiece>(c, r1, r2, eps));
  if (include_interior) {
    for (const Component& c : outer.components())
      pieces.push_back(std::make_shared<InteriorScalingPiece>(c, r1, eps));
  }
  pieces.push_back(std::make_shared<IdentityPiece>(outer.dim(), std::make_shared<AbcGeometry>(outer)));
  return PiecewiseMap(outer.dim(), std::move(pieces), label);
}

PiecewiseMap build_radial_blowup(const WeightVector& w, NormKind p, double r1, double r2, double eps) {
  auto g = AbcGeometry::point_nbhd(Vec::Zero(w.dim()), w, p, r2);
  return build_blowup_map(g, r1, r2, eps, false, MapLabel::Custom);
}

PiecewiseMap build_full_cloak_map(const WeightVector& w, NormKind p, double r1, double r2, double eps) {
  auto g = AbcGeometry::point_nbhd(Vec::Zero(w.dim()), w, p, r2);
  return build_blowup_map(g, r1, r2, eps, true, MapLabel::FullCloak);
}

AbcGeometry abc_geometry(GeometryKind kind, const AbcMapParams& prm, double r) {
  switch (kind) {
    case GeometryKind::C:
      return AbcGeometry::capsule(r, prm.a, prm.p, prm.p_right);
    case GeometryKind::D:
      return AbcGeometry::slender(prm.w.dim() == 3 ? prm.w : WeightVector::ones(3), r, prm.a, prm.p);
    case GeometryKind::E:
      return AbcGeometry::cushion(r, prm.a, prm.b, prm.p);
    default:
      throw InvalidInput("abc maps exist for kinds C, D and E only");
  }
}

PiecewiseMap build_abc_map(GeometryKind kind, const AbcMapParams& prm) {
  MapLabel label = kind == GeometryKind::C   ? MapLabel::AbcC
                   : kind == GeometryKind::D ? MapLabel::AbcD
                                             : MapLabel::AbcE;
  return build_blowup_map(abc_geometry(kind, prm, prm.r2), prm.r1, prm.r2, prm.eps, true, label);
}

}  // namespace cloak
