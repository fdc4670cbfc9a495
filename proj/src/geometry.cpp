#include "cloak/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cloak/errors.hpp"

namespace cloak {

NormKind parse_norm(std::string_view s) {
  if (s == "1") return NormKind::L1;
  if (s == "2") return NormKind::L2;
  if (s == "inf" || s == "Inf" || s == "infinity") return NormKind::Linf;
  throw InvalidInput("unknown norm '" + std::string(s) + "' (expected 1, 2 or inf)");
}

std::string to_string(NormKind p) {
  switch (p) {
    case NormKind::L1: return "1";
    case NormKind::L2: return "2";
    case NormKind::Linf: return "inf";
  }
  return "?";
}

std::string to_string(GeometryKind k) {
  switch (k) {
    case GeometryKind::C: return "C";
    case GeometryKind::D: return "D";
    case GeometryKind::E: return "E";
    case GeometryKind::Box: return "Box";
    case GeometryKind::PointNbhd: return "PointNbhd";
  }
  return "?";
}

WeightVector::WeightVector(const Vec& entries) : w_(entries) {
  if (w_.size() < 1 || w_.size() > 3) throw InvalidInput("weight vector must have 1 to 3 entries");
  for (Eigen::Index i = 0; i < w_.size(); ++i) {
    if (!(w_(i) > 0.0 && w_(i) <= 1.0)) throw InvalidInput("weights must lie in (0, 1]");
  }
}

WeightVector WeightVector::ones(int dim) { return WeightVector(Vec::Ones(dim)); }

double weighted_norm(const Vec& x, const WeightVector& w, NormKind p) {
  if (x.size() != w.dim()) throw InvalidInput("weighted_norm: dimension mismatch");
  double acc = 0.0;
  for (int l = 0; l < w.dim(); ++l) {
    double t = std::abs(w[l] * x(l));
    switch (p) {
      case NormKind::L1: acc += t; break;
      case NormKind::L2: acc += t * t; break;
      case NormKind::Linf: acc = std::max(acc, t); break;
    }
  }
  return p == NormKind::L2 ? std::sqrt(acc) : acc;
}

Vec weighted_norm_gradient(const Vec& x, const WeightVector& w, NormKind p) {
  const int n = w.dim();
  Vec g = Vec::Zero(n);
  double nrm = weighted_norm(x, w, p);
  if (nrm == 0.0) return g;
  switch (p) {
    case NormKind::L2:
      for (int l = 0; l < n; ++l) g(l) = w[l] * w[l] * x(l) / nrm;
      break;
    case NormKind::L1:
      for (int l = 0; l < n; ++l) g(l) = x(l) > 0 ? w[l] : (x(l) < 0 ? -w[l] : 0.0);
      break;
    case NormKind::Linf: {
      int best = 0;
      for (int l = 1; l < n; ++l)
        if (std::abs(w[l] * x(l)) > std::abs(w[best] * x(best))) best = l;
      g(best) = x(best) > 0 ? w[best] : -w[best];
      break;
    }
  }
  return g;
}

// ---------------------------------------------------------------- Component

Vec Component::ball_offset(const Vec& x) const {
  Vec d = Vec::Zero(dim());
  for (int a : ball_axes) d(a) = x(a) - center(a);
  return d;
}

double Component::ball_norm(const Vec& x) const {
  if (ball_axes.empty()) return 0.0;
  Vec sub(static_cast<Eigen::Index>(ball_axes.size()));
  Vec ws(sub.size());
  for (size_t i = 0; i < ball_axes.size(); ++i) {
    sub(i) = x(ball_axes[i]) - center(ball_axes[i]);
    ws(i) = w[ball_axes[i]];
  }
  return weighted_norm(sub, WeightVector(ws), p);
}

bool Component::in_sector(const Vec& x) const {
  for (const auto& h : halfspaces)
    if (h.sign * (x(h.axis) - center(h.axis)) < 0) return false;
  for (const auto& e : extrusion)
    if (x(e.axis) < e.lo || x(e.axis) > e.hi) return false;
  return true;
}

Component Component::with_radius(double r_new) const {
  Component c = *this;
  c.r = r_new;
  return c;
}

// -------------------------------------------------------------- BoundingBox

bool BoundingBox::contains(const Vec& x, double slack) const {
  for (Eigen::Index i = 0; i < x.size(); ++i)
    if (x(i) < lo(i) - slack || x(i) > hi(i) + slack) return false;
  return true;
}

BoundingBox BoundingBox::expanded(double margin) const {
  return {lo.array() - margin, hi.array() + margin};
}

BoundingBox BoundingBox::merge(const BoundingBox& a, const BoundingBox& b) {
  return {a.lo.cwiseMin(b.lo), a.hi.cwiseMax(b.hi)};
}

// -------------------------------------------------------------- AbcGeometry

AbcGeometry AbcGeometry::capsule(double r, double a, NormKind p_left, NormKind p_right) {
  if (!(r > 0) || !(a > 0)) throw InvalidInput("capsule needs r > 0 and a > 0");
  AbcGeometry g;
  g.kind_ = GeometryKind::C;
  g.dim_ = 2;
  g.r_ = r;
  g.a_ = a;
  g.p_ = p_left;
  g.p_right_ = p_right;
  g.w_ = WeightVector::ones(2);
  g.center_ = Vec::Zero(2);
  g.build();
  return g;
}

AbcGeometry AbcGeometry::slender(const WeightVector& w, double r, double a, NormKind p) {
  if (!(r > 0) || !(a > 0)) throw InvalidInput("slender geometry needs r > 0 and a > 0");
  if (w.dim() != 3) throw InvalidInput("slender geometry is three-dimensional");
  AbcGeometry g;
  g.kind_ = GeometryKind::D;
  g.dim_ = 3;
  g.r_ = r;
  g.a_ = a;
  g.p_ = g.p_right_ = p;
  g.w_ = w;
  g.center_ = Vec::Zero(3);
  g.build();
  return g;
}

AbcGeometry AbcGeometry::cushion(double r, double a, double b, NormKind p) {
  if (!(r > 0) || !(a > 0) || !(b > 0)) throw InvalidInput("cushion needs r, a, b > 0");
  AbcGeometry g;
  g.kind_ = GeometryKind::E;
  g.dim_ = 3;
  g.r_ = r;
  g.a_ = a;
  g.b_ = b;
  g.p_ = g.p_right_ = p;
  g.w_ = WeightVector::ones(3);
  g.center_ = Vec::Zero(3);
  g.build();
  return g;
}

AbcGeometry AbcGeometry::box(const Vec& lo, const Vec& hi) {
  if (lo.size() != hi.size() || lo.size() < 2 || lo.size() > 3) throw InvalidInput("box: bad corners");
  if ((hi - lo).minCoeff() <= 0) throw InvalidInput("box: hi must exceed lo");
  AbcGeometry g;
  g.kind_ = GeometryKind::Box;
  g.dim_ = static_cast<int>(lo.size());
  g.box_lo_ = lo;
  g.box_hi_ = hi;
  g.w_ = WeightVector::ones(g.dim_);
  g.center_ = (lo + hi) / 2;
  g.build();
  return g;
}

AbcGeometry AbcGeometry::point_nbhd(const Vec& center, const WeightVector& w, NormKind p, double r) {
  if (center.size() != w.dim() || center.size() < 2 || center.size() > 3)
    throw InvalidInput("point neighbourhood: dimension mismatch");
  if (!(r > 0)) throw InvalidInput("point neighbourhood needs r > 0");
  AbcGeometry g;
  g.kind_ = GeometryKind::PointNbhd;
  g.dim_ = static_cast<int>(center.size());
  g.r_ = r;
  g.p_ = g.p_right_ = p;
  g.w_ = w;
  g.center_ = center;
  g.build();
  return g;
}

void AbcGeometry::build() {
  comps_.clear();
  auto make = [&](std::vector<int> axes, Vec c, NormKind p) {
    Component k;
    k.ball_axes = std::move(axes);
    k.center = std::move(c);
    k.w = w_;
    k.p = p;
    k.r = r_;
    return k;
  };
  switch (kind_) {
    case GeometryKind::C: {
      Component left = make({0, 1}, vec2(-a_, 0), p_);
      left.halfspaces = {{0, -1}};
      Component mid = make({1}, vec2(0, 0), p_);
      mid.extrusion = {{0, -a_, a_}};
      Component right = make({0, 1}, vec2(a_, 0), p_right_);
      right.halfspaces = {{0, +1}};
      comps_ = {left, mid, right};
      break;
    }
    case GeometryKind::D: {
      Component left = make({0, 1, 2}, vec3(-a_, 0, 0), p_);
      left.halfspaces = {{0, -1}};
      Component mid = make({1, 2}, vec3(0, 0, 0), p_);
      mid.extrusion = {{0, -a_, a_}};
      Component right = make({0, 1, 2}, vec3(a_, 0, 0), p_);
      right.halfspaces = {{0, +1}};
      comps_ = {left, mid, right};
      break;
    }
    case GeometryKind::E: {
      Component e0 = make({2}, vec3(0, 0, 0), p_);
      e0.extrusion = {{0, -a_, a_}, {1, -b_, b_}};
      comps_.push_back(e0);
      for (int s : {+1, -1}) {
        Component e1 = make({0, 2}, vec3(s * a_, 0, 0), p_);
        e1.halfspaces = {{0, s}};
        e1.extrusion = {{1, -b_, b_}};
        comps_.push_back(e1);
      }
      for (int s : {+1, -1}) {
        Component e2 = make({1, 2}, vec3(0, s * b_, 0), p_);
        e2.halfspaces = {{1, s}};
        e2.extrusion = {{0, -a_, a_}};
        comps_.push_back(e2);
      }
      for (int sx : {+1, -1}) {
        for (int sy : {+1, -1}) {
          Component e = make({0, 1, 2}, vec3(sx * a_, sy * b_, 0), p_);
          e.halfspaces = {{0, sx}, {1, sy}};
          comps_.push_back(e);
        }
      }
      break;
    }
    case GeometryKind::Box: {
      Component k;
      k.center = center_;
      k.w = w_;
      for (int l = 0; l < dim_; ++l) k.extrusion.push_back({l, box_lo_(l), box_hi_(l)});
      comps_ = {k};
      break;
    }
    case GeometryKind::PointNbhd: {
      std::vector<int> axes(dim_);
      for (int l = 0; l < dim_; ++l) axes[l] = l;
      comps_ = {make(axes, center_, p_)};
      break;
    }
  }
}

AbcGeometry AbcGeometry::with_radius(double r) const {
  if (kind_ == GeometryKind::Box) throw UnsupportedFeature("a box has no radius parameter");
  if (!(r > 0)) throw InvalidInput("radius must be positive");
  AbcGeometry g = *this;
  g.r_ = r;
  for (auto& c : g.comps_) c.r = r;
  return g;
}

bool AbcGeometry::contains(const Vec& x) const { return component_of(x) >= 0; }

int AbcGeometry::component_of(const Vec& x) const {
  if (x.size() != dim_) throw InvalidInput("contains: dimension mismatch");
  for (size_t i = 0; i < comps_.size(); ++i)
    if (comps_[i].contains(x)) return static_cast<int>(i);
  return -1;
}

BoundingBox AbcGeometry::bounding_box() const {
  if (kind_ == GeometryKind::Box) return {box_lo_, box_hi_};
  Vec lo = Vec::Constant(dim_, std::numeric_limits<double>::infinity());
  Vec hi = -lo;
  for (const auto& c : comps_) {
    Vec clo = c.center, chi = c.center;
    for (int a : c.ball_axes) {
      clo(a) -= c.r / w_[a];
      chi(a) += c.r / w_[a];
    }
    for (const auto& h : c.halfspaces) {
      if (h.sign > 0) clo(h.axis) = c.center(h.axis);
      else chi(h.axis) = c.center(h.axis);
    }
    for (const auto& e : c.extrusion) {
      clo(e.axis) = e.lo;
      chi(e.axis) = e.hi;
    }
    lo = lo.cwiseMin(clo);
    hi = hi.cwiseMax(chi);
  }
  return {lo, hi};
}

Vec AbcGeometry::core_offset(const Vec& x) const {
  Vec d = x;
  auto clip = [](double t, double half) {
    double e = std::abs(t) - half;
    return e > 0 ? std::copysign(e, t) : 0.0;
  };
  switch (kind_) {
    case GeometryKind::C:
    case GeometryKind::D:
      d(0) = clip(x(0), a_);
      break;
    case GeometryKind::E:
      d(0) = clip(x(0), a_);
      d(1) = clip(x(1), b_);
      break;
    case GeometryKind::PointNbhd:
      d = x - center_;
      break;
    case GeometryKind::Box:
      throw UnsupportedFeature("region_distance: a box has no designated core");
  }
  return d;
}

NormKind AbcGeometry::norm_at(const Vec& x) const {
  if (kind_ == GeometryKind::C && x(0) > 0) return p_right_;
  return p_;
}

double AbcGeometry::region_distance(const Vec& x) const {
  if (x.size() != dim_) throw InvalidInput("region_distance: dimension mismatch");
  return weighted_norm(core_offset(x), w_, norm_at(x));
}

Vec AbcGeometry::region_distance_gradient(const Vec& x) const {
  if (x.size() != dim_) throw InvalidInput("region_distance_gradient: dimension mismatch");
  Vec d = core_offset(x);
  Vec g = weighted_norm_gradient(d, w_, norm_at(x));
  // Clipped coordinates contribute nothing while inside the core's extent.
  if (kind_ == GeometryKind::C || kind_ == GeometryKind::D || kind_ == GeometryKind::E) {
    if (std::abs(x(0)) <= a_) g(0) = 0.0;
  }
  if (kind_ == GeometryKind::E && std::abs(x(1)) <= b_) g(1) = 0.0;
  return g;
}

DistanceConstants AbcGeometry::distance_constants() const {
  if (kind_ == GeometryKind::Box) throw UnsupportedFeature("distance constants: a box has no core");
  const double n = dim_;
  auto lower = [&](NormKind p) { return w_.min() * (p == NormKind::Linf ? 1.0 / std::sqrt(n) : 1.0); };
  auto upper = [&](NormKind p) { return p == NormKind::L1 ? std::sqrt(n) : 1.0; };
  return {std::min(lower(p_), lower(p_right_)), std::max(upper(p_), upper(p_right_))};
}

bool in_aperture(const Vec& d, const ApertureSpec& ap) {
  if (d.size() != ap.normal.size()) throw InvalidInput("in_aperture: dimension mismatch");
  return std::abs(ap.normal.dot(d)) <= ap.tau;
}

}  // namespace cloak
