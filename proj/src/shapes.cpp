#include "cloak/shapes.hpp"

#include <cmath>
#include <sstream>

#include "cloak/errors.hpp"
#include "cloak/quadrature.hpp"

namespace cloak {

namespace {

std::string fmt(const Vec& v) {
  std::ostringstream os;
  os << "(";
  for (Eigen::Index i = 0; i < v.size(); ++i) os << (i ? ", " : "") << v(i);
  os << ")";
  return os.str();
}

}  // namespace

std::vector<Vec> Shape::interior_samples(int per_axis) const {
  BoundingBox b = bbox();
  std::vector<Vec> out;
  const int n = dim();
  int total = 1;
  for (int l = 0; l < n; ++l) total *= per_axis;
  for (int idx = 0; idx < total; ++idx) {
    Vec x(n);
    int rem = idx;
    for (int l = 0; l < n; ++l) {
      int i = rem % per_axis;
      rem /= per_axis;
      x(l) = b.lo(l) + (i + 0.5) * (b.hi(l) - b.lo(l)) / per_axis;
    }
    if (contains(x)) out.push_back(x);
  }
  return out;
}

BallShape::BallShape(Vec center, double radius) : c_(std::move(center)), r_(radius) {
  if (!(r_ > 0)) throw InvalidInput("ball radius must be positive");
  if (c_.size() < 2 || c_.size() > 3) throw InvalidInput("ball must be 2D or 3D");
}

BoundingBox BallShape::bbox() const { return {c_.array() - r_, c_.array() + r_}; }

std::vector<Vec> BallShape::boundary_samples(int n) const {
  std::vector<Vec> out;
  if (dim() == 2) {
    for (int i = 0; i < n; ++i) {
      double t = 2 * kPi * i / n;
      out.push_back(c_ + r_ * vec2(std::cos(t), std::sin(t)));
    }
  } else {
    const double golden = kPi * (3 - std::sqrt(5.0));
    for (int i = 0; i < n; ++i) {
      double z = 1 - 2 * (i + 0.5) / n, s = std::sqrt(1 - z * z);
      out.push_back(c_ + r_ * vec3(s * std::cos(golden * i), s * std::sin(golden * i), z));
    }
  }
  return out;
}

std::string BallShape::describe() const { return "ball center " + fmt(c_) + " radius " + std::to_string(r_); }

BoxShape::BoxShape(Vec lo, Vec hi) : lo_(std::move(lo)), hi_(std::move(hi)) {
  if (lo_.size() != hi_.size() || (hi_ - lo_).minCoeff() <= 0) throw InvalidInput("box: bad corners");
}

bool BoxShape::contains(const Vec& x) const {
  return (x.array() >= lo_.array()).all() && (x.array() <= hi_.array()).all();
}

std::vector<Vec> BoxShape::boundary_samples(int n) const {
  std::vector<Vec> out;
  const int d = dim();
  int per = std::max(2, static_cast<int>(std::pow(n / (2.0 * d), 1.0 / std::max(1, d - 1))));
  for (int face = 0; face < 2 * d; ++face) {
    int axis = face / 2;
    double fixed = face % 2 ? hi_(axis) : lo_(axis);
    int other = d - 1, total = 1;
    for (int k = 0; k < other; ++k) total *= per;
    for (int idx = 0; idx < total; ++idx) {
      Vec x(d);
      int rem = idx;
      for (int l = 0; l < d; ++l) {
        if (l == axis) {
          x(l) = fixed;
          continue;
        }
        int i = rem % per;
        rem /= per;
        x(l) = lo_(l) + (hi_(l) - lo_(l)) * i / (per - 1);
      }
      out.push_back(x);
    }
  }
  return out;
}

std::string BoxShape::describe() const { return "box " + fmt(lo_) + " - " + fmt(hi_); }

SegmentShape::SegmentShape(Vec p0, Vec p1) : p0_(std::move(p0)), p1_(std::move(p1)) {
  if (p0_.size() != 2 || p1_.size() != 2) throw InvalidInput("screens are 2D segments");
  if ((p1_ - p0_).norm() == 0) throw InvalidInput("screen has zero length");
}

BoundingBox SegmentShape::bbox() const { return {p0_.cwiseMin(p1_), p0_.cwiseMax(p1_)}; }

std::vector<Vec> SegmentShape::boundary_samples(int n) const {
  std::vector<Vec> out;
  for (int i = 0; i < n; ++i) out.push_back(p0_ + (p1_ - p0_) * (i / std::max(1.0, n - 1.0)));
  return out;
}

std::string SegmentShape::describe() const { return "screen " + fmt(p0_) + " - " + fmt(p1_); }

std::vector<Vec> GeometryShape::boundary_samples(int n) const {
  if (g_.kind() == GeometryKind::Box) {
    auto b = g_.bounding_box();
    return BoxShape(b.lo, b.hi).boundary_samples(n);
  }
  ShellQuadOptions opt;
  opt.n_radial = 1;
  opt.n_angular = std::max(8, 4 * (n / 16));
  opt.n_polar = std::max(4, n / 64);
  opt.n_extrude = std::max(2, n / 32);
  double r = g_.radius();
  std::vector<Vec> out;
  for (const auto& q : shell_quadrature(g_, r * (1 - 1e-12), r, opt)) out.push_back(q.x);
  return out;
}

std::string GeometryShape::describe() const {
  return to_string(g_.kind()) + " geometry, radius " + std::to_string(g_.radius());
}

MappedShape::MappedShape(ShapePtr inner, PiecewiseMap map) : inner_(std::move(inner)), map_(std::move(map)) {
  if (inner_->is_screen()) throw UnsupportedFeature("screens cannot be carried through a map");
  if (inner_->dim() != map_.dim()) throw InvalidInput("mapped shape: dimension mismatch");
  auto pts = boundary_samples(512);
  if (pts.empty()) throw InvalidInput("mapped shape: no boundary samples");
  Vec lo = pts[0], hi = pts[0];
  for (const auto& p : pts) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  bbox_ = {lo, hi};
}

bool MappedShape::contains(const Vec& x) const {
  int i = map_.piece_index(x);
  if (i < 0) return false;
  return inner_->contains(map_.pieces()[i]->apply(x));
}

std::vector<Vec> MappedShape::boundary_samples(int n) const {
  std::vector<Vec> out;
  for (const auto& y : inner_->boundary_samples(n))
    if (map_.in_image(y)) out.push_back(map_.eval_inverse(y));
  return out;
}

std::string MappedShape::describe() const { return "preimage of " + inner_->describe(); }

}  // namespace cloak
