#include "cloak/scenario.hpp"

#include <cmath>

#include "cloak/errors.hpp"
#include "cloak/quadrature.hpp"

namespace cloak {

std::string to_string(CloakKind k) {
  switch (k) {
    case CloakKind::None: return "none";
    case CloakKind::Full: return "full";
    case CloakKind::C: return "C";
    case CloakKind::D: return "D";
    case CloakKind::E: return "E";
  }
  return "?";
}

CloakKind parse_cloak_kind(const std::string& s) {
  for (auto k : {CloakKind::None, CloakKind::Full, CloakKind::C, CloakKind::D, CloakKind::E})
    if (to_string(k) == s) return k;
  throw InvalidInput("unknown cloak kind '" + s + "'");
}

std::string to_string(Space s) { return s == Space::Physical ? "physical" : "virtual"; }

void CloakParams::validate() const {
  if (kind == CloakKind::None) return;
  if (dim != 2 && dim != 3) throw InvalidInput("dimension must be 2 or 3");
  if ((kind == CloakKind::C && dim != 2) || ((kind == CloakKind::D || kind == CloakKind::E) && dim != 3))
    throw InvalidInput("cloak kind " + to_string(kind) + " does not exist in dimension " + std::to_string(dim));
  if (!(eps > 0 && eps < r1 && r1 < r2)) throw InvalidInput("cloak needs 0 < eps < r1 < r2");
  if (kind != CloakKind::Full && !(a > 0)) throw InvalidInput("cloak needs a > 0");
  if (kind == CloakKind::E && !(b > 0)) throw InvalidInput("cloak needs b > 0");
}

AbcGeometry CloakParams::geometry(double r) const {
  WeightVector ww = w.dim() == dim ? w : WeightVector::ones(dim);
  AbcMapParams mp{r1, r2, eps, a, b, p, p_right, ww};
  switch (kind) {
    case CloakKind::Full: return AbcGeometry::point_nbhd(Vec::Zero(dim), ww, p, r);
    case CloakKind::C: return abc_geometry(GeometryKind::C, mp, r);
    case CloakKind::D: return abc_geometry(GeometryKind::D, mp, r);
    case CloakKind::E: return abc_geometry(GeometryKind::E, mp, r);
    case CloakKind::None: break;
  }
  throw InvalidInput("free-space scenarios have no cloak geometry");
}

PiecewiseMap CloakParams::map() const {
  validate();
  MapLabel label = kind == CloakKind::Full ? MapLabel::FullCloak
                   : kind == CloakKind::C  ? MapLabel::AbcC
                   : kind == CloakKind::D  ? MapLabel::AbcD
                                           : MapLabel::AbcE;
  return build_blowup_map(geometry(r2), r1, r2, eps, true, label);
}

std::string Scenario::region_label(const Vec& x) const {
  if (cloak.kind == CloakKind::None) return "free";
  double r_out = cloak.r2;
  double r_mid = space == Space::Physical ? cloak.r1 : cloak.eps;
  double r_in = r_mid / 2;
  if (!cloak.geometry(r_out).contains(x)) return "exterior";
  if (!cloak.geometry(r_mid).contains(x)) return "shell";
  if (!cloak.geometry(r_in).contains(x)) return "lossy_layer";
  return "contents";
}

namespace {

Medium contents_medium(const CloakedContents& c, const Vec& x) {
  for (const auto& inc : c.inclusions)
    if (inc.region->contains(x)) return inc.medium;
  return c.medium;
}

std::optional<BoundingBox> merge_opt(std::optional<BoundingBox> acc, const BoundingBox& b) {
  if (!acc) return b;
  return BoundingBox::merge(*acc, b);
}

void check_inside(const Shape& shape, const AbcGeometry& sigma, const std::string& what) {
  for (const auto& x : shape.boundary_samples(256))
    if (!sigma.contains(x))
      throw AdmissibilityError("containment", what + " (" + shape.describe() + ") leaves the cloaked region");
}

}  // namespace

Scenario assemble_physical_scenario(const CloakParams& params, const LossyLayerSpec& layer_in,
                                    const CloakedContents& contents, const AdmissibilityOptions& opts) {
  params.validate();
  const int n = params.kind == CloakKind::None ? static_cast<int>(contents.medium.sigma.rows()) : params.dim;
  Scenario s;
  s.dim = n;
  s.space = Space::Physical;
  s.cloak = params;
  s.cloak.dim = n;
  s.layer = layer_in;
  s.layer.eps = params.eps;
  s.obstacles = contents.obstacles;
  s.source = contents.source;

  for (const auto& inc : contents.inclusions) {
    if (!inc.region || inc.region->dim() != n) throw InvalidInput("inclusion dimension mismatch");
    if (auto why = regularity_violation(inc.medium, opts.lambda); !why.empty())
      throw AdmissibilityError("regular conditions", "inclusion " + inc.region->describe() + ": " + why);
  }
  for (const auto& ob : contents.obstacles) {
    if (!ob.region || ob.region->dim() != n) throw InvalidInput("obstacle dimension mismatch");
    if (ob.kind == ObstacleKind::Impedance) {
      if (!ob.impedance || !ob.impedance->s) throw InvalidInput("impedance obstacle without impedance");
      for (const auto& x : ob.region->boundary_samples(64)) {
        Complex v = ob.impedance->s(x);
        if (v.real() > 0 || v.imag() < 0)
          throw AdmissibilityError("impedance sign", "impedance needs Re s <= 0 and Im s >= 0");
      }
    }
  }

  // Contrast box: where anything differs from free space.
  std::optional<BoundingBox> contrast;
  for (const auto& inc : contents.inclusions) contrast = merge_opt(contrast, inc.region->bbox());
  for (const auto& ob : contents.obstacles) contrast = merge_opt(contrast, ob.region->bbox());
  if (contents.source && contents.source->support) contrast = merge_opt(contrast, contents.source->support->bbox());

  if (params.kind == CloakKind::None) {
    auto inclusions = contents.inclusions;
    s.medium = MaterialField(n, [inclusions, n](const Vec& x) {
      for (const auto& inc : inclusions)
        if (inc.region->contains(x)) return inc.medium;
      return Medium{identity(n), Complex(1.0, 0.0)};
    });
    s.contrast = contrast;
    return s;
  }

  if (contents.medium.sigma.rows() != n) throw InvalidInput("contents medium dimension mismatch");
  AbcGeometry outer = params.geometry(params.r2);
  AbcGeometry inner = params.geometry(params.r1);
  AbcGeometry sigma = params.geometry(params.r1 / 2);

  // Everything placed in the cloaked region must stay inside it.
  for (const auto& inc : contents.inclusions) check_inside(*inc.region, sigma, "inclusion");
  for (const auto& ob : contents.obstacles) check_inside(*ob.region, sigma, "obstacle");
  if (contents.source) {
    if (!contents.source->support) throw InvalidInput("source without a support region");
    check_inside(*contents.source->support, sigma, "source support");
  }

  // Regularity of the contents medium, sampled over the cloaked region.
  {
    ShellQuadOptions q{6, 32, 8, 6, RadialRule::Midpoint};
    for (const auto& qp : shell_quadrature(sigma, 0.0, params.r1 / 2, q))
      if (auto why = regularity_violation(contents_medium(contents, qp.x), opts.lambda); !why.empty())
        throw AdmissibilityError("regular conditions", "cloaked medium: " + why);
  }

  // Source conditions.
  if (contents.source) {
    const auto& src = *contents.source;
    auto pts = src.support->interior_samples(opts.samples);
    if (src.has_h() && !src.has_H()) {
      for (const auto& x : pts) {
        if (std::abs(src.h(x)) == 0) continue;
        if (contents_medium(contents, x).q.imag() < opts.lambda0)
          throw AdmissibilityError("absorbing source medium",
                                   "Im q must be at least lambda0 where h is nonzero (the medium must be absorbing)");
      }
    } else if (src.has_h() && src.has_H()) {
      ShellQuadOptions q{6, 32, 8, 6, RadialRule::Midpoint};
      for (const auto& qp : shell_quadrature(sigma, 0.0, params.r1 / 2, q)) {
        Complex qq = contents_medium(contents, qp.x).q;
        if (qq.imag() < opts.lambda0 || qq.real() > opts.Lambda0)
          throw AdmissibilityError("bounded source medium",
                                   "need lambda0 <= Im q and Re q <= Lambda0 on the cloaked region");
      }
      for (const auto& x : pts) {
        Eigen::SelfAdjointEigenSolver<Mat> es(contents_medium(contents, x).sigma);
        if (es.eigenvalues().minCoeff() < opts.lambda0)
          throw AdmissibilityError("bounded source medium", "sigma must be at least lambda0 on the support of H");
      }
    }
  }

  PiecewiseMap map = params.map();
  MaterialField lossy = push_forward_medium(map, build_lossy_layer(s.layer, params.geometry(params.eps)));
  s.map = map;
  auto cm = contents;
  s.medium = MaterialField(n, [=](const Vec& y) {
    if (!outer.contains(y)) return Medium{identity(n), Complex(1.0, 0.0)};
    if (!inner.contains(y)) {
      Vec x = map.eval_inverse(y);
      Mat j = map.jacobian(x);
      double det = std::abs(j.determinant());
      if (!(det > 0)) throw SingularJacobian(x, "singular Jacobian in the cloaking shell");
      Mat sg = j * j.transpose() / det;
      return Medium{0.5 * (sg + sg.transpose()), Complex(1.0 / det, 0.0)};
    }
    if (!sigma.contains(y)) return lossy(y);
    return contents_medium(cm, y);
  });
  s.contrast = outer.bounding_box();
  return s;
}

Scenario virtual_scenario(const Scenario& s, double cells_per_eps) {
  if (s.cloak.kind == CloakKind::None || s.space == Space::Virtual) return s;
  if (!s.map) throw InvalidInput("virtual scenario needs the cloak map");
  const PiecewiseMap& map = *s.map;
  Scenario v = s;
  v.space = Space::Virtual;
  v.medium = pull_back_medium(map, s.medium);
  v.obstacles.clear();
  for (const auto& ob : s.obstacles) {
    ObstacleSpec o = ob;
    o.region = std::make_shared<MappedShape>(ob.region, map);
    if (ob.impedance) o.impedance = push_forward_impedance(map.inverse(), *ob.impedance);
    v.obstacles.push_back(o);
  }
  if (s.source) v.source = pull_back_source(map, *s.source);
  const double eps = s.cloak.eps;
  AbcGeometry small = s.cloak.geometry(eps);
  v.contrast = small.bounding_box().expanded(1e-9);
  v.zones.clear();
  const double h = eps / cells_per_eps;
  for (const auto& c : small.components()) {
    for (int a : c.ball_axes) {
      double half = 1.5 * eps / c.w[a];
      v.zones.push_back({a, c.center(a) - half, c.center(a) + half, h});
    }
  }
  return v;
}

}  // namespace cloak
