#include "cloak/materials.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cloak/errors.hpp"
#include "cloak/quadrature.hpp"

namespace cloak {

MaterialField::MaterialField(int dim, Sampler sampler, Region region)
    : dim_(dim), sampler_(std::move(sampler)), region_(std::move(region)) {
  if (!sampler_) throw InvalidInput("material field needs a sampler");
}

MaterialField MaterialField::background(int dim) {
  return MaterialField(dim, [dim](const Vec&) { return Medium{identity(dim), Complex(1.0, 0.0)}; });
}

MaterialField MaterialField::constant(const Mat& sigma, Complex q, Region region) {
  if (sigma.rows() != sigma.cols()) throw InvalidInput("sigma must be square");
  if ((sigma - sigma.transpose()).norm() > 1e-14 * std::max(1.0, sigma.norm()))
    throw InvalidInput("sigma must be symmetric");
  return MaterialField(
      static_cast<int>(sigma.rows()), [sigma, q](const Vec&) { return Medium{sigma, q}; }, std::move(region));
}

Medium MaterialField::operator()(const Vec& x) const {
  if (x.size() != dim_) throw InvalidInput("material field: dimension mismatch");
  if (!defined_at(x)) throw InvalidInput("material field evaluated outside its region");
  return sampler_(x);
}

std::string regularity_violation(const Medium& m, double lambda) {
  if ((m.sigma - m.sigma.transpose()).norm() > 1e-12 * std::max(1.0, m.sigma.norm())) return "sigma not symmetric";
  Eigen::SelfAdjointEigenSolver<Mat> es(m.sigma);
  double lo = es.eigenvalues().minCoeff(), hi = es.eigenvalues().maxCoeff();
  if (lo < lambda) return "smallest eigenvalue of sigma " + std::to_string(lo) + " below lambda";
  if (hi > 1.0 / lambda) return "largest eigenvalue of sigma " + std::to_string(hi) + " above 1/lambda";
  if (m.q.real() < lambda) return "Re q " + std::to_string(m.q.real()) + " below lambda";
  if (m.q.imag() < 0) return "Im q negative";
  return {};
}

namespace {

double checked_det(const Mat& j, const Vec& at) {
  double det = j.determinant();
  if (!std::isfinite(det) || std::abs(det) < 1e-300) throw SingularJacobian(at, "singular Jacobian");
  return std::abs(det);
}

}  // namespace

MaterialField push_forward_medium(const PiecewiseMap& map, const MaterialField& mat) {
  if (map.dim() != mat.dim()) throw InvalidInput("push-forward: dimension mismatch");
  auto sampler = [map, mat](const Vec& y) {
    Vec x = map.eval_inverse(y);
    Mat j = map.jacobian(x);
    double det = checked_det(j, x);
    Medium m = mat(x);
    Mat s = j * m.sigma * j.transpose() / det;
    return Medium{0.5 * (s + s.transpose()), m.q / det};
  };
  auto region = [map, mat](const Vec& y) { return map.in_image(y) && mat.defined_at(map.eval_inverse(y)); };
  return MaterialField(mat.dim(), sampler, region);
}

MaterialField pull_back_medium(const PiecewiseMap& map, const MaterialField& mat) {
  if (map.dim() != mat.dim()) throw InvalidInput("pull-back: dimension mismatch");
  auto sampler = [map, mat](const Vec& x) {
    Vec y = map.eval(x);
    Mat j = map.jacobian(x);
    double det = checked_det(j, x);
    Mat ji = j.inverse();
    Medium m = mat(y);
    Mat s = ji * m.sigma * ji.transpose() * det;
    return Medium{0.5 * (s + s.transpose()), m.q * det};
  };
  auto region = [map, mat](const Vec& x) { return map.in_domain(x) && mat.defined_at(map.eval(x)); };
  return MaterialField(mat.dim(), sampler, region);
}

Complex SourceSpec::h_at(const Vec& x) const {
  if (!h || (support && !support->contains(x))) return 0.0;
  return h(x);
}

CVec SourceSpec::H_at(const Vec& x) const {
  if (!H || (support && !support->contains(x))) return CVec::Zero(dim);
  return H(x);
}

SourceSpec push_forward_source(const PiecewiseMap& map, const SourceSpec& src) {
  if (map.dim() != src.dim) throw InvalidInput("push-forward: dimension mismatch");
  SourceSpec out;
  out.dim = src.dim;
  if (src.h) {
    auto h = src.h;
    out.h = [map, h](const Vec& y) {
      Vec x = map.eval_inverse(y);
      return h(x) / checked_det(map.jacobian(x), x);
    };
  }
  if (src.H) {
    auto H = src.H;
    out.H = [map, H](const Vec& y) {
      Vec x = map.eval_inverse(y);
      Mat j = map.jacobian(x);
      CVec v = j.cast<Complex>() * H(x);
      return CVec(v / checked_det(j, x));
    };
  }
  if (src.support) out.support = std::make_shared<MappedShape>(src.support, map.inverse());
  return out;
}

SourceSpec pull_back_source(const PiecewiseMap& map, const SourceSpec& src) {
  if (map.dim() != src.dim) throw InvalidInput("pull-back: dimension mismatch");
  SourceSpec out;
  out.dim = src.dim;
  if (src.h) {
    auto h = src.h;
    out.h = [map, h](const Vec& x) { return h(map.eval(x)) * checked_det(map.jacobian(x), x); };
  }
  if (src.H) {
    auto H = src.H;
    out.H = [map, H](const Vec& x) {
      Mat j = map.jacobian(x);
      double det = checked_det(j, x);
      CVec v = j.inverse().cast<Complex>() * H(map.eval(x));
      return CVec(v * det);
    };
  }
  if (src.support) out.support = std::make_shared<MappedShape>(src.support, map);
  return out;
}

// -------------------------------------------------------------- impedance

namespace {

// Area (length) scaling of the map restricted to the patch plane.
double tangential_factor(const Mat& j, const SurfacePatch& patch) {
  const int n = static_cast<int>(patch.vertices.front().size());
  Eigen::MatrixXd t(n, n - 1);
  if (n == 2) {
    t.col(0) = patch.vertices[1] - patch.vertices[0];
  } else {
    t.col(0) = patch.vertices[1] - patch.vertices[0];
    t.col(1) = patch.vertices[2] - patch.vertices[0];
  }
  Eigen::MatrixXd jt = j * t;
  return std::sqrt((jt.transpose() * jt).determinant() / (t.transpose() * t).determinant());
}

double point_patch_distance(const Vec& y, const SurfacePatch& p) {
  if (p.vertices.size() == 2) {
    Vec a = p.vertices[0], d = p.vertices[1] - a;
    double t = std::clamp((y - a).dot(d) / d.squaredNorm(), 0.0, 1.0);
    return (y - a - t * d).norm();
  }
  Eigen::Vector3d a = p.vertices[0], e1 = p.vertices[1] - a, e2 = p.vertices[2] - a;
  Eigen::Vector3d nrm = e1.cross(e2).normalized();
  return std::abs((Eigen::Vector3d(y) - a).dot(nrm));
}

}  // namespace

SurfaceFunction push_forward_impedance(const PiecewiseMap& map, const SurfaceFunction& sf) {
  if (!sf.s) throw InvalidInput("impedance function missing");
  struct Mapped {
    SurfacePatch patch;
    double factor;
  };
  std::vector<Mapped> mapped;
  for (const auto& patch : sf.patches) {
    const size_t nv = patch.vertices.size();
    const int n = map.dim();
    if ((n == 2 && nv != 2) || (n == 3 && nv < 3)) throw InvalidInput("impedance patch has wrong vertex count");
    Vec centroid = Vec::Zero(n);
    for (const auto& v : patch.vertices) centroid += v / static_cast<double>(nv);
    int piece = map.piece_index(centroid);
    if (piece < 0) throw InvalidInput("impedance patch outside the map's domain");
    const MapPiece& pc = *map.pieces()[piece];
    Mat j = pc.jacobian(centroid);
    for (const auto& v : patch.vertices) {
      Vec probe = centroid + (1 - 1e-9) * (v - centroid);
      if (map.piece_index(probe) != piece || !pc.is_affine() || (pc.jacobian(probe) - j).norm() > 1e-12 * j.norm())
        throw UnsupportedFeature("impedance push-forward needs the map to be affine on each patch");
    }
    SurfacePatch img;
    for (const auto& v : patch.vertices) img.vertices.push_back(pc.apply(v));
    mapped.push_back({img, tangential_factor(j, patch)});
  }
  SurfaceFunction out;
  for (const auto& m : mapped) out.patches.push_back(m.patch);
  auto s = sf.s;
  out.s = [map, s, mapped](const Vec& y) {
    size_t best = 0;
    double bd = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < mapped.size(); ++i) {
      double d = point_patch_distance(y, mapped[i].patch);
      if (d < bd) {
        bd = d;
        best = i;
      }
    }
    return s(map.eval_inverse(y)) / mapped[best].factor;
  };
  return out;
}

std::string to_string(ObstacleKind k) {
  switch (k) {
    case ObstacleKind::SoundSoft: return "sound_soft";
    case ObstacleKind::SoundHard: return "sound_hard";
    case ObstacleKind::Impedance: return "impedance";
  }
  return "?";
}

ObstacleKind parse_obstacle_kind(const std::string& s) {
  if (s == "sound_soft") return ObstacleKind::SoundSoft;
  if (s == "sound_hard") return ObstacleKind::SoundHard;
  if (s == "impedance") return ObstacleKind::Impedance;
  throw InvalidInput("unknown obstacle kind '" + s + "'");
}

// ------------------------------------------------------------ lossy layer

std::string to_string(LayerVariant v) {
  switch (v) {
    case LayerVariant::FullCloak: return "full_cloak";
    case LayerVariant::CLayer: return "C_layer";
    case LayerVariant::CLayerCartesian: return "C_layer_cartesian";
    case LayerVariant::DLayer: return "D_layer";
    case LayerVariant::ELayer: return "E_layer";
    case LayerVariant::Isotropic: return "isotropic";
    case LayerVariant::Custom: return "custom";
  }
  return "?";
}

LayerVariant parse_layer_variant(const std::string& s) {
  for (auto v : {LayerVariant::FullCloak, LayerVariant::CLayer, LayerVariant::CLayerCartesian, LayerVariant::DLayer,
                 LayerVariant::ELayer, LayerVariant::Isotropic, LayerVariant::Custom})
    if (to_string(v) == s) return v;
  throw InvalidInput("unknown lossy layer variant '" + s + "'");
}

std::vector<Coefficient> LossyLayerSpec::constants(std::initializer_list<double> values) {
  std::vector<Coefficient> out;
  for (double v : values) out.push_back([v](const Vec&) { return v; });
  return out;
}

double LossyLayerSpec::coeff(int i, const Vec& x) const {
  if (i < 1) throw InvalidInput("coefficients are numbered from 1");
  if (static_cast<size_t>(i) > c.size() || !c[i - 1]) return 1.0;
  return c[i - 1](x);
}

MaterialField build_lossy_layer(const LossyLayerSpec& spec, const AbcGeometry& geom) {
  const GeometryKind kind = geom.kind();
  auto require = [&](bool ok) {
    if (!ok) throw InvalidInput("lossy layer variant " + to_string(spec.variant) + " does not fit a " +
                                to_string(kind) + " geometry");
  };
  switch (spec.variant) {
    case LayerVariant::FullCloak: require(kind == GeometryKind::PointNbhd); break;
    case LayerVariant::CLayer:
    case LayerVariant::CLayerCartesian: require(kind == GeometryKind::C); break;
    case LayerVariant::DLayer: require(kind == GeometryKind::D); break;
    case LayerVariant::ELayer: require(kind == GeometryKind::E); break;
    case LayerVariant::Isotropic:
    case LayerVariant::Custom: require(kind != GeometryKind::Box); break;
  }
  if (!(spec.eps > 0)) throw InvalidInput("lossy layer needs eps > 0");
  if (std::abs(geom.radius() - spec.eps) > 1e-12 * spec.eps)
    throw InvalidInput("lossy layer: geometry radius does not match eps");
  if (spec.variant == LayerVariant::Custom && !spec.custom) throw InvalidInput("custom layer without a medium");

  // Coefficient bounds, sampled over the shell.
  if (spec.variant != LayerVariant::Custom) {
    ShellQuadOptions opt;
    opt.n_radial = 4;
    opt.n_angular = 32;
    opt.n_polar = 8;
    opt.n_extrude = 8;
    for (const auto& qp : shell_quadrature(geom, spec.eps / 2, spec.eps, opt)) {
      for (int i = 1; i <= 4; ++i) {
        double v = spec.coeff(i, qp.x);
        if (v < spec.lambda0 * (1 - 1e-12) || v > spec.Lambda0 * (1 + 1e-12))
          throw InvalidInput("lossy layer coefficient c" + std::to_string(i) + " outside [lambda0, Lambda0]");
      }
    }
  }

  const int n = geom.dim();
  const double eps = spec.eps;
  auto half = geom.with_radius(eps / 2);
  MaterialField::Region region = [geom, half](const Vec& x) { return geom.contains(x) && !half.contains(x); };

  MaterialField::Sampler sampler;
  switch (spec.variant) {
    case LayerVariant::FullCloak:
      sampler = [spec, n, eps](const Vec& x) {
        return Medium{spec.coeff(1, x) * eps * eps * identity(n),
                      Complex(spec.coeff(2, x), spec.coeff(3, x)) * std::pow(eps, 1.0 - n)};
      };
      break;
    case LayerVariant::CLayer:
      sampler = [spec, geom, eps](const Vec& x) {
        Vec g = geom.region_distance_gradient(x);
        Vec nu = g.norm() > 0 ? Vec(g / g.norm()) : vec2(0, 1);
        Mat nn = nu * nu.transpose();
        Mat s = spec.coeff(1, x) * (identity(2) - nn) + spec.coeff(2, x) * eps * eps * nn;
        return Medium{s, Complex(spec.coeff(3, x), spec.coeff(4, x)) / std::sqrt(eps)};
      };
      break;
    case LayerVariant::CLayerCartesian:
      sampler = [spec, eps](const Vec& x) {
        Mat s = Mat::Zero(2, 2);
        s(0, 0) = spec.coeff(1, x);
        s(1, 1) = spec.coeff(2, x) * eps * eps;
        return Medium{s, Complex(spec.coeff(3, x), spec.coeff(4, x)) / std::sqrt(eps)};
      };
      break;
    case LayerVariant::DLayer:
    case LayerVariant::ELayer:
    case LayerVariant::Isotropic:
      sampler = [spec, n, eps](const Vec& x) {
        return Medium{spec.coeff(1, x) * eps * eps * identity(n),
                      Complex(spec.coeff(2, x), spec.coeff(3, x)) / std::sqrt(eps)};
      };
      break;
    case LayerVariant::Custom: {
      MaterialField custom = *spec.custom;
      sampler = [custom](const Vec& x) { return custom(x); };
      break;
    }
  }
  return MaterialField(n, sampler, region);
}

}  // namespace cloak
