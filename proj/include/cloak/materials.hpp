#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "cloak/geometry.hpp"
#include "cloak/shapes.hpp"
#include "cloak/transforms.hpp"

namespace cloak {

struct Medium {
  Mat sigma;
  Complex q;
};

// Position-dependent medium (sigma, q), evaluated lazily from closures.
class MaterialField {
 public:
  using Sampler = std::function<Medium(const Vec&)>;
  using Region = std::function<bool(const Vec&)>;

  MaterialField(int dim, Sampler sampler, Region region = {});
  static MaterialField background(int dim);
  static MaterialField constant(const Mat& sigma, Complex q, Region region = {});

  int dim() const { return dim_; }
  bool defined_at(const Vec& x) const { return !region_ || region_(x); }
  Medium operator()(const Vec& x) const;

 private:
  int dim_;
  Sampler sampler_;
  Region region_;
};

// Regular conditions: lambda |xi|^2 <= sigma xi.xi <= |xi|^2 / lambda,
// Re q >= lambda, Im q >= 0. Returns an empty string or the reason.
std::string regularity_violation(const Medium& m, double lambda);

MaterialField push_forward_medium(const PiecewiseMap& map, const MaterialField& mat);
MaterialField pull_back_medium(const PiecewiseMap& map, const MaterialField& mat);

struct SourceSpec {
  int dim = 2;
  std::function<Complex(const Vec&)> h;  // empty when h = 0
  std::function<CVec(const Vec&)> H;     // empty when H = 0
  ShapePtr support;

  bool has_h() const { return static_cast<bool>(h); }
  bool has_H() const { return static_cast<bool>(H); }
  Complex h_at(const Vec& x) const;
  CVec H_at(const Vec& x) const;
};

SourceSpec push_forward_source(const PiecewiseMap& map, const SourceSpec& src);
SourceSpec pull_back_source(const PiecewiseMap& map, const SourceSpec& src);

// Surface data on a union of flat patches (segments in 2D, planar polygons in 3D).
struct SurfacePatch {
  std::vector<Vec> vertices;
};

struct SurfaceFunction {
  std::vector<SurfacePatch> patches;
  std::function<Complex(const Vec&)> s;
};

// s~ = s / |det D_tau F| on each patch image; rejects patches on which the
// map is not affine.
SurfaceFunction push_forward_impedance(const PiecewiseMap& map, const SurfaceFunction& s);

enum class ObstacleKind { SoundSoft, SoundHard, Impedance };

std::string to_string(ObstacleKind k);
ObstacleKind parse_obstacle_kind(const std::string& s);

struct ObstacleSpec {
  ObstacleKind kind = ObstacleKind::SoundHard;
  ShapePtr region;
  std::optional<SurfaceFunction> impedance;
};

// A bounded penetrable inclusion with constant medium.
struct Inclusion {
  ShapePtr region;
  Medium medium;
};

enum class LayerVariant { FullCloak, CLayer, CLayerCartesian, DLayer, ELayer, Isotropic, Custom };

std::string to_string(LayerVariant v);
LayerVariant parse_layer_variant(const std::string& s);

using Coefficient = std::function<double(const Vec&)>;

struct LossyLayerSpec {
  LayerVariant variant = LayerVariant::Isotropic;
  double eps = 0.01;
  std::vector<Coefficient> c;  // c_1..c_4 as needed by the variant; missing entries are 1
  double lambda0 = 1.0, Lambda0 = 1.0;
  std::optional<MaterialField> custom;

  static std::vector<Coefficient> constants(std::initializer_list<double> values);
  double coeff(int i, const Vec& x) const;
};

// Medium on the half shell K_eps minus K_{eps/2} of geom (geom given at
// radius eps). Variants: full cloak sigma = c1 eps^2 I, q = (c2 + i c3)
// eps^(1-N); capsule layer sigma = c1 tau tau^T + c2 eps^2 nu nu^T with nu
// the unit normal of the level sets (diag(c1, c2 eps^2) on the flat part),
// q = (c3 + i c4) eps^(-1/2); CLayerCartesian takes diag(c1, c2 eps^2) in
// fixed coordinates everywhere; slender/cushion/isotropic layers sigma =
// c1 eps^2 I, q = (c2 + i c3) eps^(-1/2).
MaterialField build_lossy_layer(const LossyLayerSpec& spec, const AbcGeometry& geom);

}  // namespace cloak
