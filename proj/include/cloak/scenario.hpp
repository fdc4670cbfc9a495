#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cloak/materials.hpp"

namespace cloak {

enum class CloakKind { None, Full, C, D, E };
enum class Space { Physical, Virtual };

std::string to_string(CloakKind k);
CloakKind parse_cloak_kind(const std::string& s);
std::string to_string(Space s);

struct CloakParams {
  CloakKind kind = CloakKind::None;
  int dim = 2;
  double r1 = 1, r2 = 2, eps = 0.01, a = 1, b = 1;
  NormKind p = NormKind::L2, p_right = NormKind::L2;
  WeightVector w;  // ones when empty

  // Member of the geometry family at radius r (ball around the origin for
  // the full cloak).
  AbcGeometry geometry(double r) const;
  PiecewiseMap map() const;
  void validate() const;
};

// What sits inside the cloaked region: a background medium, penetrable
// inclusions, obstacles and a source.
struct CloakedContents {
  Medium medium{identity(2), Complex(1.0, 0.0)};
  std::vector<Inclusion> inclusions;
  std::vector<ObstacleSpec> obstacles;
  std::optional<SourceSpec> source;
};

struct AdmissibilityOptions {
  double lambda = 1e-3;   // regularity bound for the contents
  double lambda0 = 1e-3;  // absorption / boundedness bounds on source supports
  double Lambda0 = 1e3;
  int samples = 24;       // lattice samples per axis for interior checks
};

// Grid refinement request along one axis: cells no wider than h on [lo, hi].
struct AxisZone {
  int axis;
  double lo, hi, h;
};

struct Scenario {
  int dim = 2;
  Space space = Space::Physical;
  CloakParams cloak;
  LossyLayerSpec layer;
  MaterialField medium = MaterialField::background(2);
  std::vector<ObstacleSpec> obstacles;
  std::optional<SourceSpec> source;
  std::optional<PiecewiseMap> map;  // physical point = map(virtual point)
  // Everything that differs from free space lies inside this box.
  std::optional<BoundingBox> contrast;
  std::vector<AxisZone> zones;

  // Which layer of the construction x belongs to.
  std::string region_label(const Vec& x) const;
};

// Medium outside the outer region is (I, 1); the shell carries the pushed
// free space; the annulus between radius r1 and r1/2 carries the pushed
// lossy layer; the contents are left untouched inside radius r1/2. With
// kind None the contents are placed in free space as they are.
Scenario assemble_physical_scenario(const CloakParams& params, const LossyLayerSpec& layer,
                                    const CloakedContents& contents, const AdmissibilityOptions& opts = {});

// Pulls every ingredient back through the cloak map. Zones ask for cells of
// size eps / cells_per_eps around the small virtual region.
Scenario virtual_scenario(const Scenario& s, double cells_per_eps = 16);

}  // namespace cloak
