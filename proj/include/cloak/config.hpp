#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "cloak/scenario.hpp"
#include "cloak/solver.hpp"

namespace cloak {

struct ShapeConfig {
  std::string type = "ball";  // ball, box, segment
  Vec center = vec2(0, 0);
  double radius = 0.25;
  Vec lo, hi, p0, p1;

  ShapePtr build() const;
};

struct ObstacleConfig {
  ObstacleKind kind = ObstacleKind::SoundHard;
  ShapeConfig shape;
};

struct InclusionConfig {
  ShapeConfig shape;
  Mat sigma = identity(2);
  Complex q = 1.0;
};

// Constant source densities restricted to a shape.
struct SourceConfig {
  ShapeConfig shape;
  std::optional<Complex> h;
  std::optional<std::array<Complex, 2>> H;
};

enum class Strategy { Auto, Physical, Virtual };
std::string to_string(Strategy s);
Strategy parse_strategy(const std::string& s);

struct GridConfig {
  double ppw = 20;           // coarse cells per wavelength
  int pml_cells = 0;         // 0: one wavelength
  double margin = 0.8;       // clearance between scatterer box and extraction circle
  double refine = 4;         // physical cloaks: cell size divisor over the cloak
  double cells_per_eps = 16; // virtual runs: cells across eps near the small core
  double growth = 1.2;
};

struct ScenarioConfig {
  std::string name = "scenario";
  CloakParams cloak;
  bool a_equals_eps = false;  // "a": "eps" ties the half-length to eps
  LayerVariant layer = LayerVariant::Isotropic;
  std::vector<double> c{1, 1, 1, 1};
  double lambda0 = 0.1, Lambda0 = 10;  // bounds on the layer coefficients
  double k = kPi;
  std::vector<double> incidence_deg{0};
  Mat medium_sigma = identity(2);
  Complex medium_q = 1.0;
  std::vector<InclusionConfig> inclusions;
  std::vector<ObstacleConfig> obstacles;
  std::optional<SourceConfig> source;
  GridConfig grid;
  Strategy strategy = Strategy::Auto;
  SolveOptions solve;
  int n_dirs = 100;
  bool dump_fields = false;

  ScenarioConfig with_eps(double eps) const;
  double wavelength() const { return 2 * kPi / k; }
  LossyLayerSpec layer_spec() const;
  CloakedContents contents() const;
};

// Accepts "k" or "wavelength"; angles in degrees. Throws InvalidInput.
ScenarioConfig parse_config(const nlohmann::json& j);
ScenarioConfig load_config(const std::string& path);
// Canonical form: every field present, keys sorted.
nlohmann::json to_json(const ScenarioConfig& c);
std::string emit_config(const ScenarioConfig& c);

}  // namespace cloak
