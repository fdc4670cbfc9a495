#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "cloak/config.hpp"
#include "cloak/farfield.hpp"
#include "cloak/solver.hpp"

namespace cloak {

// The scenario that is actually discretized, with its grid and the radius
// of the extraction circle.
struct PreparedRun {
  Scenario scenario;
  std::shared_ptr<const Grid> grid;
  double extraction_radius = 0;
  Space space = Space::Physical;
  std::vector<std::string> warnings;
};

PreparedRun prepare_run(const ScenarioConfig& cfg);

struct RunResult {
  std::string name;
  Space space = Space::Physical;
  double eps = 0;
  std::vector<double> incidence_deg;
  std::vector<FarFieldPattern> patterns;
  std::vector<SupNorm> sup;
  std::vector<DiscreteField> fields;  // kept only when dumps are requested
  long unknowns = 0;
  int nx = 0, ny = 0;
  double seconds = 0;
  double residual = 0;
  std::vector<std::string> warnings;

  double max_sup() const;
  nlohmann::json summary() const;
};

RunResult run_scenario(const ScenarioConfig& cfg);

// Writes farfield.csv (farfield_<i>.csv for several incidences), optional
// field_<i>.cfld dumps and report.json into dir.
void write_run_outputs(const std::string& dir, const RunResult& r, const ScenarioConfig& cfg);

struct RateFit {
  double slope = 0, intercept = 0;
  double stderr_slope = 0;
  double lo95 = 0, hi95 = 0;
  int n = 0;
};

// Least squares of log(norm) on log(eps); the 95% band uses Student t with
// n-2 degrees of freedom.
RateFit fit_rate(const std::vector<double>& eps, const std::vector<double>& norms);

struct ConvergenceReport {
  std::vector<double> eps;
  std::vector<double> sup_norm;
  std::vector<RunResult> runs;
  std::vector<std::string> warnings;  // excluded eps values and solver notes
  RateFit fit;
  nlohmann::json to_json() const;
};

// Runs the template at each eps (sorted decreasing) with up to `parallel`
// concurrent jobs; failing eps values are excluded with a warning.
ConvergenceReport convergence_sweep(const ScenarioConfig& tmpl, std::vector<double> eps, int parallel = 1);

struct ApertureRow {
  double tilt_deg = 0;
  double sup = 0, sup_db = 0;
  std::vector<double> restricted_sup, restricted_db;  // per tau
  double ratio_to_sin = 0;                            // sup / sin(tilt); 0 at tilt 0
};

struct ApertureReport {
  std::vector<double> tau;  // aperture half-widths |x . n| <= tau
  std::vector<ApertureRow> rows;
  Vec normal;
  nlohmann::json to_json() const;
};

// Tilted incidences d = (cos t, sin t) on one factorization. The aperture
// normal is e2, the direction across the cloak axis.
ApertureReport aperture_scan(const ScenarioConfig& cfg, const std::vector<double>& tilts_deg,
                             const std::vector<double>& tau = {0.05, 0.1, 0.2, 0.3});

}  // namespace cloak
