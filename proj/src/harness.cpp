#include "cloak/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <future>

#include "cloak/errors.hpp"
#include "cloak/field_io.hpp"

namespace cloak {

using nlohmann::json;

namespace {

constexpr long kUnknownBudget = 2000000;

double corner_reach(const BoundingBox& b) {
  double r = 0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) r = std::max(r, std::hypot(i ? b.hi(0) : b.lo(0), j ? b.hi(1) : b.lo(1)));
  return r;
}

}  // namespace

PreparedRun prepare_run(const ScenarioConfig& cfg) {
  PreparedRun p;
  if (cfg.cloak.kind != CloakKind::None && cfg.cloak.dim != 2)
    throw UnsupportedFeature("only two-dimensional scenarios can be solved");
  Scenario s = assemble_physical_scenario(cfg.cloak, cfg.layer_spec(), cfg.contents());
  const double lambda = cfg.wavelength();
  const double h = lambda / cfg.grid.ppw;
  const bool cloaked = cfg.cloak.kind != CloakKind::None;
  bool virt = cloaked && (cfg.strategy == Strategy::Virtual ||
                          (cfg.strategy == Strategy::Auto && cfg.cloak.eps < 4 * h));
  if (virt) s = virtual_scenario(s, cfg.grid.cells_per_eps);
  p.space = virt ? Space::Virtual : Space::Physical;

  const double reach = s.contrast ? corner_reach(*s.contrast) : 0.0;
  p.extraction_radius = reach + cfg.grid.margin / 2;
  const double half = p.extraction_radius + std::max(cfg.grid.margin / 2, 4 * h);

  GridSpec gs;
  gs.lo = vec2(-half, -half);
  gs.hi = vec2(half, half);
  gs.h = h;
  gs.growth = cfg.grid.growth;
  gs.pml.cells = cfg.grid.pml_cells > 0 ? cfg.grid.pml_cells : static_cast<int>(std::ceil(cfg.grid.ppw - 1e-9));
  if (virt) {
    gs.zones = s.zones;
  } else if (cloaked && cfg.grid.refine > 1) {
    const BoundingBox b = cfg.cloak.geometry(cfg.cloak.r2).bounding_box();
    for (int a = 0; a < 2; ++a) gs.zones.push_back({a, b.lo(a), b.hi(a), h / cfg.grid.refine});
  }
  p.grid = std::make_shared<Grid>(gs);
  if (p.grid->size() > kUnknownBudget)
    p.warnings.push_back("grid has " + std::to_string(p.grid->size()) + " unknowns, above the 2e6 budget");
  p.scenario = std::move(s);
  return p;
}

double RunResult::max_sup() const {
  double m = 0;
  for (const auto& s : sup) m = std::max(m, s.max_abs);
  return m;
}

json RunResult::summary() const {
  json j;
  j["name"] = name;
  j["space"] = to_string(space);
  j["eps"] = eps;
  j["unknowns"] = unknowns;
  j["grid"] = {{"nx", nx}, {"ny", ny}};
  j["seconds"] = seconds;
  j["residual"] = residual;
  j["warnings"] = warnings;
  json inc = json::array();
  for (size_t i = 0; i < patterns.size(); ++i) {
    const double th = incidence_deg[i] * kPi / 180;
    inc.push_back({{"incidence_rad", th}, {"sup_norm", sup[i].max_abs}, {"sup_norm_db", sup[i].db}});
  }
  j["incidences"] = inc;
  j["sup_norm"] = max_sup();
  j["sup_norm_db"] = to_db(max_sup());
  return j;
}

RunResult run_scenario(const ScenarioConfig& cfg) {
  auto t0 = std::chrono::steady_clock::now();
  PreparedRun p = prepare_run(cfg);
  RunResult r;
  r.name = cfg.name;
  r.space = p.space;
  r.eps = cfg.cloak.eps;
  r.incidence_deg = cfg.incidence_deg;
  r.unknowns = p.grid->size();
  r.nx = p.grid->nx();
  r.ny = p.grid->ny();
  r.warnings = p.warnings;
  HelmholtzSolver solver(p.scenario, p.grid, cfg.k, cfg.solve);
  for (double deg : cfg.incidence_deg) {
    IncidentWave inc = IncidentWave::at_angle(cfg.k, deg * kPi / 180);
    DiscreteField f = solver.solve(inc);
    const int n_circle = std::max(256, 8 * static_cast<int>(std::ceil(cfg.k * p.extraction_radius)));
    CircleSamples cs = extract_circle(f, p.extraction_radius, n_circle, p.scenario.contrast);
    r.patterns.push_back(kirchhoff_farfield(cs, cfg.k, inc.d, cfg.n_dirs));
    r.sup.push_back(sup_norm_db(r.patterns.back()));
    r.residual = std::max(r.residual, solver.report().residual);
    if (cfg.dump_fields) r.fields.push_back(std::move(f));
  }
  for (const auto& w : solver.report().warnings) r.warnings.push_back(w);
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

void write_run_outputs(const std::string& dir, const RunResult& r, const ScenarioConfig& cfg) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  const bool many = r.patterns.size() > 1;
  for (size_t i = 0; i < r.patterns.size(); ++i) {
    std::string name = many ? "farfield_" + std::to_string(i) + ".csv" : "farfield.csv";
    write_farfield_csv((fs::path(dir) / name).string(), r.patterns[i]);
  }
  for (size_t i = 0; i < r.fields.size(); ++i)
    write_field((fs::path(dir) / ("field_" + std::to_string(i) + ".cfld")).string(), r.fields[i]);
  json rep = {{"summary", r.summary()}, {"config", to_json(cfg)}};
  std::ofstream os(fs::path(dir) / "report.json");
  os << rep.dump(2) << "\n";
}

// ------------------------------------------------------------------ rates

namespace {

// Two-sided 95% Student t quantiles for 1..30 degrees of freedom.
double t95(int dof) {
  static const double table[] = {12.706, 4.303, 3.182, 2.776, 2.571, 2.447, 2.365, 2.306, 2.262, 2.228,
                                 2.201,  2.179, 2.160, 2.145, 2.131, 2.120, 2.110, 2.101, 2.093, 2.086,
                                 2.080,  2.074, 2.069, 2.064, 2.060, 2.056, 2.052, 2.048, 2.045, 2.042};
  if (dof < 1) return std::numeric_limits<double>::infinity();
  if (dof <= 30) return table[dof - 1];
  return 1.960;
}

}  // namespace

RateFit fit_rate(const std::vector<double>& eps, const std::vector<double>& norms) {
  if (eps.size() != norms.size()) throw InvalidInput("fit_rate: size mismatch");
  if (eps.size() < 3) throw InvalidInput("fit_rate needs at least three points");
  const int n = static_cast<int>(eps.size());
  std::vector<double> x(n), y(n);
  for (int i = 0; i < n; ++i) {
    if (!(eps[i] > 0) || !(norms[i] > 0)) throw InvalidInput("fit_rate needs positive values");
    x[i] = std::log(eps[i]);
    y[i] = std::log(norms[i]);
  }
  double mx = 0, my = 0;
  for (int i = 0; i < n; ++i) {
    mx += x[i] / n;
    my += y[i] / n;
  }
  double sxx = 0, sxy = 0;
  for (int i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (!(sxx > 0)) throw InvalidInput("fit_rate needs distinct eps values");
  RateFit f;
  f.n = n;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double rss = 0;
  for (int i = 0; i < n; ++i) {
    double e = y[i] - f.intercept - f.slope * x[i];
    rss += e * e;
  }
  f.stderr_slope = n > 2 ? std::sqrt(rss / (n - 2) / sxx) : 0.0;
  const double t = t95(n - 2);
  f.lo95 = f.slope - t * f.stderr_slope;
  f.hi95 = f.slope + t * f.stderr_slope;
  return f;
}

json ConvergenceReport::to_json() const {
  json runs_j = json::array();
  for (const auto& r : runs) runs_j.push_back(r.summary());
  return {{"eps", eps},
          {"sup_norm", sup_norm},
          {"slope", fit.slope},
          {"slope_ci95", {fit.lo95, fit.hi95}},
          {"slope_stderr", fit.stderr_slope},
          {"runs", runs_j},
          {"warnings", warnings}};
}

ConvergenceReport convergence_sweep(const ScenarioConfig& tmpl, std::vector<double> eps, int parallel) {
  std::sort(eps.begin(), eps.end(), std::greater<>());
  if (std::adjacent_find(eps.begin(), eps.end()) != eps.end()) throw InvalidInput("eps values must be distinct");
  parallel = std::max(1, parallel);
  std::vector<std::optional<RunResult>> results(eps.size());
  std::vector<std::string> errors(eps.size());
  for (size_t start = 0; start < eps.size(); start += parallel) {
    std::vector<std::future<void>> jobs;
    for (size_t i = start; i < std::min(eps.size(), start + parallel); ++i) {
      jobs.push_back(std::async(std::launch::async, [&, i] {
        try {
          results[i] = run_scenario(tmpl.with_eps(eps[i]));
        } catch (const Error& e) {
          errors[i] = e.what();
        }
      }));
    }
    for (auto& j : jobs) j.get();
  }
  ConvergenceReport rep;
  for (size_t i = 0; i < eps.size(); ++i) {
    if (!results[i]) {
      rep.warnings.push_back("eps " + std::to_string(eps[i]) + " excluded: " + errors[i]);
      continue;
    }
    rep.eps.push_back(eps[i]);
    rep.sup_norm.push_back(results[i]->max_sup());
    for (const auto& w : results[i]->warnings) rep.warnings.push_back("eps " + std::to_string(eps[i]) + ": " + w);
    rep.runs.push_back(std::move(*results[i]));
  }
  if (rep.eps.size() >= 3) rep.fit = fit_rate(rep.eps, rep.sup_norm);
  else rep.warnings.push_back("fewer than three resolvable eps values; no rate fitted");
  return rep;
}

// --------------------------------------------------------------- aperture

json ApertureReport::to_json() const {
  json rows_j = json::array();
  for (const auto& r : rows) {
    rows_j.push_back({{"tilt_rad", r.tilt_deg * kPi / 180},
                      {"sup_norm", r.sup},
                      {"sup_norm_db", r.sup_db},
                      {"restricted_sup", r.restricted_sup},
                      {"restricted_db", r.restricted_db},
                      {"ratio_to_sin_tilt", r.ratio_to_sin}});
  }
  return {{"tau", tau}, {"normal", {normal(0), normal(1)}}, {"rows", rows_j}};
}

ApertureReport aperture_scan(const ScenarioConfig& cfg, const std::vector<double>& tilts_deg,
                             const std::vector<double>& tau) {
  for (double t : tilts_deg)
    if (t < 0 || t > 90) throw InvalidInput("tilt angles must lie in [0, 90] degrees");
  ScenarioConfig c = cfg;
  c.incidence_deg = tilts_deg;
  RunResult r = run_scenario(c);
  ApertureReport rep;
  rep.tau = tau;
  rep.normal = vec2(0, 1);
  for (size_t i = 0; i < tilts_deg.size(); ++i) {
    ApertureRow row;
    row.tilt_deg = tilts_deg[i];
    row.sup = r.sup[i].max_abs;
    row.sup_db = r.sup[i].db;
    const auto& pat = r.patterns[i];
    for (double t : tau) {
      ApertureSpec ap{rep.normal, t};
      double m = 0;
      for (size_t a = 0; a < pat.angles.size(); ++a) {
        Vec xh = vec2(std::cos(pat.angles[a]), std::sin(pat.angles[a]));
        if (in_aperture(xh, ap)) m = std::max(m, std::abs(pat.values[a]));
      }
      row.restricted_sup.push_back(m);
      row.restricted_db.push_back(to_db(m));
    }
    const double s = std::sin(tilts_deg[i] * kPi / 180);
    row.ratio_to_sin = s > 0 ? row.sup / s : 0.0;
    rep.rows.push_back(row);
  }
  return rep;
}

}  // namespace cloak
