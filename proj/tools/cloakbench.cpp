// cloakbench: command-line front end to the cloak workbench.
#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "cloak/assumptions.hpp"
#include "cloak/errors.hpp"
#include "cloak/harness.hpp"
#include "cloak/selftest.hpp"

using namespace cloak;
using nlohmann::json;

namespace {

constexpr int kOk = 0, kCheckFailed = 1, kUsage = 2;

std::vector<double> parse_csv(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    try {
      size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw InvalidInput("not a number: '" + item + "'");
    }
  }
  return out;
}

void write_json(const std::string& dir, const std::string& name, const json& j) {
  std::filesystem::create_directories(dir);
  std::ofstream os(std::filesystem::path(dir) / name);
  os << j.dump(2) << "\n";
}

struct Common {
  std::string config, out = "out", eps, angles;
  int parallel = 1;
  double resolution = 0;
};

ScenarioConfig load_with_overrides(const Common& c) {
  if (c.config.empty()) throw InvalidInput("--config is required");
  ScenarioConfig cfg = load_config(c.config);
  if (c.resolution > 0) cfg.grid.ppw = c.resolution;
  if (!c.angles.empty()) cfg.incidence_deg = parse_csv(c.angles);
  return cfg;
}

void print_warnings(const std::vector<std::string>& w) {
  for (const auto& s : w) std::cerr << "warning: " << s << "\n";
}

int cmd_validate(const Common& c) {
  ScenarioConfig cfg = load_with_overrides(c);
  if (cfg.cloak.kind == CloakKind::None) throw InvalidInput("validate needs a cloak");
  std::vector<double> eps = c.eps.empty() ? std::vector<double>{0.08, 0.04, 0.02, 0.01} : parse_csv(c.eps);
  LossyLayerSpec spec = cfg.layer_spec();
  AbcGeometry geom = cfg.cloak.geometry(cfg.cloak.r2);
  auto rep = validate_lossy_layer(spec, geom, AssumptionParams::defaults_for(spec, geom), eps);
  json out{{"layer_check", rep.to_json()}};
  bool ok = rep.pass;
  if (cfg.cloak.dim == 2) {
    try {
      assemble_physical_scenario(cfg.cloak, spec, cfg.contents());
      out["admissibility"] = {{"ok", true}};
    } catch (const AdmissibilityError& e) {
      out["admissibility"] = {{"ok", false}, {"clause", e.clause()}, {"detail", e.what()}};
      ok = false;
    }
  }
  write_json(c.out, "report.json", out);
  std::cout << "layer " << rep.variant << " on " << rep.geometry << ": " << (rep.pass ? "pass" : "FAIL") << "\n";
  if (out.contains("admissibility"))
    std::cout << "admissibility: " << (out["admissibility"]["ok"].get<bool>() ? "ok" : "FAIL") << "\n";
  return ok ? kOk : kCheckFailed;
}

int cmd_solve(const Common& c) {
  ScenarioConfig cfg = load_with_overrides(c);
  if (!c.eps.empty()) {
    auto e = parse_csv(c.eps);
    if (e.size() != 1) throw InvalidInput("solve takes a single --eps value");
    cfg = cfg.with_eps(e[0]);
  }
  RunResult r = run_scenario(cfg);
  print_warnings(r.warnings);
  write_run_outputs(c.out, r, cfg);
  for (size_t i = 0; i < r.sup.size(); ++i)
    std::cout << "incidence " << cfg.incidence_deg[i] << " deg: sup |u_inf| = " << r.sup[i].max_abs << " ("
              << r.sup[i].db << " dB)\n";
  return kOk;
}

int cmd_sweep(const Common& c) {
  ScenarioConfig cfg = load_with_overrides(c);
  if (c.eps.empty()) throw InvalidInput("sweep needs --eps");
  auto rep = convergence_sweep(cfg, parse_csv(c.eps), c.parallel);
  print_warnings(rep.warnings);
  write_json(c.out, "report.json", {{"sweep", rep.to_json()}, {"config", to_json(cfg)}});
  for (size_t i = 0; i < rep.runs.size(); ++i) {
    std::string name = "farfield_eps" + std::to_string(i) + ".csv";
    write_farfield_csv((std::filesystem::path(c.out) / name).string(), rep.runs[i].patterns.front());
    std::cout << "eps " << rep.eps[i] << ": " << to_db(rep.sup_norm[i]) << " dB\n";
  }
  if (rep.eps.size() >= 3)
    std::cout << "slope " << rep.fit.slope << " (95% band " << rep.fit.lo95 << " .. " << rep.fit.hi95 << ")\n";
  return kOk;
}

int cmd_aperture(const Common& c) {
  ScenarioConfig cfg = load_with_overrides(c);
  std::vector<double> tilts = c.angles.empty() ? std::vector<double>{0, 5, 10, 20} : parse_csv(c.angles);
  auto rep = aperture_scan(cfg, tilts);
  write_json(c.out, "report.json", {{"aperture", rep.to_json()}, {"config", to_json(cfg)}});
  for (const auto& r : rep.rows)
    std::cout << "tilt " << r.tilt_deg << " deg: " << r.sup_db << " dB, sup/sin(tilt) = " << r.ratio_to_sin << "\n";
  return kOk;
}

int cmd_mie(const Common& c, double radius, double k, double wavelength, const std::string& boundary) {
  if (wavelength > 0) k = 2 * kPi / wavelength;
  DiskBoundary b;
  if (boundary == "hard") b = DiskBoundary::Hard;
  else if (boundary == "soft") b = DiskBoundary::Soft;
  else throw InvalidInput("boundary must be hard or soft");
  std::vector<double> angles = c.angles.empty() ? std::vector<double>{0} : parse_csv(c.angles);
  json runs = json::array();
  for (size_t i = 0; i < angles.size(); ++i) {
    const double th = angles[i] * kPi / 180;
    auto m = mie_farfield(b, radius, k, vec2(std::cos(th), std::sin(th)));
    std::string name = angles.size() > 1 ? "farfield_" + std::to_string(i) + ".csv" : "farfield.csv";
    std::filesystem::create_directories(c.out);
    write_farfield_csv((std::filesystem::path(c.out) / name).string(), m.pattern);
    auto s = sup_norm_db(m.pattern);
    runs.push_back({{"incidence_rad", th}, {"modes", m.modes}, {"tail_bound", m.tail_bound},
                    {"sup_norm", s.max_abs}, {"sup_norm_db", s.db}});
    std::cout << "incidence " << angles[i] << " deg: sup |u_inf| = " << s.max_abs << " (" << s.db << " dB)\n";
  }
  write_json(c.out, "report.json", {{"mie", {{"radius", radius}, {"k", k}, {"boundary", boundary}, {"runs", runs}}}});
  return kOk;
}

int cmd_selftest(const Common& c) {
  auto res = run_property_suites();
  bool ok = true;
  for (const auto& s : res) {
    std::cout << (s.passed ? "PASS " : "FAIL ") << s.name << " (" << s.cases << " cases, worst " << s.worst << ", "
              << s.seconds << " s)" << (s.detail.empty() ? "" : " " + s.detail) << "\n";
    ok = ok && s.passed;
  }
  write_json(c.out, "report.json", {{"selftest", to_json(res)}});
  return ok ? kOk : kCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Regularized cloak workbench"};
  app.require_subcommand(1);
  Common c;
  auto add_common = [&](CLI::App* s) {
    s->add_option("--config", c.config, "scenario JSON");
    s->add_option("--out", c.out, "output directory");
    s->add_option("--eps", c.eps, "comma-separated eps values");
    s->add_option("--angles", c.angles, "comma-separated angles in degrees");
    s->add_option("--parallel", c.parallel, "concurrent jobs")->check(CLI::PositiveNumber);
    s->add_option("--resolution", c.resolution, "points per wavelength")->check(CLI::PositiveNumber);
  };
  auto* validate = app.add_subcommand("validate", "check the lossy layer and admissibility");
  auto* solve = app.add_subcommand("solve", "solve one scenario");
  auto* sweep = app.add_subcommand("sweep", "eps convergence sweep");
  auto* aperture = app.add_subcommand("aperture", "tilted-incidence aperture scan");
  auto* mie = app.add_subcommand("mie", "analytic disk far field");
  auto* selftest = app.add_subcommand("selftest", "property suites");
  for (auto* s : {validate, solve, sweep, aperture, mie, selftest}) add_common(s);
  double radius = 1, k = kPi, wavelength = 0;
  std::string boundary = "hard";
  mie->add_option("--radius", radius, "disk radius")->check(CLI::PositiveNumber);
  mie->add_option("--k", k, "wavenumber")->check(CLI::PositiveNumber);
  mie->add_option("--wavelength", wavelength, "wavelength (overrides --k)")->check(CLI::PositiveNumber);
  mie->add_option("--boundary", boundary, "hard or soft");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }
  try {
    if (*validate) return cmd_validate(c);
    if (*solve) return cmd_solve(c);
    if (*sweep) return cmd_sweep(c);
    if (*aperture) return cmd_aperture(c);
    if (*mie) return cmd_mie(c, radius, k, wavelength, boundary);
    if (*selftest) return cmd_selftest(c);
  } catch (const AdmissibilityError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kCheckFailed;
  } catch (const SolveError& e) {
    std::cerr << "error: " << e.what() << " (residual " << e.residual() << ")\n";
    return kCheckFailed;
  } catch (const InvalidInput& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const UnsupportedFeature& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kCheckFailed;
  }
  return kUsage;
}
