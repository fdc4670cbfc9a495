// Acceptance run: one PASS/FAIL line per criterion with the measured values.
#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>

#include "cloak/harness.hpp"
#include "cloak/selftest.hpp"

using namespace cloak;
using nlohmann::json;

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
  bool pass = false;
  std::string detail;
};

const json kHardDiskR1 = {{"obstacles", {{{"kind", "sound_hard"}, {"shape", {{"type", "ball"}, {"center", {0, 0}}, {"radius", 1}}}}}}};
const json kHardDiskSmall = {
    {"obstacles", {{{"kind", "sound_hard"}, {"shape", {{"type", "ball"}, {"center", {0, 0}}, {"radius", 0.25}}}}}}};

ScenarioConfig c_cloak(double eps, double ppw, double cells_per_eps) {
  return parse_config({{"name", "c_cloak"},
                       {"cloak", {{"kind", "C"}, {"r1", 1}, {"r2", 2}, {"eps", eps}, {"a", 1}}},
                       {"layer", {{"variant", "C_layer"}, {"c", {1, 1, 1, 1}}}},
                       {"wavelength", 2},
                       {"contents", kHardDiskSmall},
                       {"grid", {{"ppw", ppw}, {"cells_per_eps", cells_per_eps}}},
                       {"solve", {{"strategy", "virtual"}}}});
}

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

Outcome mie_oracle() {
  auto run = [](double ppw, double* seconds) {
    auto cfg = parse_config({{"name", "mie"}, {"wavelength", 2}, {"contents", kHardDiskR1}, {"grid", {{"ppw", ppw}}}});
    auto t0 = Clock::now();
    auto r = run_scenario(cfg);
    *seconds = since(t0);
    return relative_linf(r.patterns[0], mie_farfield(DiskBoundary::Hard, 1, kPi, vec2(1, 0)).pattern);
  };
  double t20 = 0, t40 = 0;
  double e20 = run(20, &t20), e40 = run(40, &t40);
  double ratio = e20 / e40;
  Outcome o;
  o.pass = e20 <= 0.03 && ratio >= 3 && t20 <= 60;
  o.detail = "err(l/20) " + fmt("%.3g", e20) + " <= 0.03, err(l/40) " + fmt("%.3g", e40) + ", reduction " +
             fmt("%.2f", ratio) + "x >= 3, runtime " + fmt("%.2f", t20) + " s <= 60";
  return o;
}

Outcome free_space_null() {
  auto r = run_scenario(parse_config({{"name", "null"}, {"wavelength", 2}}));
  Outcome o;
  o.pass = r.max_sup() <= 1e-6;
  o.detail = "sup |u_inf| " + fmt("%.3g", r.max_sup()) + " <= 1e-6";
  return o;
}

Outcome full_cloak_rate() {
  auto cfg = parse_config({{"name", "full_cloak"},
                           {"cloak", {{"kind", "C"}, {"r1", 1}, {"r2", 2}, {"eps", 0.04}, {"a", "eps"}}},
                           {"layer", {{"variant", "isotropic"}, {"c", {1, 1, 1}}}},
                           {"wavelength", 2},
                           {"contents", kHardDiskSmall},
                           {"grid", {{"ppw", 20}, {"cells_per_eps", 16}}},
                           {"solve", {{"strategy", "virtual"}}}});
  auto t0 = Clock::now();
  auto rep = convergence_sweep(cfg, {0.08, 0.04, 0.02});
  double sec = since(t0);
  Outcome o;
  o.pass = rep.eps.size() == 3 && rep.fit.slope >= 1.5 && rep.fit.slope <= 2.5 && sec <= 900;
  std::ostringstream d;
  d << "sup";
  for (size_t i = 0; i < rep.eps.size(); ++i) d << " " << fmt("%.4g", rep.sup_norm[i]) << "@" << rep.eps[i];
  d << ", slope " << fmt("%.3f", rep.fit.slope) << " in [1.5, 2.5] (95% band " << fmt("%.2f", rep.fit.lo95) << ".."
    << fmt("%.2f", rep.fit.hi95) << "), runtime " << fmt("%.1f", sec) << " s <= 900";
  o.detail = d.str();
  return o;
}

Outcome c_cloak_axial() {
  auto r = run_scenario(c_cloak(0.01, 30, 16));
  double db = r.sup[0].db;
  Outcome o;
  o.pass = db <= -30;
  o.detail = "sup " + fmt("%.2f", db) + " dB <= -30 dB at l/30; -40 dB " + (db <= -40 ? "reached" : "not reached");
  return o;
}

Outcome tilt_degradation() {
  auto rep = aperture_scan(c_cloak(0.01, 30, 16), {0, 5, 10, 20});
  bool monotone = true;
  for (size_t i = 1; i < rep.rows.size(); ++i) monotone = monotone && rep.rows[i].sup > rep.rows[i - 1].sup;
  double db5 = rep.rows[1].sup_db;
  Outcome o;
  o.pass = monotone && db5 <= -20;
  std::ostringstream d;
  d << "sup dB";
  for (const auto& row : rep.rows) d << " " << fmt("%.2f", row.sup_db) << "@" << row.tilt_deg;
  d << ", monotone " << (monotone ? "yes" : "no") << ", 5 deg " << fmt("%.2f", db5) << " dB <= -20 dB";
  o.detail = d.str();
  return o;
}

Outcome screen_linearity() {
  auto cfg = parse_config(
      {{"name", "screen"},
       {"wavelength", 2},
       {"contents",
        {{"obstacles", {{{"kind", "sound_hard"}, {"shape", {{"type", "segment"}, {"p0", {-1, 0}}, {"p1", {1, 0}}}}}}}}},
       {"grid", {{"ppw", 30}}}});
  auto rep = aperture_scan(cfg, {2.5, 5, 10});
  double lo = 1e300, hi = 0;
  std::ostringstream d;
  d << "sup/sin(tilt)";
  for (const auto& row : rep.rows) {
    lo = std::min(lo, row.ratio_to_sin);
    hi = std::max(hi, row.ratio_to_sin);
    d << " " << fmt("%.4f", row.ratio_to_sin) << "@" << row.tilt_deg;
  }
  double spread = hi / lo - 1;
  d << ", spread " << fmt("%.1f", 100 * spread) << "% <= 25%";
  return {spread <= 0.25, d.str()};
}

Outcome reciprocity() {
  const int n = 6;
  std::vector<double> inc;
  for (int a = 0; a < n; ++a) inc.push_back(360.0 * a / n);
  auto cfg = parse_config({{"name", "reciprocity"},
                           {"wavelength", 2},
                           {"incidence_deg", inc},
                           {"contents",
                            {{"inclusions",
                              {{{"shape", {{"type", "box"}, {"lo", {0.1, -0.2}}, {"hi", {0.6, 0.5}}}},
                                {"sigma", {{2, 0.3}, {0.3, 1}}},
                                {"q", {1.5, 0.2}}}}}}},
                           {"grid", {{"ppw", 20}}},
                           {"output", {{"n_dirs", n}}}});
  auto r = run_scenario(cfg);
  double worst = 0, scale = 0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      Complex x = r.patterns[a].values[b], y = r.patterns[(b + n / 2) % n].values[(a + n / 2) % n];
      worst = std::max(worst, std::abs(x - y));
      scale = std::max(scale, std::abs(x));
    }
  return {worst <= 1e-2 * scale,
          "max |u(-d,-x) - u(x,d)| " + fmt("%.3g", worst) + " <= 1e-2 * " + fmt("%.3g", scale) + " (" +
              fmt("%.2g", worst / scale) + " relative)"};
}

Outcome transformation_invariance() {
  auto phys = c_cloak(0.05, 30, 32);
  phys.incidence_deg = {45};
  phys.strategy = Strategy::Physical;
  phys.grid.refine = 4;
  auto virt = phys;
  virt.strategy = Strategy::Virtual;
  auto rp = run_scenario(phys), rv = run_scenario(virt);
  double e = relative_linf(rp.patterns[0], rv.patterns[0]);
  return {e <= 0.05, "relative L-inf " + fmt("%.3g", e) + " <= 0.05 (physical " + std::to_string(rp.unknowns) +
                         " unknowns, virtual " + std::to_string(rv.unknowns) + ")"};
}

Outcome property_suites() {
  auto t0 = Clock::now();
  auto res = run_property_suites();
  double sec = since(t0);
  bool ok = sec <= 120;
  std::ostringstream d;
  for (const auto& s : res) {
    ok = ok && s.passed;
    if (!s.passed) d << s.name << " failed (" << s.detail << "); ";
  }
  d << res.size() << " suites, runtime " << fmt("%.1f", sec) << " s <= 120";
  return {ok, d.str()};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"1 mie_oracle", mie_oracle},
      {"2 free_space_null", free_space_null},
      {"3 full_cloak_rate", full_cloak_rate},
      {"4 c_cloak_axial", c_cloak_axial},
      {"5 tilt_degradation", tilt_degradation},
      {"6 screen_linearity", screen_linearity},
      {"7 reciprocity", reciprocity},
      {"8 transformation_invariance", transformation_invariance},
      {"9 property_suites", property_suites},
  };
  int failed = 0;
  for (const auto& [name, fn] : criteria) {
    auto t0 = Clock::now();
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::cout << (o.pass ? "PASS " : "FAIL ") << name << ": " << o.detail << " [" << fmt("%.1f", since(t0)) << " s]"
              << std::endl;
  }
  std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed" << std::endl;
  return failed == 0 ? 0 : 1;
}
