#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>

#include "cloak/errors.hpp"
#include "cloak/harness.hpp"
#include "cloak/selftest.hpp"

using namespace cloak;
using nlohmann::json;

namespace {

const char* kCConfig = R"({
  "name": "c_small",
  "cloak": {"kind": "C", "r1": 1, "r2": 2, "eps": 0.04, "a": 1},
  "layer": {"variant": "C_layer", "c": [1, 1, 1, 1]},
  "wavelength": 2,
  "incidence_deg": [0, 30],
  "contents": {"obstacles": [{"kind": "sound_hard", "shape": {"type": "ball", "center": [0, 0], "radius": 0.25}}]},
  "grid": {"ppw": 15, "cells_per_eps": 8},
  "solve": {"strategy": "virtual"}
})";

const char* kMieConfig = R"({
  "name": "mie",
  "k": 3.141592653589793,
  "contents": {"obstacles": [{"shape": {"type": "ball", "center": [0, 0], "radius": 1}}]}
})";

std::vector<double> geometric(double hi, int n) {
  std::vector<double> e;
  for (int i = 0; i < n; ++i) e.push_back(hi / std::pow(2, i));
  return e;
}

}  // namespace

TEST(FitRate, ExactPowerLaw) {
  auto eps = geometric(0.08, 5);
  std::vector<double> v;
  for (double e : eps) v.push_back(3 * e * e);
  auto f = fit_rate(eps, v);
  EXPECT_NEAR(f.slope, 2.0, 1e-12);
  EXPECT_NEAR(std::exp(f.intercept), 3, 1e-10);
  EXPECT_NEAR(f.stderr_slope, 0, 1e-10);
}

TEST(FitRate, ConstantHasZeroSlope) {
  auto eps = geometric(0.08, 4);
  auto f = fit_rate(eps, std::vector<double>(eps.size(), 0.3));
  EXPECT_NEAR(f.slope, 0, 1e-12);
}

TEST(FitRate, NoisyCubic) {
  std::mt19937 rng(1234);
  std::uniform_real_distribution<double> noise(-0.05, 0.05);
  for (int trial = 0; trial < 50; ++trial) {
    auto eps = geometric(0.08, 5);
    std::vector<double> v;
    for (double e : eps) v.push_back(e * e * e * (1 + noise(rng)));
    auto f = fit_rate(eps, v);
    EXPECT_GE(f.slope, 2.7);
    EXPECT_LE(f.slope, 3.3);
    EXPECT_LE(f.lo95, f.slope);
    EXPECT_GE(f.hi95, f.slope);
  }
}

TEST(FitRate, NeedsTwoPoints) { EXPECT_THROW(fit_rate({0.1}, {1.0}), InvalidInput); }

TEST(Config, CanonicalRoundTripIsByteIdentical) {
  for (const char* text : {kCConfig, kMieConfig}) {
    auto cfg = parse_config(json::parse(text));
    std::string once = emit_config(cfg);
    std::string twice = emit_config(parse_config(json::parse(once)));
    EXPECT_EQ(once, twice);
  }
}

TEST(Config, WavelengthAndEpsTiedHalfLength) {
  auto j = json::parse(kCConfig);
  auto cfg = parse_config(j);
  EXPECT_NEAR(cfg.k, kPi, 1e-15);
  j["cloak"]["a"] = "eps";
  cfg = parse_config(j).with_eps(0.02);
  EXPECT_EQ(cfg.cloak.a, 0.02);
  EXPECT_EQ(cfg.cloak.eps, 0.02);
}

TEST(Config, RejectsBadInput) {
  auto j = json::parse(kCConfig);
  j["bogus"] = 1;
  EXPECT_THROW(parse_config(j), InvalidInput);
  j = json::parse(kCConfig);
  j["k"] = 2;
  EXPECT_THROW(parse_config(j), InvalidInput);  // both k and wavelength
  j = json::parse(kCConfig);
  j["cloak"]["eps"] = "small";
  EXPECT_THROW(parse_config(j), InvalidInput);
  j = json::parse(kCConfig);
  j["contents"]["obstacles"][0]["kind"] = "impedance";
  EXPECT_THROW(parse_config(j), UnsupportedFeature);
}

TEST(Prepare, StrategySelection) {
  auto cfg = parse_config(json::parse(kCConfig));
  EXPECT_EQ(prepare_run(cfg).space, Space::Virtual);
  cfg.strategy = Strategy::Auto;
  cfg.cloak.eps = 0.001;
  EXPECT_EQ(prepare_run(cfg).space, Space::Virtual);
  cfg.cloak.eps = 0.8;  // well above 4h = 4 * 2 / 15
  EXPECT_EQ(prepare_run(cfg).space, Space::Physical);
  cfg.cloak.kind = CloakKind::D;
  cfg.cloak.dim = 3;
  EXPECT_THROW(prepare_run(cfg), UnsupportedFeature);
}

TEST(Run, FreeSpaceDiskMatchesSeries) {
  auto cfg = parse_config(json::parse(kMieConfig));
  auto r = run_scenario(cfg);
  ASSERT_EQ(r.patterns.size(), 1u);
  auto mie = mie_farfield(DiskBoundary::Hard, 1, kPi, vec2(1, 0));
  EXPECT_LT(relative_linf(r.patterns[0], mie.pattern), 0.03);
  EXPECT_LT(r.residual, 1e-8);
}

TEST(Run, OutputsAndDeterminism) {
  auto cfg = parse_config(json::parse(kCConfig));
  cfg.dump_fields = true;
  auto a = run_scenario(cfg), b = run_scenario(cfg);
  ASSERT_EQ(a.patterns.size(), 2u);
  for (size_t i = 0; i < a.patterns.size(); ++i)
    for (size_t j = 0; j < a.patterns[i].values.size(); ++j) ASSERT_EQ(a.patterns[i].values[j], b.patterns[i].values[j]);
  auto dir = std::filesystem::path(::testing::TempDir()) / "cloak_run";
  std::filesystem::remove_all(dir);
  write_run_outputs(dir.string(), a, cfg);
  EXPECT_TRUE(std::filesystem::exists(dir / "farfield_0.csv"));
  EXPECT_TRUE(std::filesystem::exists(dir / "farfield_1.csv"));
  EXPECT_TRUE(std::filesystem::exists(dir / "field_0.cfld"));
  std::ifstream is(dir / "report.json");
  auto rep = json::parse(is);
  EXPECT_EQ(rep["config"], to_json(cfg));
  std::filesystem::remove_all(dir);
}

TEST(Sweep, SmallerEpsScattersLess) {
  auto cfg = parse_config(json::parse(kCConfig));
  cfg.incidence_deg = {0};
  auto rep = convergence_sweep(cfg, {0.02, 0.08, 0.04});
  ASSERT_EQ(rep.eps.size(), 3u);
  EXPECT_EQ(rep.eps[0], 0.08);
  EXPECT_GT(rep.sup_norm[0], rep.sup_norm[1]);
  EXPECT_GT(rep.sup_norm[1], rep.sup_norm[2]);
  EXPECT_GT(rep.fit.slope, 0);
}

TEST(Sweep, ExcludesInvalidEps) {
  auto cfg = parse_config(json::parse(kCConfig));
  cfg.incidence_deg = {0};
  auto rep = convergence_sweep(cfg, {0.04, 1.5});
  ASSERT_EQ(rep.eps.size(), 1u);
  EXPECT_FALSE(rep.warnings.empty());
}

TEST(Aperture, TiltIncreasesScattering) {
  auto cfg = parse_config(json::parse(kCConfig));
  auto rep = aperture_scan(cfg, {0, 10});
  ASSERT_EQ(rep.rows.size(), 2u);
  EXPECT_GT(rep.rows[1].sup, rep.rows[0].sup);
  EXPECT_NEAR(rep.rows[1].ratio_to_sin, rep.rows[1].sup / std::sin(10 * kPi / 180), 1e-12);
  for (const auto& row : rep.rows)
    for (double v : row.restricted_sup) EXPECT_LE(v, row.sup);
}

TEST(Selftest, AllSuitesPass) {
  auto res = run_property_suites();
  EXPECT_EQ(res.size(), 7u);
  for (const auto& s : res) EXPECT_TRUE(s.passed) << s.name << ": " << s.detail;
}
