#include <gtest/gtest.h>

#include <cstdio>
#include <random>

#include "cloak/errors.hpp"
#include "cloak/field_io.hpp"
#include "cloak/solver.hpp"

using namespace cloak;

namespace {

const double kK = kPi;  // wavelength 2
const double kLambda = 2;

CloakParams free_space() {
  CloakParams p;
  p.kind = CloakKind::None;
  return p;
}

Scenario with_obstacle(ObstacleKind kind, ShapePtr shape) {
  CloakedContents cc;
  ObstacleSpec ob;
  ob.kind = kind;
  ob.region = std::move(shape);
  cc.obstacles.push_back(ob);
  return assemble_physical_scenario(free_space(), LossyLayerSpec{}, cc);
}

Scenario with_inclusion(ShapePtr shape, Medium m) {
  CloakedContents cc;
  cc.inclusions.push_back({std::move(shape), m});
  return assemble_physical_scenario(free_space(), LossyLayerSpec{}, cc);
}

std::shared_ptr<Grid> square(double half, double h, int pml) {
  return std::make_shared<Grid>(Grid::uniform(vec2(-half, -half), vec2(half, half), h, pml));
}

// Relative l2 errors of value and normal derivative against the series.
std::pair<double, double> mie_near_errors(const CircleSamples& cs, const Vec& d) {
  auto th = equispaced_angles(static_cast<int>(cs.u.size()));
  std::vector<Vec> pts;
  for (double t : th) pts.push_back(cs.radius * vec2(std::cos(t), std::sin(t)));
  auto ref = mie_scattered_field(DiskBoundary::Hard, 1.0, kK, d, pts);
  double n = 0, den = 0, dn = 0, dden = 0;
  for (size_t i = 0; i < th.size(); ++i) {
    Complex rdn = ref[i].dx * std::cos(th[i]) + ref[i].dy * std::sin(th[i]);
    n += std::norm(cs.u[i] - ref[i].u);
    den += std::norm(ref[i].u);
    dn += std::norm(cs.dudn[i] - rdn);
    dden += std::norm(rdn);
  }
  return {std::sqrt(n / den), std::sqrt(dn / dden)};
}

}  // namespace

TEST(Grid, UniformCellsAndPml) {
  auto g = square(1, 0.1, 5);
  EXPECT_EQ(g->nx(), 30);
  EXPECT_EQ(g->ny(), 30);
  EXPECT_NEAR(g->x().max_interior_width(), 0.1, 1e-12);
  EXPECT_TRUE(g->x().in_pml(0));
  EXPECT_FALSE(g->x().in_pml(5));
  EXPECT_TRUE(g->x().in_pml(25));
  EXPECT_EQ(g->stretch(0, 0.3, kK), Complex(1, 0));
  EXPECT_GT(g->stretch(0, -1.4, kK).imag(), 0);
  EXPECT_FALSE(g->check(kK).empty());  // 5 cells of 0.1 are thinner than a wavelength
  EXPECT_TRUE(square(1, 0.1, 20)->check(kK).empty());
}

TEST(Grid, GradedZonesRespectGrowth) {
  GridSpec spec;
  spec.lo = vec2(-2, -2);
  spec.hi = vec2(2, 2);
  spec.h = 0.1;
  spec.zones = {{0, -0.05, 0.05, 0.005}, {1, 0.4, 0.5, 0.01}};
  spec.pml.cells = 10;
  Grid g(spec);
  for (int axis = 0; axis < 2; ++axis) {
    const Axis& a = axis == 0 ? g.x() : g.y();
    for (int i = 0; i + 1 < a.cells(); ++i) {
      double r = a.width(i + 1) / a.width(i);
      EXPECT_LE(std::max(r, 1 / r), spec.growth * 1.05) << axis << " " << i;
      EXPECT_LE(a.width(i), spec.h * 1.0001);
    }
    for (const auto& z : spec.zones) {
      if (z.axis != axis) continue;
      for (int i = 0; i < a.cells(); ++i)
        if (a.faces[i + 1] > z.lo && a.faces[i] < z.hi) EXPECT_LE(a.width(i), z.h * 1.0001);
    }
  }
}

TEST(Rasterize, ConstantMediumIsFreeSpace) {
  auto s = assemble_physical_scenario(free_space(), LossyLayerSpec{}, {});
  auto g = square(1, 0.1, 4);
  auto c = rasterize(s, *g);
  for (double v : c.sxx) EXPECT_DOUBLE_EQ(v, 1);
  for (double v : c.syy) EXPECT_DOUBLE_EQ(v, 1);
  for (double v : c.apx) EXPECT_DOUBLE_EQ(v, 1);
  for (double v : c.frac) EXPECT_DOUBLE_EQ(v, 1);
  for (auto v : c.q) EXPECT_EQ(v, Complex(1, 0));
  EXPECT_FALSE(c.anisotropic);
}

TEST(Rasterize, HarmonicMeanAcrossInterface) {
  // sigma = 1 for x < 0 and 4 for x > 0; the face on x = 0 sees 2*1*4/5.
  auto s = with_inclusion(std::make_shared<BoxShape>(vec2(0, -5), vec2(5, 5)), {4 * identity(2), 1.0});
  auto g = square(1, 0.1, 4);
  auto c = rasterize(s, *g);
  int i0 = g->x().locate_center(-0.04);
  for (int j = 6; j < g->ny() - 6; ++j) {
    EXPECT_NEAR(c.sxx[c.xf(i0, j)], 1.6, 1e-12);
    EXPECT_NEAR(c.sxx[c.xf(i0 - 2, j)], 1, 1e-12);
    EXPECT_NEAR(c.sxx[c.xf(i0 + 2, j)], 4, 1e-12);
  }
}

TEST(Rasterize, StaircaseMaskRule) {
  auto s = with_obstacle(ObstacleKind::SoundHard, std::make_shared<BallShape>(vec2(0, 0), 0.43));
  auto g = square(1, 0.1, 4);
  SolveOptions opt;
  opt.hard = HardTreatment::Staircase;
  auto c = rasterize(s, *g, opt);
  BallShape ball(vec2(0, 0), 0.43);
  auto inside = [&](int i, int j) { return ball.contains(vec2(g->x().center(i), g->y().center(j))); };
  for (int j = 0; j < g->ny(); ++j)
    for (int i = 0; i + 1 < g->nx(); ++i) {
      double want = inside(i, j) || inside(i + 1, j) ? 0 : 1;
      EXPECT_EQ(c.apx[c.xf(i, j)], want) << i << " " << j;
    }
  for (int j = 0; j + 1 < g->ny(); ++j)
    for (int i = 0; i < g->nx(); ++i) {
      double want = inside(i, j) || inside(i, j + 1) ? 0 : 1;
      EXPECT_EQ(c.apy[c.yf(i, j)], want) << i << " " << j;
    }
}

TEST(Rasterize, CutCellFractionsMatchArea) {
  auto s = with_obstacle(ObstacleKind::SoundHard, std::make_shared<BallShape>(vec2(0.013, -0.021), 0.5));
  auto g = square(1, 0.05, 4);
  auto c = rasterize(s, *g);
  double open = 0;
  for (int j = 0; j < g->ny(); ++j)
    for (int i = 0; i < g->nx(); ++i)
      if (!g->x().in_pml(i) && !g->y().in_pml(j)) open += c.frac[c.cell(i, j)] * g->x().width(i) * g->y().width(j);
  EXPECT_NEAR(open, 4 - kPi * 0.25, 2e-4);
}

TEST(Rasterize, ImpedanceIsUnsupported) {
  CloakedContents cc;
  ObstacleSpec ob;
  ob.kind = ObstacleKind::Impedance;
  ob.region = std::make_shared<BallShape>(vec2(0, 0), 0.3);
  SurfaceFunction sf;
  sf.s = [](const Vec&) { return Complex(-1, 0); };
  ob.impedance = sf;
  cc.obstacles.push_back(ob);
  auto s = assemble_physical_scenario(free_space(), LossyLayerSpec{}, cc);
  EXPECT_THROW(rasterize(s, *square(1, 0.1, 4)), UnsupportedFeature);
}

TEST(Extract, ZeroFieldGivesZeroSamples) {
  DiscreteField f;
  f.grid = square(2, 0.1, 10);
  f.values = Eigen::VectorXcd::Zero(f.grid->size());
  auto cs = extract_circle(f, 1.2, 64);
  for (size_t i = 0; i < cs.u.size(); ++i) {
    EXPECT_EQ(cs.u[i], Complex(0, 0));
    EXPECT_EQ(cs.dudn[i], Complex(0, 0));
  }
}

TEST(Extract, PlantedPlaneWave) {
  // lambda / 20 cells; interpolated plane wave and its normal derivative.
  DiscreteField f;
  f.grid = square(2, kLambda / 20, 10);
  const Vec d = vec2(std::cos(0.4), std::sin(0.4));
  IncidentWave inc(kK, d);
  f.values.resize(f.grid->size());
  for (int j = 0; j < f.grid->ny(); ++j)
    for (int i = 0; i < f.grid->nx(); ++i)
      f.values(f.grid->index(i, j)) = inc.at(vec2(f.grid->x().center(i), f.grid->y().center(j)));
  auto cs = extract_circle(f, 1.3, 256);
  auto th = equispaced_angles(256);
  double eu = 0, ed = 0;
  for (size_t i = 0; i < th.size(); ++i) {
    Vec n = vec2(std::cos(th[i]), std::sin(th[i]));
    Complex u = inc.at(1.3 * n), du = Complex(0, kK * d.dot(n)) * u;
    eu = std::max(eu, std::abs(cs.u[i] - u));
    ed = std::max(ed, std::abs(cs.dudn[i] - du) / kK);
  }
  EXPECT_LE(eu, 1e-3);
  EXPECT_LE(ed, 5e-3);  // the derivative loses one order
}

TEST(Extract, RejectsCircleInPmlOrScatterer) {
  DiscreteField f;
  f.grid = square(2, 0.1, 10);
  f.values = Eigen::VectorXcd::Zero(f.grid->size());
  EXPECT_THROW(extract_circle(f, 1.95, 64), InvalidInput);
  BoundingBox bb{vec2(-1, -1), vec2(1, 1)};
  EXPECT_THROW(extract_circle(f, 1.3, 64, bb), InvalidInput);
}

TEST(Solve, HardDiskNearFieldAgainstSeries) {
  auto s = with_obstacle(ObstacleKind::SoundHard, std::make_shared<BallShape>(vec2(0, 0), 1.0));
  auto g = square(2.5, kLambda / 20, 20);
  IncidentWave inc(kK, vec2(1, 0));
  SolveReport rep;
  auto f = assemble_and_solve(s, inc, g, &rep);
  EXPECT_LT(rep.residual, 1e-8);
  auto [eu, edn] = mie_near_errors(extract_circle(f, 2.0, 512, s.contrast), inc.d);
  EXPECT_LE(eu, 0.02);
  EXPECT_LE(edn, 0.02);
}

TEST(Solve, PmlReflectionAndNull) {
  CloakedContents cc;
  SourceSpec src;
  src.support = std::make_shared<BoxShape>(vec2(-0.3, -0.3), vec2(0.3, 0.3));
  src.h = [](const Vec& x) {
    return std::abs(x(0)) <= 0.3 && std::abs(x(1)) <= 0.3 ? Complex(1, 0) : Complex(0, 0);
  };
  cc.source = src;
  auto s = assemble_physical_scenario(free_space(), LossyLayerSpec{}, cc);
  const double h = kLambda / 20;
  auto small = square(2, h, 20), big = square(8, h, 40);
  IncidentWave inc(kK, vec2(1, 0));
  auto a = assemble_and_solve(s, inc, small), b = assemble_and_solve(s, inc, big);
  double mx = 0, err = 0;
  for (int j = 0; j < small->ny(); ++j)
    for (int i = 0; i < small->nx(); ++i) {
      if (small->x().in_pml(i) || small->y().in_pml(j)) continue;
      int ib = big->x().locate_center(small->x().center(i) + 1e-9);
      int jb = big->y().locate_center(small->y().center(j) + 1e-9);
      mx = std::max(mx, std::abs(b.at(ib, jb)));
      err = std::max(err, std::abs(a.at(i, j) - b.at(ib, jb)));
    }
  EXPECT_LE(err / mx, 1e-4);

  auto empty = assemble_physical_scenario(free_space(), LossyLayerSpec{}, {});
  auto z = assemble_and_solve(empty, inc, small);
  EXPECT_LE(z.values.cwiseAbs().maxCoeff(), 1e-6);
}

TEST(Solve, LossyInclusionAbsorbsAndBalancesEnergy) {
  auto s = with_inclusion(std::make_shared<BallShape>(vec2(0.1, -0.05), 0.5), {identity(2), Complex(2, 0.5)});
  auto g = square(2, kLambda / 30, 30);
  IncidentWave inc(kK, vec2(1, 0));
  HelmholtzSolver solver(s, g, kK);
  auto u = solver.solve(inc);
  double absorbed = absorbed_power(to_total(u, inc), solver.coefficients());
  EXPECT_GT(absorbed, 0);
  auto ff = kirchhoff_farfield(extract_circle(u, 1.4, 512, s.contrast), kK, inc.d, 400);
  double scattered = 0;
  for (auto v : ff.values) scattered += std::norm(v) * 2 * kPi / 400;
  double ext = -std::sqrt(8 * kPi / kK) * (std::exp(Complex(0, kPi / 4)) * ff.values[0]).real();
  // Extinction = scattered + absorbed, in units of the far-field normalization (k^2 absorbed / k).
  EXPECT_NEAR(ext, scattered + kK * absorbed, 0.03 * ext);
}

TEST(Solve, ReciprocityOnOneFactorization) {
  auto s = with_inclusion(std::make_shared<BallShape>(vec2(0.2, 0.1), 0.4), {2 * identity(2), Complex(1.5, 0)});
  auto g = square(1.8, kLambda / 20, 20);
  HelmholtzSolver solver(s, g, kK);
  const int n = 6;
  std::vector<FarFieldPattern> pats;
  for (int a = 0; a < n; ++a) {
    auto inc = IncidentWave::at_angle(kK, 2 * kPi * a / n);
    pats.push_back(kirchhoff_farfield(extract_circle(solver.solve(inc), 1.3, 512, s.contrast), kK, inc.d, n));
  }
  // u_inf(x; d) = u_inf(-d; -x); directions j and j + n/2 are opposite.
  double worst = 0, scale = 0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      Complex x = pats[a].values[b], y = pats[(b + n / 2) % n].values[(a + n / 2) % n];
      worst = std::max(worst, std::abs(x - y));
      scale = std::max(scale, std::abs(x));
    }
  EXPECT_LE(worst / scale, 1e-2);
}

TEST(Solve, Deterministic) {
  auto s = with_obstacle(ObstacleKind::SoundSoft, std::make_shared<BallShape>(vec2(0.1, 0), 0.5));
  auto g = square(1.5, 0.1, 20);
  IncidentWave inc(kK, vec2(0, 1));
  auto a = assemble_and_solve(s, inc, g), b = assemble_and_solve(s, inc, g);
  ASSERT_EQ(a.values.size(), b.values.size());
  for (Eigen::Index i = 0; i < a.values.size(); ++i) ASSERT_EQ(a.values(i), b.values(i));
}

TEST(FieldIo, RoundTrip) {
  auto s = with_obstacle(ObstacleKind::SoundHard, std::make_shared<BallShape>(vec2(0, 0), 0.4));
  GridSpec spec;
  spec.lo = vec2(-1.5, -1.5);
  spec.hi = vec2(1.5, 1.5);
  spec.h = 0.1;
  spec.zones = {{0, -0.2, 0.2, 0.03}};
  spec.pml.cells = 20;
  auto g = std::make_shared<Grid>(spec);
  auto f = assemble_and_solve(s, IncidentWave(kK, vec2(1, 0)), g);
  std::string path = ::testing::TempDir() + "roundtrip.cfld";
  write_field(path, f);
  auto back = read_field(path);
  std::remove(path.c_str());
  EXPECT_EQ(back.kind, f.kind);
  EXPECT_EQ(back.k, f.k);
  ASSERT_EQ(back.grid->nx(), g->nx());
  ASSERT_EQ(back.grid->ny(), g->ny());
  EXPECT_EQ(back.grid->x().faces, g->x().faces);
  EXPECT_EQ(back.grid->y().pml_lo, g->y().pml_lo);
  for (Eigen::Index i = 0; i < f.values.size(); ++i) ASSERT_EQ(back.values(i), f.values(i));
}
