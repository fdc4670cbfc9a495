#include <gtest/gtest.h>

#include <random>

#include "cloak/assumptions.hpp"
#include "cloak/errors.hpp"
#include "cloak/materials.hpp"
#include "cloak/scenario.hpp"

using namespace cloak;

namespace {

LossyLayerSpec layer(LayerVariant v, double eps = 0.01) {
  LossyLayerSpec s;
  s.variant = v;
  s.eps = eps;
  s.c = LossyLayerSpec::constants({1, 1, 1, 1});
  return s;
}

CloakParams c_cloak(double eps) {
  CloakParams p;
  p.kind = CloakKind::C;
  p.eps = eps;
  return p;
}

ObstacleSpec hard_disk(Vec c, double r) {
  ObstacleSpec ob;
  ob.kind = ObstacleKind::SoundHard;
  ob.region = std::make_shared<BallShape>(c, r);
  return ob;
}

}  // namespace

TEST(Regularity, DetectsEachViolation) {
  EXPECT_EQ(regularity_violation({identity(2), 1.0}, 0.1), "");
  EXPECT_NE(regularity_violation({0.01 * identity(2), 1.0}, 0.1), "");
  EXPECT_NE(regularity_violation({100 * identity(2), 1.0}, 0.1), "");
  EXPECT_NE(regularity_violation({identity(2), Complex(1, -0.5)}, 0.1), "");
  EXPECT_NE(regularity_violation({identity(2), Complex(0.01, 0)}, 0.1), "");
}

TEST(MaterialField, RejectsNonSymmetricSigma) {
  Mat s(2, 2);
  s << 1, 0.5, 0, 1;
  EXPECT_THROW(MaterialField::constant(s, 1.0), InvalidInput);
}

TEST(PushForward, DilationScalesQ) {
  auto m = PiecewiseMap::dilation(2, 3);
  auto pf = push_forward_medium(m, MaterialField::constant(identity(2), Complex(2, 1)));
  Medium at = pf(vec2(0.4, -0.2));
  EXPECT_LT((at.sigma - identity(2)).norm(), 1e-14);
  EXPECT_NEAR(std::abs(at.q - Complex(2, 1) / 9.0), 0, 1e-14);
}

TEST(PushForward, PullBackInverts) {
  std::mt19937 rng(31);
  std::uniform_real_distribution<double> u(-1.8, 1.8);
  auto map = build_full_cloak_map(WeightVector::ones(2), NormKind::L2, 1, 2, 0.1);
  Mat s(2, 2);
  s << 2, 0.3, 0.3, 1;
  auto base = MaterialField(2, [s](const Vec& x) { return Medium{s * (1 + x.squaredNorm()), Complex(1, x(0))}; });
  auto round = pull_back_medium(map, push_forward_medium(map, base));
  for (int t = 0; t < 200; ++t) {
    Vec x = vec2(u(rng), u(rng));
    Medium a = base(x), b = round(x);
    EXPECT_LT((a.sigma - b.sigma).norm(), 1e-10 * a.sigma.norm());
    EXPECT_LT(std::abs(a.q - b.q), 1e-10 * std::abs(a.q) + 1e-14);
  }
}

TEST(LossyLayer, CapsuleFlatPartValues) {
  const double eps = 0.01;
  auto g = AbcGeometry::capsule(eps, 1, NormKind::L2, NormKind::L2);
  auto f = build_lossy_layer(layer(LayerVariant::CLayer, eps), g);
  Medium m = f(vec2(0.2, 0.75 * eps));
  EXPECT_NEAR(m.sigma(0, 0), 1, 1e-12);
  EXPECT_NEAR(m.sigma(1, 1), eps * eps, 1e-16);
  EXPECT_NEAR(m.sigma(0, 1), 0, 1e-16);
  EXPECT_NEAR(std::abs(m.q - Complex(1, 1) / std::sqrt(eps)), 0, 1e-10);
}

TEST(LossyLayer, NormalAlignedOnCap) {
  const double eps = 0.01;
  auto g = AbcGeometry::capsule(eps, 1, NormKind::L2, NormKind::L2);
  auto f = build_lossy_layer(layer(LayerVariant::CLayer, eps), g);
  // Just off the right end along a diagonal, the eps^2 direction is radial.
  Vec nu = vec2(1, 1).normalized();
  Vec x = vec2(1, 0) + 0.75 * eps * nu;
  Medium m = f(x);
  EXPECT_NEAR(nu.dot(m.sigma * nu), eps * eps, 1e-12);
  Vec tau = vec2(-nu(1), nu(0));
  EXPECT_NEAR(tau.dot(m.sigma * tau), 1, 1e-12);
}

TEST(LossyLayer, ValidatorSeparatesCartesianFromNormalAligned) {
  const std::vector<double> eps{0.08, 0.04, 0.02, 0.01};
  auto g = AbcGeometry::capsule(1, 1, NormKind::L2, NormKind::L2);
  auto good = layer(LayerVariant::CLayer), bad = layer(LayerVariant::CLayerCartesian);
  auto rg = validate_lossy_layer(good, g, AssumptionParams::defaults_for(good, g), eps);
  auto rb = validate_lossy_layer(bad, g, AssumptionParams::defaults_for(bad, g), eps);
  EXPECT_TRUE(rg.pass);
  EXPECT_TRUE(rg.pointwise_flux_ok);
  EXPECT_FALSE(rb.pass);
  EXPECT_FALSE(rb.pointwise_flux_ok);
  EXPECT_FALSE(rb.integral_flux_ok);
}

TEST(LossyLayer, FullCloakLayerPassesIn2DAnd3D) {
  const std::vector<double> eps{0.08, 0.04, 0.02, 0.01};
  for (int dim : {2, 3}) {
    auto g = AbcGeometry::point_nbhd(Vec::Zero(dim), WeightVector::ones(dim), NormKind::L2, 1);
    auto s = layer(LayerVariant::FullCloak);
    EXPECT_TRUE(validate_lossy_layer(s, g, AssumptionParams::defaults_for(s, g), eps).pass) << dim;
  }
}

TEST(Admissibility, ObstacleMustStayInside) {
  CloakedContents cc;
  cc.obstacles.push_back(hard_disk(vec2(0, 0), 0.25));
  EXPECT_NO_THROW(assemble_physical_scenario(c_cloak(0.01), layer(LayerVariant::CLayer), cc));
  cc.obstacles[0] = hard_disk(vec2(0, 0), 0.8);
  try {
    assemble_physical_scenario(c_cloak(0.01), layer(LayerVariant::CLayer), cc);
    FAIL() << "expected AdmissibilityError";
  } catch (const AdmissibilityError& e) {
    EXPECT_EQ(e.clause(), "containment");
  }
}

TEST(Admissibility, SourceNeedsAbsorbingMedium) {
  CloakedContents cc;
  SourceSpec src;
  src.support = std::make_shared<BallShape>(vec2(0, 0), 0.2);
  src.h = [](const Vec&) { return Complex(1, 0); };
  cc.source = src;
  EXPECT_THROW(assemble_physical_scenario(c_cloak(0.01), layer(LayerVariant::CLayer), cc), AdmissibilityError);
  cc.medium.q = Complex(1, 0.5);
  EXPECT_NO_THROW(assemble_physical_scenario(c_cloak(0.01), layer(LayerVariant::CLayer), cc));
}

TEST(Admissibility, RejectsBadCloakParameters) {
  auto p = c_cloak(1.5);
  EXPECT_THROW(assemble_physical_scenario(p, layer(LayerVariant::CLayer), {}), InvalidInput);
}

TEST(Scenario, RegionLabels) {
  auto s = assemble_physical_scenario(c_cloak(0.01), layer(LayerVariant::CLayer), {});
  EXPECT_EQ(s.region_label(vec2(0, 3)), "exterior");
  EXPECT_EQ(s.region_label(vec2(0, 1.5)), "shell");
  EXPECT_EQ(s.region_label(vec2(0, 0.8)), "lossy_layer");
  EXPECT_EQ(s.region_label(vec2(0, 0.1)), "contents");
  // Outside the cloak the medium is free space; in the shell it is anisotropic.
  EXPECT_LT((s.medium(vec2(0, 3)).sigma - identity(2)).norm(), 1e-15);
  EXPECT_GT((s.medium(vec2(0.3, 1.5)).sigma - identity(2)).norm(), 0.1);
}
