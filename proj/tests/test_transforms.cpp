#include <gtest/gtest.h>

#include <random>

#include "cloak/errors.hpp"
#include "cloak/transforms.hpp"

using namespace cloak;

namespace {

struct Case {
  std::string name;
  PiecewiseMap map;
  double box;
};

std::vector<Case> maps() {
  std::vector<Case> out;
  out.push_back({"full_2d", build_full_cloak_map(WeightVector::ones(2), NormKind::L2, 1, 2, 0.1), 2.5});
  out.push_back({"full_3d", build_full_cloak_map(WeightVector::ones(3), NormKind::L2, 1, 2, 0.1), 2.5});
  AbcMapParams p;
  p.eps = 0.05;
  out.push_back({"C", build_abc_map(GeometryKind::C, p), 3.5});
  p.w = WeightVector(vec3(1, 0.5, 1));
  out.push_back({"D", build_abc_map(GeometryKind::D, p), 3.5});
  p.w = WeightVector::ones(3);
  p.b = 0.5;
  out.push_back({"E", build_abc_map(GeometryKind::E, p), 3.5});
  return out;
}

Vec random_point(std::mt19937& rng, int dim, double scale) {
  std::uniform_real_distribution<double> u(-scale, scale);
  Vec x(dim);
  for (int i = 0; i < dim; ++i) x(i) = u(rng);
  return x;
}

}  // namespace

TEST(Blowup, Coefficients) {
  auto k = blowup_coefficients(1, 2, 0.1);
  EXPECT_NEAR(k.A, 0.9 * 2 / 1.9, 1e-15);
  EXPECT_NEAR(k.B, 1 / 1.9, 1e-15);
  EXPECT_NEAR(k.A + k.B * 0.1, 1, 1e-14);
  EXPECT_NEAR(k.A + k.B * 2, 2, 1e-14);
  EXPECT_THROW(blowup_coefficients(1, 2, 1.5), InvalidInput);
}

TEST(Blowup, RadialEndpoints) {
  auto m = build_full_cloak_map(WeightVector::ones(2), NormKind::L2, 1, 2, 0.1);
  for (double t : {0.0, 0.7, 2.0, 4.1}) {
    Vec d = vec2(std::cos(t), std::sin(t));
    EXPECT_NEAR(m.eval(0.1 * d).norm(), 1.0, 1e-12);
    EXPECT_NEAR((m.eval(2.0 * d) - 2.0 * d).norm(), 0, 1e-12);
    EXPECT_NEAR(m.eval(0.05 * d).norm(), 0.5, 1e-12);
    EXPECT_NEAR((m.eval(3.0 * d) - 3.0 * d).norm(), 0, 0);
  }
}

TEST(Blowup, RoundTrip) {
  std::mt19937 rng(17);
  for (const auto& c : maps()) {
    for (int trial = 0; trial < 400; ++trial) {
      Vec x = random_point(rng, c.map.dim(), c.box);
      if (!c.map.in_domain(x)) continue;
      Vec y = c.map.eval(x);
      EXPECT_LT((c.map.eval_inverse(y) - x).norm(), 1e-12) << c.name;
    }
  }
}

TEST(Blowup, JacobianMatchesFiniteDifferences) {
  std::mt19937 rng(23);
  const double h = 1e-6;
  for (const auto& c : maps()) {
    int checked = 0;
    for (int trial = 0; trial < 400 && checked < 100; ++trial) {
      Vec x = random_point(rng, c.map.dim(), c.box);
      if (!c.map.in_domain(x)) continue;
      int piece = c.map.piece_index(x);
      Mat j = c.map.jacobian(x);
      Mat fd(x.size(), x.size());
      bool same_piece = true;
      for (int i = 0; i < x.size(); ++i) {
        Vec e = Vec::Zero(x.size());
        e(i) = h;
        if (c.map.piece_index(x + e) != piece || c.map.piece_index(x - e) != piece) same_piece = false;
        if (!same_piece) break;
        fd.col(i) = (c.map.eval(x + e) - c.map.eval(x - e)) / (2 * h);
      }
      if (!same_piece) continue;
      ++checked;
      EXPECT_LT((fd - j).norm() / std::max(1.0, j.norm()), 1e-6) << c.name << " at " << x.transpose();
    }
    EXPECT_GT(checked, 20) << c.name;
  }
}

TEST(Blowup, InverseAndComposition) {
  auto m = build_full_cloak_map(WeightVector::ones(2), NormKind::L2, 1, 2, 0.1);
  auto id = compose(m.inverse(), m);
  for (Vec x : {vec2(0.05, 0.02), vec2(0.3, -1.1), vec2(2.5, 0.1)}) EXPECT_LT((id.eval(x) - x).norm(), 1e-12);
}

TEST(PiecewiseMap, OutsideDomainThrows) {
  AbcMapParams p;
  p.eps = 0.05;
  auto m = build_radial_blowup(WeightVector::ones(2), NormKind::L2, 1, 2, 0.05);
  EXPECT_FALSE(m.in_domain(vec2(0.01, 0)));
  EXPECT_THROW(m.eval(vec2(0.01, 0)), InvalidInput);
  EXPECT_THROW(m.eval(vec3(0.5, 0, 0)), InvalidInput);
  EXPECT_THROW(build_abc_map(GeometryKind::Box, p), InvalidInput);
}

TEST(PiecewiseMap, AffineAndDilation) {
  Mat a(2, 2);
  a << 2, 1, 0, 3;
  auto m = PiecewiseMap::affine(a, vec2(1, -1));
  EXPECT_LT((m.eval(vec2(1, 1)) - vec2(4, 2)).norm(), 1e-15);
  EXPECT_LT((m.eval_inverse(vec2(4, 2)) - vec2(1, 1)).norm(), 1e-14);
  EXPECT_NEAR(PiecewiseMap::dilation(3, 2).jacobian(vec3(1, 2, 3)).determinant(), 8, 1e-14);
  EXPECT_THROW(PiecewiseMap::affine(Mat::Zero(2, 2), vec2(0, 0)), SingularJacobian);
}
