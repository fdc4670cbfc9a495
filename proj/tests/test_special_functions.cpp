#include <gtest/gtest.h>

#include <random>

#include "cloak/special_functions.hpp"

using namespace cloak;

namespace {

// Reference values computed independently (double precision).
struct Ref {
  int n;
  double x, j, y;
};
const Ref kRefs[] = {
    {0, 1, 0.7651976865579666, 0.088256964215677},
    {0, 0.01, 0.9999750001562495, -3.0054556370836463},
    {1, 2.5, 0.4970941024642741, 0.1459181379667858},
    {5, 10, -0.2340615281867936, 0.13540304768936218},
    {3, 0.5, 0.002563729994587244, -42.05949430472389},
    {20, 5, 2.7703300521289436e-11, -593396529.6914325},
    {0, 50, 0.0558123276692518, -0.0980649954700771},
    {10, 30, -0.1298768939985887, 0.07505670212239714},
};

}  // namespace

TEST(Bessel, ReferenceValues) {
  for (const auto& r : kRefs) {
    EXPECT_NEAR(bessel_j(r.n, r.x), r.j, 1e-12 * std::max(1.0, std::abs(r.j))) << r.n << " " << r.x;
    EXPECT_NEAR(bessel_y(r.n, r.x), r.y, 1e-11 * std::max(1.0, std::abs(r.y))) << r.n << " " << r.x;
  }
}

TEST(Bessel, HankelCombinesJAndY) {
  Complex h = hankel1(2, 3.3);
  EXPECT_DOUBLE_EQ(h.real(), bessel_j(2, 3.3));
  EXPECT_DOUBLE_EQ(h.imag(), bessel_y(2, 3.3));
}

TEST(Bessel, WronskianOverRandomArguments) {
  std::mt19937 rng(101);
  std::uniform_real_distribution<double> ux(0.05, 60);
  for (int trial = 0; trial < 300; ++trial) {
    double x = ux(rng);
    auto t = bessel_table(40, x);
    for (int n = 0; n < 40; ++n) {
      double w = t.J[n + 1] * t.Y[n] - t.J[n] * t.Y[n + 1];
      double scale = std::max(1.0, std::abs(t.J[n + 1] * t.Y[n]));
      EXPECT_NEAR(w, 2 / (kPi * x), 1e-12 * scale) << n << " " << x;
    }
  }
}

TEST(Bessel, DerivativesFromRecurrence) {
  const double x = 4.2, h = 1e-6;
  auto t = bessel_table(8, x);
  for (int n = 0; n <= 8; ++n) {
    EXPECT_NEAR(t.dJ[n], (bessel_j(n, x + h) - bessel_j(n, x - h)) / (2 * h), 1e-8);
    EXPECT_NEAR(t.dY[n], (bessel_y(n, x + h) - bessel_y(n, x - h)) / (2 * h), 1e-8);
  }
}

TEST(Bessel, TableMatchesPointEvaluation) {
  auto t = bessel_table(12, 7.5);
  for (int n = 0; n <= 12; ++n) {
    EXPECT_NEAR(t.J[n], bessel_j(n, 7.5), 1e-14);
    EXPECT_NEAR(t.Y[n], bessel_y(n, 7.5), 1e-12 * std::max(1.0, std::abs(t.Y[n])));
  }
}
