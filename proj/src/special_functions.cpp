#include "cloak/special_functions.hpp"

#include <cmath>

#include "cloak/errors.hpp"

namespace cloak {

namespace {

constexpr double kEulerGamma = 0.57721566490153286061;

// Unnormalized J_0..J_n by downward recurrence from a high start order.
std::vector<double> miller_j(int n_need, double x) {
  const double base = std::max<double>(n_need, x);
  int start = static_cast<int>(base + 30 + std::sqrt(160.0 * base));
  start += start % 2;
  std::vector<double> j(start + 2, 0.0);
  j[start + 1] = 0.0;
  j[start] = 1e-30;
  for (int k = start; k >= 1; --k) {
    j[k - 1] = (2.0 * k / x) * j[k] - j[k + 1];
    if (std::abs(j[k - 1]) > 1e250) {
      for (int i = k - 1; i <= start; ++i) j[i] *= 1e-250;
    }
  }
  double norm = j[0];
  for (int k = 2; k <= start; k += 2) norm += 2 * j[k];
  for (double& v : j) v /= norm;
  return j;
}

}  // namespace

BesselTable bessel_table(int max_order, double x) {
  if (!(x > 0)) throw InvalidInput("Bessel functions are evaluated for x > 0");
  if (max_order < 0) throw InvalidInput("Bessel order must be nonnegative");
  const int m = std::max(max_order, 1) + 1;
  std::vector<double> j = miller_j(m, x);
  const int top = static_cast<int>(j.size()) - 2;

  const double log_term = std::log(x / 2) + kEulerGamma;
  double s0 = 0, s1 = 0;
  for (int k = 1; 2 * k + 1 <= top; ++k) {
    double sign = (k % 2) ? -1.0 : 1.0;
    s0 += sign * j[2 * k] / k;
    s1 += sign * (j[2 * k - 1] - j[2 * k + 1]) / k;
  }
  std::vector<double> y(m + 1);
  y[0] = (2 / kPi) * (log_term * j[0] - 2 * s0);
  y[1] = (2 / kPi) * (log_term * j[1] - j[0] / x + s1);
  for (int n = 1; n < m; ++n) y[n + 1] = (2.0 * n / x) * y[n] - y[n - 1];

  BesselTable t;
  t.J.assign(j.begin(), j.begin() + max_order + 1);
  t.Y.assign(y.begin(), y.begin() + max_order + 1);
  t.dJ.resize(max_order + 1);
  t.dY.resize(max_order + 1);
  t.dJ[0] = -j[1];
  t.dY[0] = -y[1];
  for (int n = 1; n <= max_order; ++n) {
    t.dJ[n] = j[n - 1] - (n / x) * j[n];
    t.dY[n] = y[n - 1] - (n / x) * y[n];
  }
  return t;
}

double bessel_j(int n, double x) {
  double sign = (n < 0 && (n % 2)) ? -1.0 : 1.0;
  return sign * bessel_table(std::abs(n), x).J[std::abs(n)];
}

double bessel_y(int n, double x) {
  double sign = (n < 0 && (n % 2)) ? -1.0 : 1.0;
  return sign * bessel_table(std::abs(n), x).Y[std::abs(n)];
}

Complex hankel1(int n, double x) { return {bessel_j(n, x), bessel_y(n, x)}; }

}  // namespace cloak
