#include "cloak/quadrature.hpp"

#include <cmath>

#include "cloak/errors.hpp"

namespace cloak {

std::vector<std::pair<double, double>> gauss_legendre(int n, double a, double b) {
  if (n < 1) throw InvalidInput("gauss_legendre: n must be positive");
  std::vector<std::pair<double, double>> out(n);
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1, p1 = 0;
      for (int j = 0; j < n; ++j) {
        double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1) * z * p1 - j * p2) / (j + 1);
      }
      dp = n * (z * p0 - p1) / (z * z - 1);
      double dz = p0 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-15) break;
    }
    double w = 2.0 / ((1 - z * z) * dp * dp);
    out[i] = {mid - half * z, half * w};
    out[n - 1 - i] = {mid + half * z, half * w};
  }
  return out;
}

namespace {

std::vector<std::pair<double, double>> midpoints(int n, double a, double b) {
  std::vector<std::pair<double, double>> out(n);
  double h = (b - a) / n;
  for (int i = 0; i < n; ++i) out[i] = {a + (i + 0.5) * h, h};
  return out;
}

}  // namespace

std::vector<QuadPoint> shell_quadrature(const AbcGeometry& geom, double r_in, double r_out,
                                        const ShellQuadOptions& opt) {
  if (geom.kind() == GeometryKind::Box) throw UnsupportedFeature("shell quadrature needs a radius family");
  if (!(r_in >= 0 && r_out > r_in)) throw InvalidInput("shell quadrature: need 0 <= r_in < r_out");
  const int n = geom.dim();
  auto radial = opt.rule == RadialRule::Gauss ? gauss_legendre(opt.n_radial, r_in, r_out)
                                              : midpoints(opt.n_radial, r_in, r_out);
  std::vector<QuadPoint> pts;

  for (const Component& c : geom.components()) {
    const int m = static_cast<int>(c.ball_axes.size());
    // Directions on the unit gauge sphere of the ball axes, with the
    // Jacobian factor |s|^m of the generalized polar map.
    std::vector<std::pair<Vec, double>> dirs;
    Vec ws(m);
    for (int i = 0; i < m; ++i) ws(i) = c.w[c.ball_axes[i]];
    WeightVector wsub(ws);
    auto push_dir = [&](const Vec& u, double dw) {
      double g = weighted_norm(u, wsub, c.p);
      Vec s = u / g;
      Vec full = Vec::Zero(n);
      for (int i = 0; i < m; ++i) full(c.ball_axes[i]) = s(i);
      for (const auto& h : c.halfspaces)
        if (h.sign * full(h.axis) < 0) return;
      dirs.push_back({full, dw * std::pow(u.norm() / g, m)});
    };
    if (m == 1) {
      for (double sgn : {-1.0, 1.0}) push_dir(vec({sgn}), 1.0);
    } else if (m == 2) {
      for (auto [t, dt] : midpoints(opt.n_angular, 0, 2 * kPi)) push_dir(vec2(std::cos(t), std::sin(t)), dt);
    } else if (m == 3) {
      for (auto [mu, dmu] : midpoints(opt.n_polar, -1, 1)) {
        double st = std::sqrt(1 - mu * mu);
        for (auto [ph, dph] : midpoints(opt.n_angular, 0, 2 * kPi))
          push_dir(vec3(st * std::cos(ph), st * std::sin(ph), mu), dmu * dph);
      }
    } else {
      throw UnsupportedFeature("shell quadrature: component without ball axes");
    }

    // Tensor grid over the extruded axes.
    std::vector<std::pair<Vec, double>> ext = {{Vec::Zero(n), 1.0}};
    for (const auto& e : c.extrusion) {
      std::vector<std::pair<Vec, double>> next;
      for (const auto& [base, bw] : ext) {
        for (auto [t, dt] : midpoints(opt.n_extrude, e.lo, e.hi)) {
          Vec v = base;
          v(e.axis) = t;
          next.push_back({v, bw * dt});
        }
      }
      ext = std::move(next);
    }

    for (const auto& [rho, drho] : radial) {
      double jr = std::pow(rho, m - 1) * drho;
      for (const auto& [s, dw] : dirs) {
        Vec ball = c.center;
        for (int a : c.ball_axes) ball(a) += rho * s(a);
        for (const auto& [e, ew] : ext) {
          Vec x = ball;
          for (const auto& ex : c.extrusion) x(ex.axis) = e(ex.axis);
          pts.push_back({x, jr * dw * ew});
        }
      }
    }
  }
  return pts;
}

}  // namespace cloak
