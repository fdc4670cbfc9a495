#include "cloak/selftest.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <random>
#include <sstream>

#include "cloak/assumptions.hpp"
#include "cloak/errors.hpp"
#include "cloak/farfield.hpp"
#include "cloak/materials.hpp"
#include "cloak/special_functions.hpp"
#include "cloak/transforms.hpp"

namespace cloak {

namespace {

struct Family {
  std::string label;
  AbcGeometry geom;  // at radius r2
};

const NormKind kNorms[] = {NormKind::L1, NormKind::L2, NormKind::Linf};

// The geometry families exercised by every map suite.
std::vector<Family> families(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> wd(0.5, 1.0);
  std::vector<Family> f;
  for (NormKind p : kNorms) {
    f.push_back({"point2d/p=" + to_string(p), AbcGeometry::point_nbhd(vec2(0, 0), WeightVector(vec2(wd(rng), wd(rng))), p, 2)});
    f.push_back({"point3d/p=" + to_string(p),
                 AbcGeometry::point_nbhd(vec3(0, 0, 0), WeightVector(vec3(wd(rng), wd(rng), wd(rng))), p, 2)});
    f.push_back({"C/p=" + to_string(p), AbcGeometry::capsule(2, 1, p, kNorms[(static_cast<int>(p) + 1) % 3])});
    f.push_back({"D/p=" + to_string(p), AbcGeometry::slender(WeightVector(vec3(1, wd(rng), wd(rng))), 2, 1, p)});
    f.push_back({"E/p=" + to_string(p), AbcGeometry::cushion(2, 1, 0.5, p)});
  }
  return f;
}

Vec random_in_box(const BoundingBox& b, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0, 1);
  Vec x(b.lo.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = b.lo(i) + u(rng) * (b.hi(i) - b.lo(i));
  return x;
}

// Rejection sample with lo < region_distance < hi.
Vec random_in_shell(const AbcGeometry& g, double lo, double hi, std::mt19937_64& rng) {
  const BoundingBox b = g.with_radius(hi).bounding_box();
  for (int it = 0; it < 100000; ++it) {
    Vec x = random_in_box(b, rng);
    double d = g.region_distance(x);
    if (d > lo && d < hi) return x;
  }
  throw Error("rejection sampling failed");
}

template <class Body>
SuiteResult suite(const std::string& name, Body body) {
  auto t0 = std::chrono::steady_clock::now();
  SuiteResult r;
  r.name = name;
  try {
    body(r);
  } catch (const std::exception& e) {
    r.passed = false;
    r.detail = std::string("exception: ") + e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

const double kR1 = 1.0, kR2 = 2.0, kEps = 0.05;

}  // namespace

std::vector<SuiteResult> run_property_suites(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const auto fams = families(rng);
  std::vector<SuiteResult> out;

  out.push_back(suite("map_round_trip", [&](SuiteResult& r) {
    for (const auto& f : fams) {
      PiecewiseMap m = build_blowup_map(f.geom, kR1, kR2, kEps, true);
      const BoundingBox b = f.geom.bounding_box().expanded(0.5);
      for (int i = 0; i < 200; ++i) {
        Vec x = random_in_box(b, rng);
        Vec y = m.eval(x);
        double e = (m.eval_inverse(y) - x).norm();
        r.worst = std::max(r.worst, e);
        ++r.cases;
        if (e > 1e-10) r.detail = f.label + ": round trip error " + std::to_string(e);
      }
    }
    r.passed = r.worst <= 1e-10;
  }));

  out.push_back(suite("boundary_identity", [&](SuiteResult& r) {
    for (const auto& f : fams) {
      PiecewiseMap m = build_blowup_map(f.geom, kR1, kR2, kEps, true);
      ShellQuadOptions q{1, 32, 8, 4, RadialRule::Midpoint};
      for (const auto& qp : shell_quadrature(f.geom, kR2 * (1 - 1e-13), kR2, q)) {
        double e = (m.eval(qp.x) - qp.x).norm();
        r.worst = std::max(r.worst, e);
        ++r.cases;
      }
      // The small region's boundary lands on the radius-r1 member.
      for (const auto& qp : shell_quadrature(f.geom, kEps * (1 - 1e-13), kEps, q)) {
        double e = std::abs(f.geom.region_distance(m.eval(qp.x)) - kR1);
        r.worst = std::max(r.worst, e);
        ++r.cases;
      }
    }
    r.passed = r.worst <= 1e-9;
  }));

  out.push_back(suite("jacobian_vs_finite_differences", [&](SuiteResult& r) {
    int skipped = 0;
    for (const auto& f : fams) {
      PiecewiseMap m = build_blowup_map(f.geom, kR1, kR2, kEps, true);
      const int n = f.geom.dim();
      for (int i = 0; i < 150; ++i) {
        Vec x = random_in_shell(f.geom, kEps * 1.05, kR2 * 0.97, rng);
        const double h = 1e-6;
        Mat fd(n, n);
        for (int c = 0; c < n; ++c) {
          Vec e = Vec::Zero(n);
          e(c) = h;
          fd.col(c) = (m.eval(x + e) - m.eval(x - e)) / (2 * h);
        }
        Mat j = m.jacobian(x);
        // Skip points straddling a ridge of a non-smooth norm.
        Mat jp = m.jacobian(x + Vec::Constant(n, 2 * h)), jm = m.jacobian(x - Vec::Constant(n, 2 * h));
        if ((jp - jm).norm() > 1e-3 * j.norm()) {
          ++skipped;
          continue;
        }
        double e = (fd - j).norm() / j.norm();
        r.worst = std::max(r.worst, e);
        ++r.cases;
      }
    }
    r.detail = std::to_string(skipped) + " ridge points skipped";
    r.passed = r.worst <= 1e-6 && r.cases > 1000;
  }));

  out.push_back(suite("push_forward_conserved_integrals", [&](SuiteResult& r) {
    // int over the physical shell of q~ equals the virtual volume of the
    // shell, and int sigma~ equals int J J^T over the virtual shell. The two
    // sides use independent quadratures fitted to each space.
    for (const auto& f : fams) {
      if (f.geom.p() != NormKind::L2) continue;
      PiecewiseMap m = build_blowup_map(f.geom, kR1, kR2, kEps, true);
      const int n = f.geom.dim();
      MaterialField phys = push_forward_medium(m, MaterialField::background(n));
      ShellQuadOptions q{48, 192, 48, 24, RadialRule::Gauss};
      double q_phys = 0, vol_virt = 0;
      Mat s_phys = Mat::Zero(n, n), s_virt = Mat::Zero(n, n);
      for (const auto& qp : shell_quadrature(f.geom, kR1, kR2, q)) {
        Medium md = phys(qp.x);
        q_phys += qp.w * md.q.real();
        s_phys += qp.w * md.sigma;
      }
      for (const auto& qp : shell_quadrature(f.geom, kEps, kR2, q)) {
        Mat j = m.jacobian(qp.x);
        vol_virt += qp.w;
        s_virt += qp.w * j * j.transpose();
      }
      double e = std::max(std::abs(q_phys - vol_virt) / vol_virt, (s_phys - s_virt).norm() / s_virt.norm());
      r.worst = std::max(r.worst, e);
      ++r.cases;
      if (e > 1e-3) r.detail += f.label + " ";
    }
    r.passed = r.worst <= 1e-3;
  }));

  out.push_back(suite("lossy_layer_validator", [&](SuiteResult& r) {
    const std::vector<double> eps{0.08, 0.04, 0.02, 0.01};
    struct Case {
      LayerVariant v;
      AbcGeometry g;
    };
    std::vector<Case> cases{
        {LayerVariant::FullCloak, AbcGeometry::point_nbhd(vec2(0, 0), WeightVector::ones(2), NormKind::L2, 1)},
        {LayerVariant::FullCloak, AbcGeometry::point_nbhd(vec3(0, 0, 0), WeightVector::ones(3), NormKind::L2, 1)},
        {LayerVariant::CLayer, AbcGeometry::capsule(1, 1, NormKind::L2, NormKind::L2)},
        {LayerVariant::DLayer, AbcGeometry::slender(WeightVector::ones(3), 1, 1, NormKind::L2)},
        {LayerVariant::ELayer, AbcGeometry::cushion(1, 1, 0.5, NormKind::L2)}};
    ShellQuadOptions q{16, 64, 16, 16, RadialRule::Gauss};
    r.passed = true;
    for (const auto& c : cases) {
      LossyLayerSpec spec;
      spec.variant = c.v;
      spec.c = LossyLayerSpec::constants({1, 1, 1, 1});
      auto rep = validate_lossy_layer(spec, c.g, AssumptionParams::defaults_for(spec, c.g), eps, q);
      ++r.cases;
      if (!rep.pass) {
        r.passed = false;
        r.detail += to_string(c.v) + " on " + rep.geometry + " fails; ";
      }
    }
  }));

  out.push_back(suite("bessel_wronskian", [&](SuiteResult& r) {
    std::uniform_int_distribution<int> nd(0, 40);
    std::uniform_real_distribution<double> xd(0.05, 120);
    for (int i = 0; i < 400; ++i) {
      int n = nd(rng);
      double x = xd(rng);
      BesselTable t = bessel_table(n + 1, x);
      double w = t.J[n] * t.dY[n] - t.dJ[n] * t.Y[n];
      double ref = 2 / (kPi * x);
      double e = std::abs(w - ref) / ref;
      if (!std::isfinite(e)) continue;  // Y overflow far below the turning point
      r.worst = std::max(r.worst, e);
      ++r.cases;
    }
    r.passed = r.worst <= 1e-9;
  }));

  out.push_back(suite("kirchhoff_radius_independence", [&](SuiteResult& r) {
    for (DiskBoundary kind : {DiskBoundary::Hard, DiskBoundary::Soft}) {
      for (double k : {1.0, kPi, 6.0}) {
        const Vec d = vec2(std::cos(0.3 * k), std::sin(0.3 * k));
        FarFieldPattern ff[2];
        const double radii[2] = {2.0, 2.5};
        for (int s = 0; s < 2; ++s) {
          const int n = 512;
          std::vector<Vec> pts;
          for (double th : equispaced_angles(n)) pts.push_back(radii[s] * vec2(std::cos(th), std::sin(th)));
          auto near = mie_scattered_field(kind, 1.0, k, d, pts);
          CircleSamples cs;
          cs.radius = radii[s];
          for (int i = 0; i < n; ++i) {
            Vec nu = pts[i] / radii[s];
            cs.u.push_back(near[i].u);
            cs.dudn.push_back(near[i].dx * nu(0) + near[i].dy * nu(1));
          }
          ff[s] = kirchhoff_farfield(cs, k, d, 100);
        }
        double e = relative_linf(ff[0], ff[1]);
        r.worst = std::max(r.worst, e);
        ++r.cases;
      }
    }
    r.passed = r.worst <= 1e-6;
  }));
  return out;
}

nlohmann::json to_json(const std::vector<SuiteResult>& r) {
  nlohmann::json a = nlohmann::json::array();
  for (const auto& s : r)
    a.push_back({{"name", s.name},
                 {"passed", s.passed},
                 {"cases", s.cases},
                 {"worst", s.worst},
                 {"seconds", s.seconds},
                 {"detail", s.detail}});
  return a;
}

}  // namespace cloak
