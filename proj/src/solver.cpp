#include "cloak/solver.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>

#include <Eigen/SparseLU>
#ifdef CLOAK_HAVE_UMFPACK
#include <Eigen/UmfPackSupport>
#endif

#include "cloak/errors.hpp"

namespace cloak {

IncidentWave::IncidentWave(double k_, Vec d_) : k(k_), d(std::move(d_)) {
  if (!(k > 0)) throw InvalidInput("wavenumber must be positive");
  if (d.size() != 2 || std::abs(d.norm() - 1) > 1e-12) throw InvalidInput("incident direction must be a 2D unit vector");
}

IncidentWave IncidentWave::at_angle(double k, double theta) {
  return IncidentWave(k, vec2(std::cos(theta), std::sin(theta)));
}

Complex IncidentWave::at(const Vec& x) const {
  return std::exp(Complex(0, k * (x(0) * d(0) + x(1) * d(1))));
}

std::string to_string(FieldKind k) {
  switch (k) {
    case FieldKind::Scattered: return "scattered";
    case FieldKind::Total: return "total";
    case FieldKind::Incident: return "incident";
  }
  return "?";
}

namespace {

using Clock = std::chrono::steady_clock;
double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Box2 {
  double x0, x1, y0, y1;
  bool meets(const BoundingBox& b) const {
    return x1 >= b.lo(0) && x0 <= b.hi(0) && y1 >= b.lo(1) && y0 <= b.hi(1);
  }
};

// Open length fraction of the segment a + t (b - a), t in [0, 1], for a
// region given by its membership test. Crossings are located by bisection.
template <class Inside>
double open_fraction(const Vec& a, const Vec& b, const Inside& inside, int probes = 9) {
  std::vector<double> ts(probes);
  std::vector<char> in(probes);
  for (int i = 0; i < probes; ++i) {
    ts[i] = static_cast<double>(i) / (probes - 1);
    in[i] = inside(a + ts[i] * (b - a));
  }
  double open = 0, last = 0;
  bool state = in[0];
  for (int i = 1; i < probes; ++i) {
    if (in[i] == in[i - 1]) continue;
    double lo = ts[i - 1], hi = ts[i];
    for (int it = 0; it < 48; ++it) {
      double mid = 0.5 * (lo + hi);
      if (static_cast<bool>(inside(a + mid * (b - a))) == static_cast<bool>(in[i - 1])) lo = mid;
      else hi = mid;
    }
    double t = 0.5 * (lo + hi);
    if (!state) open += t - last;
    last = t;
    state = in[i];
  }
  if (!state) open += 1 - last;
  return open;
}

// Screens: does the link p -> q cross the segment s0 -> s1?
bool segments_cross(const Vec& p, const Vec& q, const Vec& s0, const Vec& s1) {
  auto cross = [](const Vec& u, const Vec& v) { return u(0) * v(1) - u(1) * v(0); };
  Vec r = q - p, s = s1 - s0;
  double den = cross(r, s);
  if (std::abs(den) < 1e-300) return false;
  Vec w = s0 - p;
  double t = cross(w, s) / den, u = cross(w, r) / den;
  const double tol = 1e-12;
  return t >= -tol && t <= 1 + tol && u >= -tol && u <= 1 + tol;
}

// Overlap length of the face segment with a screen lying on the same line.
double collinear_overlap(const Vec& f0, const Vec& f1, const Vec& s0, const Vec& s1, double tol) {
  auto cross = [](const Vec& u, const Vec& v) { return u(0) * v(1) - u(1) * v(0); };
  Vec f = f1 - f0;
  double len = f.norm();
  Vec dir = f / len;
  if (std::abs(cross(dir, s0 - f0)) > tol || std::abs(cross(dir, s1 - f0)) > tol) return 0;
  double a = dir.dot(s0 - f0), b = dir.dot(s1 - f0);
  if (a > b) std::swap(a, b);
  return std::max(0.0, std::min(b, len) - std::max(a, 0.0));
}

}  // namespace

Coefficients rasterize(const Scenario& s, const Grid& g, const SolveOptions& opt) {
  if (s.dim != 2) throw UnsupportedFeature("the solver is two-dimensional");
  for (const auto& ob : s.obstacles)
    if (ob.kind == ObstacleKind::Impedance) throw UnsupportedFeature("impedance obstacles are not supported by the solver");
  const int nx = g.nx(), ny = g.ny();
  const Axis& X = g.x();
  const Axis& Y = g.y();
  Coefficients c;
  c.nx = nx;
  c.ny = ny;
  c.sxx.assign(static_cast<size_t>(nx - 1) * ny, 1.0);
  c.apx.assign(c.sxx.size(), 1.0);
  c.syy.assign(static_cast<size_t>(nx) * (ny - 1), 1.0);
  c.apy.assign(c.syy.size(), 1.0);
  c.sxy.assign(static_cast<size_t>(nx - 1) * (ny - 1), 0.0);
  c.q.assign(static_cast<size_t>(nx) * ny, Complex(1.0, 0.0));
  c.frac.assign(c.q.size(), 1.0);
  c.soft.assign(c.q.size(), 0);
  c.source.assign(c.q.size(), Complex(0, 0));

  const int ns = std::max(1, opt.subsamples);
  auto medium_at = [&](const Vec& x) -> Medium {
    if (!s.medium.defined_at(x)) return {identity(2), Complex(1.0, 0.0)};
    return s.medium(x);
  };
  // Sub-sample offsets inside [0, 1].
  std::vector<double> sub(ns);
  for (int i = 0; i < ns; ++i) sub[i] = (i + 0.5) / ns;

  auto hard_inside = [&](const Vec& x) {
    for (const auto& ob : s.obstacles)
      if (ob.kind == ObstacleKind::SoundHard && !ob.region->is_screen() && ob.region->contains(x)) return true;
    return false;
  };

  if (s.contrast) {
    const BoundingBox cb = s.contrast->expanded(1e-12);
    // x-faces: dual box [xc_i, xc_{i+1}] x [y_j, y_{j+1}].
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i + 1 < nx; ++i) {
        Box2 b{X.center(i), X.center(i + 1), Y.faces[j], Y.faces[j + 1]};
        if (!b.meets(cb)) continue;
        double acc = 0;
        for (int r = 0; r < ns; ++r) {
          double inv = 0;
          for (int t = 0; t < ns; ++t) {
            Vec x = vec2(b.x0 + sub[t] * (b.x1 - b.x0), b.y0 + sub[r] * (b.y1 - b.y0));
            inv += 1.0 / medium_at(x).sigma(0, 0);
          }
          acc += ns / inv;
        }
        c.sxx[c.xf(i, j)] = acc / ns;
      }
    for (int j = 0; j + 1 < ny; ++j)
      for (int i = 0; i < nx; ++i) {
        Box2 b{X.faces[i], X.faces[i + 1], Y.center(j), Y.center(j + 1)};
        if (!b.meets(cb)) continue;
        double acc = 0;
        for (int r = 0; r < ns; ++r) {
          double inv = 0;
          for (int t = 0; t < ns; ++t) {
            Vec x = vec2(b.x0 + sub[r] * (b.x1 - b.x0), b.y0 + sub[t] * (b.y1 - b.y0));
            inv += 1.0 / medium_at(x).sigma(1, 1);
          }
          acc += ns / inv;
        }
        c.syy[c.yf(i, j)] = acc / ns;
      }
    for (int j = 0; j + 1 < ny; ++j)
      for (int i = 0; i + 1 < nx; ++i) {
        Box2 b{X.center(i), X.center(i + 1), Y.center(j), Y.center(j + 1)};
        if (!b.meets(cb)) continue;
        double acc = 0;
        for (int r = 0; r < ns; ++r)
          for (int t = 0; t < ns; ++t)
            acc += medium_at(vec2(b.x0 + sub[t] * (b.x1 - b.x0), b.y0 + sub[r] * (b.y1 - b.y0))).sigma(0, 1);
        acc /= ns * ns;
        if (std::abs(acc) > 1e-14) {
          c.sxy[c.cn(i, j)] = acc;
          c.anisotropic = true;
        }
      }
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nx; ++i) {
        Box2 b{X.faces[i], X.faces[i + 1], Y.faces[j], Y.faces[j + 1]};
        if (!b.meets(cb)) continue;
        Complex acc = 0;
        for (int r = 0; r < ns; ++r)
          for (int t = 0; t < ns; ++t)
            acc += medium_at(vec2(b.x0 + sub[t] * (b.x1 - b.x0), b.y0 + sub[r] * (b.y1 - b.y0))).q;
        c.q[c.cell(i, j)] = acc / double(ns * ns);
      }
  }

  // Obstacles.
  for (const auto& ob : s.obstacles) {
    const BoundingBox bb = ob.region->bbox();
    auto cell_range = [&](const Axis& a, double lo, double hi, int& i0, int& i1) {
      i0 = std::max(0, a.locate_center(lo) - 2);
      i1 = std::min(a.cells() - 1, a.locate_center(hi) + 2);
    };
    int i0, i1, j0, j1;
    cell_range(X, bb.lo(0), bb.hi(0), i0, i1);
    cell_range(Y, bb.lo(1), bb.hi(1), j0, j1);

    if (ob.region->is_screen()) {
      if (ob.kind != ObstacleKind::SoundHard) throw UnsupportedFeature("only sound-hard screens are supported");
      const auto* seg = dynamic_cast<const SegmentShape*>(ob.region.get());
      if (!seg) throw UnsupportedFeature("screens must be straight segments");
      const double tol = 1e-9 * g.coarse();
      for (int j = j0; j <= j1; ++j)
        for (int i = i0; i <= i1; ++i) {
          if (i + 1 < nx) {
            Vec f0 = vec2(X.faces[i + 1], Y.faces[j]), f1 = vec2(X.faces[i + 1], Y.faces[j + 1]);
            double ov = collinear_overlap(f0, f1, seg->p0(), seg->p1(), tol);
            double& ap = c.apx[c.xf(i, j)];
            if (ov > 0) ap = std::max(0.0, ap - ov / (f1 - f0).norm());
            else if (segments_cross(vec2(X.center(i), Y.center(j)), vec2(X.center(i + 1), Y.center(j)), seg->p0(), seg->p1()))
              ap = 0;
          }
          if (j + 1 < ny) {
            Vec f0 = vec2(X.faces[i], Y.faces[j + 1]), f1 = vec2(X.faces[i + 1], Y.faces[j + 1]);
            double ov = collinear_overlap(f0, f1, seg->p0(), seg->p1(), tol);
            double& ap = c.apy[c.yf(i, j)];
            if (ov > 0) ap = std::max(0.0, ap - ov / (f1 - f0).norm());
            else if (segments_cross(vec2(X.center(i), Y.center(j)), vec2(X.center(i), Y.center(j + 1)), seg->p0(), seg->p1()))
              ap = 0;
          }
        }
      continue;
    }

    if (ob.kind == ObstacleKind::SoundSoft) {
      for (int j = j0; j <= j1; ++j)
        for (int i = i0; i <= i1; ++i)
          if (ob.region->contains(vec2(X.center(i), Y.center(j)))) c.soft[c.cell(i, j)] = 1;
      continue;
    }

    // Sound-hard solid obstacle.
    if (opt.hard == HardTreatment::Staircase) {
      auto in = [&](int i, int j) { return ob.region->contains(vec2(X.center(i), Y.center(j))); };
      for (int j = j0; j <= j1; ++j)
        for (int i = i0; i <= i1; ++i) {
          bool here = in(i, j);
          if (here) c.frac[c.cell(i, j)] = 0;
          if (i + 1 < nx && here != in(i + 1, j)) c.apx[c.xf(i, j)] = 0;
          if (j + 1 < ny && here != in(i, j + 1)) c.apy[c.yf(i, j)] = 0;
          if (here) {
            if (i + 1 < nx) c.apx[c.xf(i, j)] = 0;
            if (j + 1 < ny) c.apy[c.yf(i, j)] = 0;
            if (i > 0) c.apx[c.xf(i - 1, j)] = 0;
            if (j > 0) c.apy[c.yf(i, j - 1)] = 0;
          }
        }
      continue;
    }
    const int lines = 16;
    for (int j = j0; j <= j1; ++j)
      for (int i = i0; i <= i1; ++i) {
        const double xa = X.faces[i], xb = X.faces[i + 1], ya = Y.faces[j], yb = Y.faces[j + 1];
        double f = 0;
        for (int l = 0; l < lines; ++l) {
          double y = ya + (l + 0.5) / lines * (yb - ya);
          f += open_fraction(vec2(xa, y), vec2(xb, y), hard_inside);
        }
        c.frac[c.cell(i, j)] = std::min(c.frac[c.cell(i, j)], f / lines);
        if (i + 1 < nx) {
          double& ap = c.apx[c.xf(i, j)];
          ap = std::min(ap, open_fraction(vec2(xb, ya), vec2(xb, yb), hard_inside));
        }
        if (j + 1 < ny) {
          double& ap = c.apy[c.yf(i, j)];
          ap = std::min(ap, open_fraction(vec2(xa, yb), vec2(xb, yb), hard_inside));
        }
      }
  }
  // Closed cells carry no flux.
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      if (c.frac[c.cell(i, j)] > 1e-12) continue;
      c.frac[c.cell(i, j)] = 0;
      if (i + 1 < nx) c.apx[c.xf(i, j)] = 0;
      if (j + 1 < ny) c.apy[c.yf(i, j)] = 0;
      if (i > 0) c.apx[c.xf(i - 1, j)] = 0;
      if (j > 0) c.apy[c.yf(i, j - 1)] = 0;
    }

  // Interior sources: -h V + flux of H through the cell boundary.
  if (s.source && s.source->support) {
    const auto& src = *s.source;
    const BoundingBox bb = src.support->bbox();
    int i0 = std::max(0, X.locate_center(bb.lo(0)) - 2), i1 = std::min(nx - 1, X.locate_center(bb.hi(0)) + 2);
    int j0 = std::max(0, Y.locate_center(bb.lo(1)) - 2), j1 = std::min(ny - 1, Y.locate_center(bb.hi(1)) + 2);
    for (int j = j0; j <= j1; ++j)
      for (int i = i0; i <= i1; ++i) {
        const double xa = X.faces[i], xb = X.faces[i + 1], ya = Y.faces[j], yb = Y.faces[j + 1];
        if (src.has_h()) {
          Complex acc = 0;
          for (int r = 0; r < ns; ++r)
            for (int t = 0; t < ns; ++t) acc += src.h_at(vec2(xa + sub[t] * (xb - xa), ya + sub[r] * (yb - ya)));
          c.source[c.cell(i, j)] -= acc / double(ns * ns) * (xb - xa) * (yb - ya);
        }
        if (src.has_H()) {
          // Flux through the right and top faces, shared with the neighbour.
          Complex fx = 0, fy = 0;
          for (int t = 0; t < ns; ++t) {
            fx += src.H_at(vec2(xb, ya + sub[t] * (yb - ya)))(0);
            fy += src.H_at(vec2(xa + sub[t] * (xb - xa), yb))(1);
          }
          fx *= (yb - ya) / ns;
          fy *= (xb - xa) / ns;
          c.source[c.cell(i, j)] += fx + fy;
          if (i + 1 < nx) c.source[c.cell(i + 1, j)] -= fx;
          if (j + 1 < ny) c.source[c.cell(i, j + 1)] -= fy;
          // Left and bottom boundary faces of the scanned window.
          if (i == i0) {
            Complex f = 0;
            for (int t = 0; t < ns; ++t) f += src.H_at(vec2(xa, ya + sub[t] * (yb - ya)))(0);
            c.source[c.cell(i, j)] -= f * (yb - ya) / double(ns);
          }
          if (j == j0) {
            Complex f = 0;
            for (int t = 0; t < ns; ++t) f += src.H_at(vec2(xa + sub[t] * (xb - xa), ya))(1);
            c.source[c.cell(i, j)] -= f * (xb - xa) / double(ns);
          }
        }
      }
  }
  return c;
}

// ------------------------------------------------------------------ solver

namespace {

using SpMat = Eigen::SparseMatrix<Complex>;
using Trip = Eigen::Triplet<Complex>;

// A = -K + k^2 M with the PML folded into the coefficients. `free` assembles
// the free-space operator on the same grid.
SpMat assemble(const Grid& g, const Coefficients& c, double k, bool free) {
  const int nx = g.nx(), ny = g.ny();
  const Axis& X = g.x();
  const Axis& Y = g.y();
  std::vector<Complex> sxc(nx), syc(ny), sxf(nx + 1), syf(ny + 1);
  for (int i = 0; i < nx; ++i) sxc[i] = g.stretch(0, X.center(i), k);
  for (int j = 0; j < ny; ++j) syc[j] = g.stretch(1, Y.center(j), k);
  for (int i = 0; i <= nx; ++i) sxf[i] = g.stretch(0, X.faces[i], k);
  for (int j = 0; j <= ny; ++j) syf[j] = g.stretch(1, Y.faces[j], k);

  std::vector<Trip> t;
  t.reserve(static_cast<size_t>(g.size()) * (c.anisotropic && !free ? 13 : 5));
  std::vector<Complex> diag(g.size(), 0.0);
  auto link = [&](long a, long b, Complex w) {
    diag[a] -= w;
    diag[b] -= w;
    t.emplace_back(a, b, w);
    t.emplace_back(b, a, w);
  };
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i + 1 < nx; ++i) {
      long f = c.xf(i, j);
      double coef = free ? 1.0 : c.sxx[f] * c.apx[f];
      if (coef == 0) continue;
      double dx = X.center(i + 1) - X.center(i);
      link(g.index(i, j), g.index(i + 1, j), coef * Y.width(j) * syc[j] / (dx * sxf[i + 1]));
    }
  for (int j = 0; j + 1 < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      long f = c.yf(i, j);
      double coef = free ? 1.0 : c.syy[f] * c.apy[f];
      if (coef == 0) continue;
      double dy = Y.center(j + 1) - Y.center(j);
      link(g.index(i, j), g.index(i, j + 1), coef * X.width(i) * sxc[i] / (dy * syf[j + 1]));
    }
  // Dirichlet walls behind the PML.
  for (int j = 0; j < ny; ++j) {
    diag[g.index(0, j)] -= Y.width(j) * syc[j] / (0.5 * X.width(0) * sxf[0]);
    diag[g.index(nx - 1, j)] -= Y.width(j) * syc[j] / (0.5 * X.width(nx - 1) * sxf[nx]);
  }
  for (int i = 0; i < nx; ++i) {
    diag[g.index(i, 0)] -= X.width(i) * sxc[i] / (0.5 * Y.width(0) * syf[0]);
    diag[g.index(i, ny - 1)] -= X.width(i) * sxc[i] / (0.5 * Y.width(ny - 1) * syf[ny]);
  }
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      long a = g.index(i, j);
      Complex q = free ? Complex(1.0) : c.q[a] * c.frac[a];
      diag[a] += k * k * q * X.width(i) * Y.width(j) * sxc[i] * syc[j];
    }
  if (!free && c.anisotropic) {
    for (int j = 0; j + 1 < ny; ++j)
      for (int i = 0; i + 1 < nx; ++i) {
        double sxy = c.sxy[c.cn(i, j)];
        if (sxy == 0) continue;
        const std::array<long, 4> id{g.index(i, j), g.index(i + 1, j), g.index(i, j + 1), g.index(i + 1, j + 1)};
        bool open = c.apx[c.xf(i, j)] == 1 && c.apx[c.xf(i, j + 1)] == 1 && c.apy[c.yf(i, j)] == 1 &&
                    c.apy[c.yf(i + 1, j)] == 1;
        for (long a : id) open = open && c.frac[a] == 1 && !c.soft[a];
        if (!open) continue;
        double dx = X.center(i + 1) - X.center(i), dy = Y.center(j + 1) - Y.center(j);
        const std::array<double, 4> gx{-1 / (2 * dx), 1 / (2 * dx), -1 / (2 * dx), 1 / (2 * dx)};
        const std::array<double, 4> gy{-1 / (2 * dy), -1 / (2 * dy), 1 / (2 * dy), 1 / (2 * dy)};
        double area = dx * dy;
        for (int r = 0; r < 4; ++r)
          for (int s = 0; s < 4; ++s) {
            double kv = sxy * area * (gx[r] * gy[s] + gy[r] * gx[s]);
            if (r == s) diag[id[r]] -= kv;
            else t.emplace_back(id[r], id[s], -kv);
          }
      }
  }
  for (long a = 0; a < g.size(); ++a) t.emplace_back(a, a, diag[a]);
  SpMat m(g.size(), g.size());
  m.setFromTriplets(t.begin(), t.end());
  m.makeCompressed();
  return m;
}

}  // namespace

struct HelmholtzSolver::Impl {
  SpMat full;     // operator with every cell
  SpMat contrast; // full minus the free-space operator
  SpMat reduced;  // fixed cells replaced by identity rows and columns
  std::vector<char> fixed;
#ifdef CLOAK_HAVE_UMFPACK
  Eigen::UmfPackLU<SpMat> lu;
#else
  Eigen::SparseLU<SpMat> lu;
#endif
};

HelmholtzSolver::HelmholtzSolver(const Scenario& s, std::shared_ptr<const Grid> grid, double k, const SolveOptions& opt)
    : impl_(std::make_unique<Impl>()), grid_(std::move(grid)), k_(k) {
  if (!grid_) throw InvalidInput("solver needs a grid");
  if (!(k > 0)) throw InvalidInput("wavenumber must be positive");
  const Grid& g = *grid_;
  auto t0 = Clock::now();
  report_.warnings = g.check(k);
  report_.unknowns = g.size();
  if (s.contrast) {
    const auto& b = *s.contrast;
    if (b.lo(0) < g.x().lo || b.hi(0) > g.x().hi || b.lo(1) < g.y().lo || b.hi(1) > g.y().hi)
      report_.warnings.push_back("scatterer reaches into the PML");
  }
  coef_ = rasterize(s, g, opt);
  impl_->full = assemble(g, coef_, k, false);
  impl_->contrast = impl_->full - assemble(g, coef_, k, true);
  impl_->fixed.assign(g.size(), 0);
  for (long a = 0; a < g.size(); ++a)
    impl_->fixed[a] = coef_.soft[a] || coef_.frac[a] == 0;

  std::vector<Trip> t;
  t.reserve(impl_->full.nonZeros());
  for (int col = 0; col < impl_->full.outerSize(); ++col)
    for (SpMat::InnerIterator it(impl_->full, col); it; ++it) {
      if (impl_->fixed[it.row()] || impl_->fixed[it.col()]) continue;
      t.emplace_back(it.row(), it.col(), it.value());
    }
  for (long a = 0; a < g.size(); ++a)
    if (impl_->fixed[a]) t.emplace_back(a, a, 1.0);
  impl_->reduced.resize(g.size(), g.size());
  impl_->reduced.setFromTriplets(t.begin(), t.end());
  impl_->reduced.makeCompressed();
  report_.assemble_seconds = seconds_since(t0);

  t0 = Clock::now();
  impl_->lu.compute(impl_->reduced);
  if (impl_->lu.info() != Eigen::Success) throw SolveError("sparse factorization failed", -1);
  report_.factor_seconds = seconds_since(t0);
  residual_tol_ = opt.residual_tol;
}

HelmholtzSolver::~HelmholtzSolver() = default;

DiscreteField HelmholtzSolver::solve(const IncidentWave& inc) {
  if (std::abs(inc.k - k_) > 1e-12 * k_) throw InvalidInput("incident wavenumber differs from the factorized one");
  const Grid& g = *grid_;
  auto t0 = Clock::now();
  Eigen::VectorXcd ui(g.size()), fixed_vals = Eigen::VectorXcd::Zero(g.size());
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i) ui(g.index(i, j)) = inc.at(vec2(g.x().center(i), g.y().center(j)));
  for (long a = 0; a < g.size(); ++a)
    if (coef_.soft[a]) fixed_vals(a) = -ui(a);

  Eigen::VectorXcd rhs = -(impl_->contrast * ui) - impl_->full * fixed_vals;
  for (long a = 0; a < g.size(); ++a) {
    if (impl_->fixed[a]) rhs(a) = fixed_vals(a);
    else rhs(a) += coef_.source[a];
  }
  DiscreteField out;
  out.grid = grid_;
  out.kind = FieldKind::Scattered;
  out.k = k_;
  const double bnorm = rhs.norm();
  if (bnorm == 0) {
    out.values = Eigen::VectorXcd::Zero(g.size());
    report_.residual = 0;
    return out;
  }
  Eigen::VectorXcd x = impl_->lu.solve(rhs);
  double res = (impl_->reduced * x - rhs).norm() / bnorm;
  for (int it = 0; it < 3 && res > 1e-13; ++it) {
    Eigen::VectorXcd r = rhs - impl_->reduced * x;
    x += impl_->lu.solve(r);
    res = (impl_->reduced * x - rhs).norm() / bnorm;
  }
  report_.residual = res;
  report_.solve_seconds += seconds_since(t0);
  if (!std::isfinite(res) || res > residual_tol_)
    throw SolveError("linear solve did not reach the requested residual", res);
  out.values = x;
  return out;
}

DiscreteField assemble_and_solve(const Scenario& s, const IncidentWave& inc, std::shared_ptr<const Grid> grid,
                                 SolveReport* report, const SolveOptions& opt) {
  HelmholtzSolver solver(s, std::move(grid), inc.k, opt);
  DiscreteField f = solver.solve(inc);
  if (report) *report = solver.report();
  return f;
}

DiscreteField to_total(const DiscreteField& scattered, const IncidentWave& inc) {
  if (scattered.kind != FieldKind::Scattered) throw InvalidInput("to_total expects a scattered field");
  DiscreteField t = scattered;
  t.kind = FieldKind::Total;
  const Grid& g = *scattered.grid;
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i) t.values(g.index(i, j)) += inc.at(vec2(g.x().center(i), g.y().center(j)));
  return t;
}

// --------------------------------------------------------------- sampling

namespace {

// Lagrange weights and derivative weights on four nodes.
void lagrange4(const double* xs, double x, double* w, double* dw) {
  for (int a = 0; a < 4; ++a) {
    double num = 1, den = 1, dnum = 0;
    for (int b = 0; b < 4; ++b) {
      if (b == a) continue;
      den *= xs[a] - xs[b];
      double prod = 1;
      for (int c = 0; c < 4; ++c)
        if (c != a && c != b) prod *= x - xs[c];
      dnum += prod;
      num *= x - xs[b];
    }
    w[a] = num / den;
    dw[a] = dnum / den;
  }
}

}  // namespace

PointSample sample_field(const DiscreteField& field, const Vec& x, Interpolation interp) {
  const Grid& g = *field.grid;
  const Axis& X = g.x();
  const Axis& Y = g.y();
  int i = X.locate_center(x(0)), j = Y.locate_center(x(1));
  if (interp == Interpolation::Cubic) {
    int i0 = std::clamp(i - 1, 0, g.nx() - 4), j0 = std::clamp(j - 1, 0, g.ny() - 4);
    double xs[4], ys[4], wx[4], dwx[4], wy[4], dwy[4];
    for (int a = 0; a < 4; ++a) {
      xs[a] = X.center(i0 + a);
      ys[a] = Y.center(j0 + a);
    }
    lagrange4(xs, x(0), wx, dwx);
    lagrange4(ys, x(1), wy, dwy);
    PointSample p{0, 0, 0};
    for (int b = 0; b < 4; ++b)
      for (int a = 0; a < 4; ++a) {
        Complex v = field.at(i0 + a, j0 + b);
        p.u += wx[a] * wy[b] * v;
        p.dx += dwx[a] * wy[b] * v;
        p.dy += wx[a] * dwy[b] * v;
      }
    return p;
  }
  // Bilinear values; centred differences interpolated bilinearly.
  i = std::clamp(i, 1, g.nx() - 3);
  j = std::clamp(j, 1, g.ny() - 3);
  double tx = (x(0) - X.center(i)) / (X.center(i + 1) - X.center(i));
  double ty = (x(1) - Y.center(j)) / (Y.center(j + 1) - Y.center(j));
  PointSample p{0, 0, 0};
  for (int b = 0; b < 2; ++b)
    for (int a = 0; a < 2; ++a) {
      double w = (a ? tx : 1 - tx) * (b ? ty : 1 - ty);
      int ii = i + a, jj = j + b;
      p.u += w * field.at(ii, jj);
      p.dx += w * (field.at(ii + 1, jj) - field.at(ii - 1, jj)) / (X.center(ii + 1) - X.center(ii - 1));
      p.dy += w * (field.at(ii, jj + 1) - field.at(ii, jj - 1)) / (Y.center(jj + 1) - Y.center(jj - 1));
    }
  return p;
}

CircleSamples extract_circle(const DiscreteField& field, double radius, int n_points,
                             const std::optional<BoundingBox>& scatterer, Interpolation interp) {
  if (!field.grid) throw InvalidInput("field without grid");
  if (n_points < 4) throw InvalidInput("need at least four circle samples");
  const Grid& g = *field.grid;
  const double h = std::max(g.x().max_interior_width(), g.y().max_interior_width());
  const double margin = 2 * h;
  if (radius + margin > std::min({-g.x().lo, g.x().hi, -g.y().lo, g.y().hi}))
    throw InvalidInput("extraction circle intersects the PML");
  if (scatterer) {
    double reach = 0;
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b)
        reach = std::max(reach, std::hypot(a ? scatterer->hi(0) : scatterer->lo(0), b ? scatterer->hi(1) : scatterer->lo(1)));
    if (reach + margin > radius) throw InvalidInput("extraction circle intersects the scatterer");
  }
  CircleSamples s;
  s.radius = radius;
  for (double th : equispaced_angles(n_points)) {
    Vec n = vec2(std::cos(th), std::sin(th));
    PointSample p = sample_field(field, radius * n, interp);
    s.u.push_back(p.u);
    s.dudn.push_back(p.dx * n(0) + p.dy * n(1));
  }
  return s;
}

double absorbed_power(const DiscreteField& total, const Coefficients& c) {
  const Grid& g = *total.grid;
  double acc = 0;
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i) {
      long a = g.index(i, j);
      if (c.q[a].imag() <= 0) continue;
      acc += c.q[a].imag() * std::norm(total.values(a)) * g.x().width(i) * g.y().width(j) * c.frac[a];
    }
  return acc;
}

}  // namespace cloak
