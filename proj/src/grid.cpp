#include "cloak/grid.hpp"

#include <algorithm>
#include <cmath>

#include "cloak/errors.hpp"

namespace cloak {

int Axis::locate_center(double x) const {
  int lo_i = 0, hi_i = cells() - 1;
  if (x < center(0)) return 0;
  while (hi_i - lo_i > 1) {
    int mid = (lo_i + hi_i) / 2;
    if (center(mid) <= x) lo_i = mid;
    else hi_i = mid;
  }
  return center(hi_i) <= x ? hi_i : lo_i;
}

double Axis::max_interior_width() const {
  double m = 0;
  for (int i = pml_lo; i < cells() - pml_hi; ++i) m = std::max(m, width(i));
  return m;
}

double Axis::min_width() const {
  double m = width(0);
  for (int i = 1; i < cells(); ++i) m = std::min(m, width(i));
  return m;
}

Axis build_axis(double lo, double hi, double h, const std::vector<AxisZone>& zones, int axis,
                std::vector<double> breaks, int pml_cells, double growth) {
  if (!(hi > lo) || !(h > 0)) throw InvalidInput("grid axis: bad extent or spacing");
  std::vector<AxisZone> mine;
  double hmin = h;
  for (const auto& z : zones) {
    if (z.axis != axis) continue;
    if (!(z.h > 0) || !(z.hi >= z.lo)) throw InvalidInput("grid zone: bad parameters");
    mine.push_back(z);
    hmin = std::min(hmin, z.h);
    breaks.push_back(z.lo);
    breaks.push_back(z.hi);
  }
  auto size_at = [&](double t) {
    double s = h;
    for (const auto& z : mine) {
      double dist = std::max({z.lo - t, t - z.hi, 0.0});
      s = std::min(s, z.h + (growth - 1) * dist);
    }
    return s;
  };
  breaks.push_back(lo);
  breaks.push_back(hi);
  std::vector<double> b;
  for (double t : breaks)
    if (t >= lo && t <= hi) b.push_back(t);
  std::sort(b.begin(), b.end());
  std::vector<double> uniq;
  for (double t : b)
    if (uniq.empty() || t - uniq.back() > 1e-9 * h) uniq.push_back(t);
  uniq.back() = hi;

  Axis ax;
  ax.lo = lo;
  ax.hi = hi;
  for (int i = pml_cells; i >= 1; --i) ax.faces.push_back(lo - i * h);
  ax.faces.push_back(lo);
  for (size_t s = 0; s + 1 < uniq.size(); ++s) {
    const double p = uniq[s], q = uniq[s + 1];
    // Equidistribute cells against the sizing function.
    const long m = std::clamp<long>(static_cast<long>(std::ceil(4 * (q - p) / hmin)), 64, 2000000);
    std::vector<double> cum(m + 1, 0.0);
    double prev = 1 / size_at(p);
    for (long i = 1; i <= m; ++i) {
      double cur = 1 / size_at(p + (q - p) * i / m);
      cum[i] = cum[i - 1] + 0.5 * (prev + cur) * (q - p) / m;
      prev = cur;
    }
    const double total = cum[m];
    const long n = std::max<long>(1, static_cast<long>(std::ceil(total - 1e-9)));
    long k = 0;
    for (long c = 1; c < n; ++c) {
      const double target = total * c / n;
      while (cum[k + 1] < target) ++k;
      double f = (target - cum[k]) / (cum[k + 1] - cum[k]);
      ax.faces.push_back(p + (q - p) * (k + f) / m);
    }
    ax.faces.push_back(q);
  }
  for (int i = 1; i <= pml_cells; ++i) ax.faces.push_back(hi + i * h);
  ax.pml_lo = ax.pml_hi = pml_cells;
  return ax;
}

Grid::Grid(const GridSpec& spec) : spec_(spec) {
  if (spec.lo.size() != 2 || spec.hi.size() != 2) throw InvalidInput("grids are two-dimensional");
  if (spec.pml.cells < 1) throw InvalidInput("grid needs at least one PML cell");
  x_ = build_axis(spec.lo(0), spec.hi(0), spec.h, spec.zones, 0, spec.x_breaks, spec.pml.cells, spec.growth);
  y_ = build_axis(spec.lo(1), spec.hi(1), spec.h, spec.zones, 1, spec.y_breaks, spec.pml.cells, spec.growth);
}

Grid Grid::uniform(const Vec& lo, const Vec& hi, double h, int pml_cells) {
  GridSpec s;
  s.lo = lo;
  s.hi = hi;
  s.h = h;
  s.pml.cells = pml_cells;
  return Grid(s);
}

Complex Grid::stretch(int axis, double t, double k) const {
  const Axis& a = axis == 0 ? x_ : y_;
  const double depth = std::max({a.lo - t, t - a.hi, 0.0});
  if (depth == 0) return 1.0;
  const double T = spec_.pml.cells * spec_.h;
  const int m = spec_.pml.order;
  const double sigma_max = -(m + 1) * std::log(spec_.pml.r0) / (2 * T);
  return Complex(1.0, sigma_max * std::pow(depth / T, m) / k);
}

std::vector<std::string> Grid::check(double k) const {
  std::vector<std::string> w;
  const double lambda = 2 * kPi / k;
  const double widest = std::max(x_.max_interior_width(), y_.max_interior_width());
  if (widest > lambda / 15 * (1 + 1e-9))
    w.push_back("under-resolved grid: cell size " + std::to_string(widest) + " exceeds wavelength/15");
  if (spec_.pml.cells * spec_.h < lambda * (1 - 1e-9))
    w.push_back("PML thinner than one wavelength");
  return w;
}

}  // namespace cloak
