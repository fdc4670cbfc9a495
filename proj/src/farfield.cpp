#include "cloak/farfield.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

#include "cloak/errors.hpp"
#include "cloak/special_functions.hpp"

namespace cloak {

std::vector<double> equispaced_angles(int n) {
  std::vector<double> a(n);
  for (int j = 0; j < n; ++j) a[j] = 2 * kPi * j / n;
  return a;
}

Complex farfield_constant(double k) { return std::polar(1.0 / std::sqrt(8 * kPi * k), kPi / 4); }

FarFieldPattern kirchhoff_farfield(const CircleSamples& s, double k, const Vec& d, int n_dirs) {
  const size_t m = s.u.size();
  if (m == 0 || s.dudn.size() != m) throw InvalidInput("kirchhoff: sample counts differ or are zero");
  if (!(k > 0) || !(s.radius > 0) || n_dirs < 1) throw InvalidInput("kirchhoff: bad parameters");
  const double ds = s.radius * 2 * kPi / m;
  const Complex gamma = farfield_constant(k);
  const Complex I(0, 1);
  FarFieldPattern p;
  p.k = k;
  p.d = d;
  p.angles = equispaced_angles(n_dirs);
  p.values.resize(n_dirs);
  auto ts = equispaced_angles(static_cast<int>(m));
  for (int i = 0; i < n_dirs; ++i) {
    const double cx = std::cos(p.angles[i]), cy = std::sin(p.angles[i]);
    Complex acc = 0;
    for (size_t j = 0; j < m; ++j) {
      const double nx = std::cos(ts[j]), ny = std::sin(ts[j]);
      const double xn = cx * nx + cy * ny;  // xhat . nu
      Complex e = std::exp(-I * (k * s.radius * xn));
      acc += (s.u[j] * (-I * k * xn) - s.dudn[j]) * e;
    }
    p.values[i] = gamma * acc * ds;
  }
  return p;
}

namespace {

std::vector<Complex> mie_coefficients(DiskBoundary kind, double R, double k, int m) {
  if (!(R > 0 && k > 0)) throw InvalidInput("mie: radius and wavenumber must be positive");
  auto t = bessel_table(m, k * R);
  std::vector<Complex> a(m + 1);
  for (int n = 0; n <= m; ++n) {
    if (kind == DiskBoundary::Hard) a[n] = -t.dJ[n] / Complex(t.dJ[n], t.dY[n]);
    else a[n] = -t.J[n] / Complex(t.J[n], t.Y[n]);
  }
  return a;
}

int mode_count(double R, double k, int extra) { return static_cast<int>(std::ceil(k * R)) + extra; }

}  // namespace

MieResult mie_farfield(DiskBoundary kind, double R, double k, const Vec& d, int n_dirs, int extra_modes) {
  if (k * R > 100) throw InvalidInput("mie: kR above 100 is outside the supported range");
  const int m = mode_count(R, k, extra_modes);
  auto a = mie_coefficients(kind, R, k, m + 10);
  const double td = std::atan2(d(1), d(0));
  const Complex pre = std::sqrt(2 / (kPi * k)) * std::polar(1.0, -kPi / 4);
  MieResult res;
  res.modes = m;
  res.pattern.k = k;
  res.pattern.d = d;
  res.pattern.angles = equispaced_angles(n_dirs);
  for (double th : res.pattern.angles) {
    Complex s = a[0];
    for (int n = 1; n <= m; ++n) s += 2.0 * a[n] * std::cos(n * (th - td));
    res.pattern.values.push_back(pre * s);
  }
  for (int n = m + 1; n <= m + 10; ++n) res.tail_bound += 2 * std::abs(a[n]) * std::abs(pre);
  return res;
}

std::vector<MieNearSample> mie_scattered_field(DiskBoundary kind, double R, double k, const Vec& d,
                                               const std::vector<Vec>& points, int extra_modes) {
  const int m = mode_count(R, k, extra_modes);
  auto a = mie_coefficients(kind, R, k, m);
  const double td = std::atan2(d(1), d(0));
  const Complex I(0, 1);
  std::vector<Complex> ipow(m + 1);
  ipow[0] = 1;
  for (int n = 1; n <= m; ++n) ipow[n] = ipow[n - 1] * I;
  std::vector<MieNearSample> out;
  for (const Vec& x : points) {
    const double r = x.norm(), th = std::atan2(x(1), x(0));
    if (r < R) throw InvalidInput("mie: point inside the disk");
    auto t = bessel_table(m, k * r);
    Complex u = 0, ur = 0, ut = 0;
    for (int n = 0; n <= m; ++n) {
      const double w = n == 0 ? 1.0 : 2.0;
      Complex h(t.J[n], t.Y[n]), dh(t.dJ[n], t.dY[n]);
      Complex c = w * a[n] * ipow[n];
      u += c * h * std::cos(n * (th - td));
      ur += c * k * dh * std::cos(n * (th - td));
      ut -= c * h * (n * std::sin(n * (th - td)));
    }
    const double ct = std::cos(th), st = std::sin(th);
    out.push_back({u, ur * ct - ut * st / r, ur * st + ut * ct / r});
  }
  return out;
}

double to_db(double amplitude) {
  if (amplitude <= 0) return -std::numeric_limits<double>::infinity();
  return 20 * std::log10(amplitude);
}

SupNorm sup_norm_db(const FarFieldPattern& p) {
  if (p.values.empty()) throw InvalidInput("sup norm of an empty pattern");
  double m = 0;
  for (auto v : p.values) m = std::max(m, std::abs(v));
  return {m, to_db(m)};
}

double relative_linf(const FarFieldPattern& a, const FarFieldPattern& ref) {
  if (a.values.size() != ref.values.size()) throw InvalidInput("patterns sampled differently");
  double num = 0, den = 0;
  for (size_t i = 0; i < a.values.size(); ++i) {
    num = std::max(num, std::abs(a.values[i] - ref.values[i]));
    den = std::max(den, std::abs(ref.values[i]));
  }
  return num / den;
}

void write_farfield_csv(std::ostream& os, const FarFieldPattern& p) {
  os << "angle_rad,re,im,abs,db\n";
  os << std::setprecision(17);
  for (size_t i = 0; i < p.values.size(); ++i) {
    const Complex v = p.values[i];
    os << p.angles[i] << ',' << v.real() << ',' << v.imag() << ',' << std::abs(v) << ',' << to_db(std::abs(v))
       << '\n';
  }
}

void write_farfield_csv(const std::string& path, const FarFieldPattern& p) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InvalidInput("cannot write " + path);
  write_farfield_csv(f, p);
}

FarFieldPattern read_farfield_csv(const std::string& path, double k, const Vec& d) {
  std::ifstream f(path);
  if (!f) throw InvalidInput("cannot read " + path);
  std::string line;
  std::getline(f, line);
  if (line != "angle_rad,re,im,abs,db") throw InvalidInput("unexpected far-field header in " + path);
  FarFieldPattern p;
  p.k = k;
  p.d = d;
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    std::istringstream is(line);
    std::string cell;
    double vals[3];
    for (double& v : vals) {
      std::getline(is, cell, ',');
      v = std::stod(cell);
    }
    p.angles.push_back(vals[0]);
    p.values.emplace_back(vals[1], vals[2]);
  }
  return p;
}

}  // namespace cloak
