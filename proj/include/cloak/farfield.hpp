#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "cloak/types.hpp"

namespace cloak {

// u_inf sampled at equispaced directions theta_j = 2 pi j / n, normalized so
// that u^s(x) = e^{ik|x|} / |x|^{1/2} u_inf(x/|x|) + O(|x|^{-3/2}).
struct FarFieldPattern {
  double k = 0;
  Vec d;  // incident direction
  std::vector<double> angles;
  std::vector<Complex> values;
};

std::vector<double> equispaced_angles(int n);

// Scattered field and its outward normal derivative on a circle centred at
// the origin, at the angles equispaced_angles(u.size()).
struct CircleSamples {
  double radius = 0;
  std::vector<Complex> u, dudn;
};

// Complex prefactor of the 2D radiating Green's function far field.
Complex farfield_constant(double k);

FarFieldPattern kirchhoff_farfield(const CircleSamples& s, double k, const Vec& d, int n_dirs = 100);

enum class DiskBoundary { Hard, Soft };

struct MieResult {
  FarFieldPattern pattern;
  int modes = 0;          // highest order used
  double tail_bound = 0;  // size of the next ten omitted terms
};

// Separation-of-variables series for a disk of radius R at the origin;
// orders up to ceil(kR) + extra_modes.
MieResult mie_farfield(DiskBoundary kind, double R, double k, const Vec& d, int n_dirs = 100, int extra_modes = 20);

struct MieNearSample {
  Complex u;
  Complex dx, dy;  // gradient
};

std::vector<MieNearSample> mie_scattered_field(DiskBoundary kind, double R, double k, const Vec& d,
                                               const std::vector<Vec>& points, int extra_modes = 20);

struct SupNorm {
  double max_abs;
  double db;
};

SupNorm sup_norm_db(const FarFieldPattern& p);
double to_db(double amplitude);

// max_j |a_j - b_j| / max_j |b_j|.
double relative_linf(const FarFieldPattern& a, const FarFieldPattern& ref);

// Columns angle_rad,re,im,abs,db with one header line.
void write_farfield_csv(std::ostream& os, const FarFieldPattern& p);
void write_farfield_csv(const std::string& path, const FarFieldPattern& p);
FarFieldPattern read_farfield_csv(const std::string& path, double k, const Vec& d);

}  // namespace cloak
