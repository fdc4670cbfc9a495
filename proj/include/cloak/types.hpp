#pragma once

#include <complex>
#include <initializer_list>

#include <Eigen/Dense>

namespace cloak {

using Complex = std::complex<double>;

// Points and tensors live in 2 or 3 dimensions; the fixed upper bound keeps
// them off the heap.
using Vec = Eigen::Matrix<double, Eigen::Dynamic, 1, Eigen::ColMajor, 3, 1>;
using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor, 3, 3>;
using CVec = Eigen::Matrix<Complex, Eigen::Dynamic, 1, Eigen::ColMajor, 3, 1>;

inline Vec vec(std::initializer_list<double> xs) {
  Vec v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

inline Vec vec2(double x, double y) { return vec({x, y}); }
inline Vec vec3(double x, double y, double z) { return vec({x, y, z}); }

inline Mat identity(int dim) { return Mat::Identity(dim, dim); }

constexpr double kPi = 3.14159265358979323846;

}  // namespace cloak
