#pragma once

#include <cmath>
#include <numbers>
#include <random>

#include "cgpt3d/cgpt.hpp"
#include "cgpt3d/mesh.hpp"

namespace testing_support {

using namespace cgpt3d;

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline Vec3 random_vec(std::mt19937_64& rng, double half_width) {
  return {uniform(rng, -half_width, half_width), uniform(rng, -half_width, half_width),
          uniform(rng, -half_width, half_width)};
}

/// Random point in the ball of radius r.
inline Vec3 random_in_ball(std::mt19937_64& rng, double r) {
  for (;;) {
    const Vec3 v = random_vec(rng, r);
    if (v.norm() <= r) return v;
  }
}

inline EulerAngles random_angles(std::mt19937_64& rng) {
  return {uniform(rng, -std::numbers::pi, std::numbers::pi), uniform(rng, 0.0, std::numbers::pi),
          uniform(rng, -std::numbers::pi, std::numbers::pi)};
}

/// s in [0.5, 2], uniform Euler angles, |z| <= 2.
inline RigidScaleTransform random_transform(std::mt19937_64& rng) {
  RigidScaleTransform t;
  t.scale = uniform(rng, 0.5, 2.0);
  t.angles = random_angles(rng);
  t.shift = random_in_ball(rng, 2.0);
  return t;
}

inline double rel_diff(const CMatrix& a, const CMatrix& b) {
  const double scale = std::max(a.norm(), b.norm());
  return scale == 0.0 ? 0.0 : (a - b).norm() / scale;
}

/// Complex matrix with standard normal real and imaginary parts.
inline CMatrix random_cmatrix(std::mt19937_64& rng, int rows, int cols) {
  std::normal_distribution<double> g;
  CMatrix m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = Complex(g(rng), g(rng));
  return m;
}

/// Coefficients c_m of a real harmonic sum_m c_m Y_n^m: c_{-m} = (-1)^m conj(c_m).
inline CVector random_real_harmonic(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> g;
  CVector c(2 * n + 1);
  c[n] = g(rng);
  for (int m = 1; m <= n; ++m) {
    c[n + m] = Complex(g(rng), g(rng));
    c[n - m] = (m % 2 ? -1.0 : 1.0) * std::conj(c[n + m]);
  }
  return c;
}

}  // namespace testing_support
