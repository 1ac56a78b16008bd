#pragma once

// Spherical-harmonic machinery used throughout the library.
//
// Conventions
//   Y_n^m(theta, phi) = (-1)^m sqrt((2n+1)/(4pi) (n-m)!/(n+m)!) e^{i m phi}
//                       P_n^m(cos theta)
// where the Legendre function inside Y carries the Condon-Shortley phase, so
// that Y_1^1 = +sqrt(3/(8pi)) sin(theta) e^{i phi} and
// Y_n^{-m} = (-1)^m conj(Y_n^m). Inside a degree-n block the order m sits at
// position m + n.

#include <array>
#include <complex>
#include <map>

#include <Eigen/Dense>

namespace cgpt3d {

using Complex = std::complex<double>;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

/// Largest supported harmonic degree.
inline constexpr int kMaxDegree = 30;

struct SphericalPoint {
  double r = 0.0;
  double theta = 0.0;  ///< polar angle in [0, pi]
  double phi = 0.0;    ///< azimuth in [-pi, pi]

  static SphericalPoint from_cartesian(const Vec3& x);
  Vec3 to_cartesian() const;
};

/// Euler angles in radians, see euler_rotation_matrix() for the convention.
struct EulerAngles {
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
};

/// Degree/order pair with |m| <= n enforced at construction.
class HarmonicIndex {
 public:
  HarmonicIndex(int n, int m);

  int n() const { return n_; }
  int m() const { return m_; }
  /// Position of (n, m) in a stacked list of degrees 0..n.
  int flat() const { return n_ * n_ + n_ + m_; }

 private:
  int n_;
  int m_;
};

using MultiIndex = std::array<int, 3>;

/// Homogeneous polynomial sum_{|alpha|=n} a_alpha x^alpha with complex
/// coefficients.
struct MonomialExpansion {
  int degree = 0;
  std::map<MultiIndex, Complex> terms;

  Complex evaluate(const Vec3& x) const;
  std::array<Complex, 3> gradient(const Vec3& x) const;
};

/// ln(k!) for 0 <= k <= 4*kMaxDegree + 1, tabulated.
double log_factorial(int k);

/// Ferrers function P_n^m(x) without the Condon-Shortley phase. Negative
/// orders follow P_n^{-m} = (-1)^m (n-m)!/(n+m)! P_n^m.
double assoc_legendre(int n, int m, double x);

Complex sph_harm(HarmonicIndex idx, double theta, double phi);

/// Regular solid harmonic r^n Y_n^m evaluated at a Cartesian point.
Complex solid_harmonic(HarmonicIndex idx, const Vec3& x);

/// Monomial coefficients a_alpha^{mn} of r^n Y_n^m.
MonomialExpansion solid_harmonic_coeffs(HarmonicIndex idx);

/// Coefficient of the translation formula for regular solid harmonics,
///   r'^n Y_n^m(y + z) = sum C_{nu mu n m} (r_z^{n-nu} Y_{n-nu}^{m-mu}(z))
///                                          (r^nu Y_nu^mu(y)).
/// Throws ValidationError outside the summation window.
double translation_coeff(int nu, int mu, int n, int m);

/// True when (nu, mu) lies inside the summation window of (n, m).
bool translation_window(int nu, int mu, int n, int m);

/// (2l+1) x (2i+1) translation block G_li(z), l >= i >= 0.
CMatrix g_matrix(int l, int i, const Vec3& z);

/// Wigner small-d d_n^{m',m}(beta).
double wigner_d_small(int n, int mp, int m, double beta);

/// Wigner D-matrix Q_n for the rotation euler_rotation_matrix(angles):
/// entry (m+n, m'+n) is rho_n^{m',m}, so that
///   Y_n^m(R xi) = sum_{m'} rho_n^{m',m} Y_n^{m'}(xi).
CMatrix wigner_q_matrix(int n, const EulerAngles& angles);

/// Laplace fundamental solution -1/(4 pi |x - y|).
double fundamental_solution(const Vec3& x, const Vec3& y);

/// Multipole series of fundamental_solution() truncated at degree L; needs
/// |y| < |x|.
double gamma_series(const Vec3& x, const Vec3& y, int L);

}  // namespace cgpt3d
