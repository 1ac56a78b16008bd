#include "cgpt3d/harmonics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "cgpt3d/errors.hpp"

namespace cgpt3d {

namespace {

constexpr double kPi = std::numbers::pi;

const std::vector<double>& log_factorial_table() {
  static const std::vector<double> table = [] {
    std::vector<double> t(4 * kMaxDegree + 2);
    for (std::size_t k = 0; k < t.size(); ++k) t[k] = std::lgamma(static_cast<double>(k) + 1.0);
    return t;
  }();
  return table;
}

void check_index(int n, int m) {
  if (n < 0 || n > kMaxDegree || m < -n || m > n)
    throw ValidationError("harmonic index out of range: n=" + std::to_string(n) +
                          ", m=" + std::to_string(m));
}

// Ferrers function for m >= 0, no Condon-Shortley phase.
double legendre_nonneg(int n, int m, double x) {
  const double somx2 = std::sqrt(std::max(0.0, (1.0 - x) * (1.0 + x)));
  double pmm = 1.0;
  double fact = 1.0;
  for (int i = 1; i <= m; ++i) {
    pmm *= fact * somx2;
    fact += 2.0;
  }
  if (n == m) return pmm;
  double pmmp1 = x * (2.0 * m + 1.0) * pmm;
  if (n == m + 1) return pmmp1;
  double pnm = 0.0;
  for (int l = m + 2; l <= n; ++l) {
    pnm = (x * (2.0 * l - 1.0) * pmmp1 - (l + m - 1.0) * pmm) / (l - m);
    pmm = pmmp1;
    pmmp1 = pnm;
  }
  return pnm;
}

long double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0L;
  long double r = 1.0L;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

long double factorial_ratio(int hi, int lo) {  // hi! / lo!, hi >= lo
  long double r = 1.0L;
  for (int i = lo + 1; i <= hi; ++i) r *= i;
  return r;
}

}  // namespace

SphericalPoint SphericalPoint::from_cartesian(const Vec3& x) {
  SphericalPoint p;
  p.r = x.norm();
  if (p.r == 0.0) return p;
  p.theta = std::acos(std::clamp(x.z() / p.r, -1.0, 1.0));
  p.phi = std::atan2(x.y(), x.x());
  return p;
}

Vec3 SphericalPoint::to_cartesian() const {
  const double st = std::sin(theta);
  return {r * std::cos(phi) * st, r * std::sin(phi) * st, r * std::cos(theta)};
}

HarmonicIndex::HarmonicIndex(int n, int m) : n_(n), m_(m) { check_index(n, m); }

double log_factorial(int k) {
  const auto& t = log_factorial_table();
  if (k < 0 || static_cast<std::size_t>(k) >= t.size())
    throw ValidationError("log_factorial argument out of range: " + std::to_string(k));
  return t[static_cast<std::size_t>(k)];
}

double assoc_legendre(int n, int m, double x) {
  check_index(n, m);
  if (!(std::abs(x) <= 1.0)) throw ValidationError("assoc_legendre: |x| > 1");
  if (m >= 0) return legendre_nonneg(n, m, x);
  const int am = -m;
  const double ratio = std::exp(log_factorial(n - am) - log_factorial(n + am));
  return ((am % 2) ? -1.0 : 1.0) * ratio * legendre_nonneg(n, am, x);
}

Complex sph_harm(HarmonicIndex idx, double theta, double phi) {
  const int n = idx.n();
  const int am = std::abs(idx.m());
  // (-1)^m from the prefactor cancels the Condon-Shortley phase of P_n^m.
  const double norm = std::sqrt((2.0 * n + 1.0) / (4.0 * kPi) *
                                std::exp(log_factorial(n - am) - log_factorial(n + am)));
  const double p = legendre_nonneg(n, am, std::cos(theta));
  const Complex y = norm * p * std::polar(1.0, am * phi);
  if (idx.m() >= 0) return y;
  return ((am % 2) ? -1.0 : 1.0) * std::conj(y);
}

Complex solid_harmonic(HarmonicIndex idx, const Vec3& x) {
  const auto sp = SphericalPoint::from_cartesian(x);
  if (sp.r == 0.0) return idx.n() == 0 ? Complex(0.5 / std::sqrt(kPi), 0.0) : Complex(0.0, 0.0);
  return std::pow(sp.r, idx.n()) * sph_harm(idx, sp.theta, sp.phi);
}

Complex MonomialExpansion::evaluate(const Vec3& x) const {
  std::array<std::array<double, kMaxDegree + 1>, 3> pw{};
  for (int d = 0; d < 3; ++d) {
    pw[d][0] = 1.0;
    for (int k = 1; k <= degree; ++k) pw[d][k] = pw[d][k - 1] * x[d];
  }
  Complex sum = 0.0;
  for (const auto& [a, c] : terms) sum += c * (pw[0][a[0]] * pw[1][a[1]] * pw[2][a[2]]);
  return sum;
}

std::array<Complex, 3> MonomialExpansion::gradient(const Vec3& x) const {
  std::array<std::array<double, kMaxDegree + 1>, 3> pw{};
  for (int d = 0; d < 3; ++d) {
    pw[d][0] = 1.0;
    for (int k = 1; k <= degree; ++k) pw[d][k] = pw[d][k - 1] * x[d];
  }
  std::array<Complex, 3> g{};
  for (const auto& [a, c] : terms) {
    for (int d = 0; d < 3; ++d) {
      if (a[d] == 0) continue;
      double mono = a[d];
      for (int e = 0; e < 3; ++e) mono *= pw[e][e == d ? a[e] - 1 : a[e]];
      g[d] += c * mono;
    }
  }
  return g;
}

MonomialExpansion solid_harmonic_coeffs(HarmonicIndex idx) {
  const int n = idx.n();
  const int m = std::abs(idx.m());
  using LComplex = std::complex<long double>;

  // r^n Y_n^m = N (x + iy)^m sum_k c_k z^{n-m-2k} (x^2+y^2+z^2)^k, m >= 0,
  // with c_k the coefficients of d^m/dt^m P_n(t).
  const long double norm = std::sqrt(static_cast<long double>(2 * n + 1) / (4.0L * std::numbers::pi_v<long double>) /
                                     factorial_ratio(n + m, n - m));
  std::map<MultiIndex, LComplex> acc;
  for (int k = 0; 2 * k <= n - m; ++k) {
    const long double ck = ((k % 2) ? -1.0L : 1.0L) * binomial(n, k) * binomial(2 * n - 2 * k, n) *
                           factorial_ratio(n - 2 * k, n - 2 * k - m) / std::pow(2.0L, n);
    const int zpow = n - m - 2 * k;
    for (int j = 0; j <= m; ++j) {  // (x+iy)^m term x^{m-j} (iy)^j
      static const LComplex ipow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
      const LComplex cj = binomial(m, j) * ipow[j % 4];
      for (int a = 0; a <= k; ++a) {
        for (int b = 0; a + b <= k; ++b) {
          const int c = k - a - b;
          const long double multi = factorial_ratio(k, a) / factorial_ratio(b, 0) / factorial_ratio(c, 0);
          const MultiIndex alpha{m - j + 2 * a, j + 2 * b, zpow + 2 * c};
          acc[alpha] += norm * ck * multi * cj;
        }
      }
    }
  }

  MonomialExpansion out;
  out.degree = n;
  const bool negative = idx.m() < 0;
  const double sign = (negative && (m % 2)) ? -1.0 : 1.0;
  for (const auto& [alpha, c] : acc) {
    if (c == LComplex(0, 0)) continue;
    Complex v(static_cast<double>(c.real()), static_cast<double>(c.imag()));
    out.terms[alpha] = negative ? sign * std::conj(v) : v;
  }
  return out;
}

bool translation_window(int nu, int mu, int n, int m) {
  if (n < 0 || std::abs(m) > n || nu < 0 || nu > n) return false;
  return std::max(-nu, nu - n + m) <= mu && mu <= std::min(nu, -nu + n + m);
}

double translation_coeff(int nu, int mu, int n, int m) {
  check_index(n, m);
  if (!translation_window(nu, mu, n, m))
    throw ValidationError("translation_coeff: (nu, mu) = (" + std::to_string(nu) + ", " +
                          std::to_string(mu) + ") outside the window of (n, m) = (" +
                          std::to_string(n) + ", " + std::to_string(m) + ")");
  const double log_num = std::log(4.0 * kPi * (2.0 * n + 1.0)) + log_factorial(n - m) + log_factorial(n + m);
  const double log_den = std::log((2.0 * n - 2.0 * nu + 1.0) * (2.0 * nu + 1.0)) +
                         log_factorial(n - nu - m + mu) + log_factorial(n - nu + m - mu) +
                         log_factorial(nu - mu) + log_factorial(nu + mu);
  return std::exp(0.5 * (log_num - log_den));
}

CMatrix g_matrix(int l, int i, const Vec3& z) {
  if (i < 0 || l < i || l > kMaxDegree)
    throw ValidationError("g_matrix: need 0 <= i <= l <= " + std::to_string(kMaxDegree));
  CMatrix g = CMatrix::Zero(2 * l + 1, 2 * i + 1);
  for (int k = -l; k <= l; ++k) {
    for (int j = -i; j <= i; ++j) {
      if (!translation_window(i, j, l, k)) continue;
      g(k + l, j + i) = translation_coeff(i, j, l, k) * solid_harmonic(HarmonicIndex(l - i, k - j), z);
    }
  }
  return g;
}

double wigner_d_small(int n, int mp, int m, double beta) {
  check_index(n, m);
  check_index(n, mp);
  const double c = std::cos(0.5 * beta);
  const double s = std::sin(0.5 * beta);
  const double log_pref =
      0.5 * (log_factorial(n + mp) + log_factorial(n - mp) + log_factorial(n + m) + log_factorial(n - m));
  double sum = 0.0;
  for (int k = std::max(0, m - mp); k <= std::min(n - mp, n + m); ++k) {
    const double log_term = log_pref - log_factorial(n + m - k) - log_factorial(k) -
                            log_factorial(mp - m + k) - log_factorial(n - mp - k);
    const double sign = ((mp + m + k) % 2 == 0) ? 1.0 : -1.0;
    sum += sign * std::exp(log_term) * std::pow(c, 2 * (n - k) + m - mp) * std::pow(s, 2 * k - m + mp);
  }
  return sum;
}

CMatrix wigner_q_matrix(int n, const EulerAngles& a) {
  check_index(n, 0);
  // With R the printed z-y-z product, the representation carries beta with
  // the opposite sign and alpha/gamma exchanged relative to the textbook form.
  CMatrix q(2 * n + 1, 2 * n + 1);
  for (int m = -n; m <= n; ++m)
    for (int mp = -n; mp <= n; ++mp)
      q(m + n, mp + n) = std::polar(1.0, mp * a.alpha) * wigner_d_small(n, mp, m, -a.beta) *
                         std::polar(1.0, m * a.gamma);
  return q;
}

double fundamental_solution(const Vec3& x, const Vec3& y) {
  const double d = (x - y).norm();
  if (d == 0.0) throw ValidationError("fundamental_solution: coincident points");
  return -1.0 / (4.0 * kPi * d);
}

double gamma_series(const Vec3& x, const Vec3& y, int L) {
  const double rx = x.norm();
  const double ry = y.norm();
  if ((x - y).norm() == 0.0) throw ValidationError("gamma_series: coincident points");
  if (!(ry < rx)) throw ValidationError("gamma_series: requires |y| < |x|");
  if (L < 0 || L > kMaxDegree) throw ValidationError("gamma_series: truncation out of range");
  Complex sum = 0.0;
  for (int l = 0; l <= L; ++l) {
    const double scale = 1.0 / ((2.0 * l + 1.0) * std::pow(rx, 2 * l + 1));
    for (int k = -l; k <= l; ++k) {
      const HarmonicIndex idx(l, k);
      sum += scale * solid_harmonic(idx, x) * std::conj(solid_harmonic(idx, y));
    }
  }
  return -sum.real();
}

}  // namespace cgpt3d
