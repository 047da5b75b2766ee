// Test-side oracles, independent of the library implementation paths they
// check. The Racah evaluation here uses exact double factorials and direct
// products (the library uses extended-precision log tables); the real-basis
// mixing is re-derived from scratch with complex arithmetic.
#pragma once

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

namespace oracles {

inline double factorial(int n) {
  static const auto table = [] {
    std::array<double, 35> t{};
    t[0] = 1.0;
    for (std::size_t i = 1; i < t.size(); ++i) t[i] = t[i - 1] * double(i);
    return t;
  }();
  return table.at(n);
}

// <j1 m1 j2 m2 | j3 m3> by Racah's formula with direct factorial products.
inline double cg_complex(int j1, int m1, int j2, int m2, int j3, int m3) {
  if (m1 + m2 != m3) return 0.0;
  if (j3 < std::abs(j1 - j2) || j3 > j1 + j2) return 0.0;
  const double pref =
      std::sqrt((2.0 * j3 + 1.0) * factorial(j3 + j1 - j2) * factorial(j3 - j1 + j2) *
                factorial(j1 + j2 - j3) / factorial(j1 + j2 + j3 + 1) * factorial(j3 + m3) *
                factorial(j3 - m3) * factorial(j1 - m1) * factorial(j1 + m1) *
                factorial(j2 - m2) * factorial(j2 + m2));
  double sum = 0.0;
  for (int k = 0;; ++k) {
    const int a = j1 + j2 - j3 - k, b = j1 - m1 - k, c = j2 + m2 - k;
    const int d = j3 - j2 + m1 + k, e = j3 - j1 - m2 + k;
    if (b < 0 || c < 0 || a < 0) break;
    if (d < 0 || e < 0) continue;
    const double term = 1.0 / (factorial(k) * factorial(a) * factorial(b) * factorial(c) *
                               factorial(d) * factorial(e));
    sum += (k % 2 == 0) ? term : -term;
  }
  return pref * sum;
}

// Complex-to-real change of basis: S_mu = sum_M U[mu, M] Y^M with
// Condon-Shortley harmonics, plus the per-path phase (-i)^((l1+l2+l3) mod 2).
inline std::complex<double> u_entry(int mu, int M) {
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  if (mu == 0) return M == 0 ? 1.0 : 0.0;
  if (mu > 0) {
    if (M == -mu) return inv_sqrt2;
    if (M == mu) return (mu % 2 == 0 ? 1.0 : -1.0) * inv_sqrt2;
    return 0.0;
  }
  const int a = -mu;
  if (M == -a) return std::complex<double>(0.0, inv_sqrt2);
  if (M == a) return std::complex<double>(0.0, (a % 2 == 0 ? -1.0 : 1.0) * inv_sqrt2);
  return 0.0;
}

inline double cg_real(int l1, int m1, int l2, int m2, int l3, int m3) {
  std::complex<double> acc(0.0, 0.0);
  for (int M1 = -l1; M1 <= l1; ++M1)
    for (int M2 = -l2; M2 <= l2; ++M2) {
      const int M3 = M1 + M2;
      if (std::abs(M3) > l3) continue;
      acc += u_entry(m1, M1) * u_entry(m2, M2) * std::conj(u_entry(m3, M3)) *
             cg_complex(l1, M1, l2, M2, l3, M3);
    }
  const std::complex<double> phase =
      ((l1 + l2 + l3) % 2 == 0) ? std::complex<double>(1, 0) : std::complex<double>(0, -1);
  acc *= phase;
  if (std::abs(acc.imag()) > 1e-12) throw std::logic_error("oracle: non-real CG block");
  return acc.real();
}

// Closed-form real Wigner matrix for a rotation by `angle` about the z-axis:
// cos(m*angle) on the diagonal, +-sin(m*angle) coupling the (-m, +m) pair.
inline Eigen::MatrixXd z_rotation_block(int l, double angle) {
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(2 * l + 1, 2 * l + 1);
  d(l, l) = 1.0;
  for (int m = 1; m <= l; ++m) {
    const double c = std::cos(m * angle), s = std::sin(m * angle);
    d(l + m, l + m) = c;
    d(l - m, l - m) = c;
    d(l - m, l + m) = s;
    d(l + m, l - m) = -s;
  }
  return d;
}

// Dense contraction z_k = sum_ij T[k,i,j] x_i y_j for a dense 3-array laid out
// as values[(k*d1 + i)*d2 + j].
inline Eigen::VectorXd dense_tp(const std::vector<double>& values, int d3, int d1, int d2,
                                const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  Eigen::VectorXd z = Eigen::VectorXd::Zero(d3);
  for (int k = 0; k < d3; ++k)
    for (int i = 0; i < d1; ++i)
      for (int j = 0; j < d2; ++j)
        z(k) += values[(std::size_t(k) * d1 + i) * d2 + j] * x(i) * y(j);
  return z;
}

struct CgCase {
  int l1, m1, l2, m2, l3, m3;
  double value;
};

// Complex-basis values cross-checked against published <j1 m1 j2 m2 | j3 m3>
// tables (l <= 2).
inline const std::vector<CgCase>& complex_cg_table() {
  static const std::vector<CgCase> table = {
      {0, 0, 1, -1, 1, -1, 1.0},
      {0, 0, 2, 2, 2, 2, 1.0},
      {1, -1, 1, 1, 1, 0, -0.70710678118654757},
      {1, -1, 2, 0, 1, -1, 0.31622776601683794},
      {1, 0, 1, -1, 2, -1, 0.70710678118654757},
      {1, 0, 1, 0, 0, 0, -0.57735026918962573},
      {1, 0, 1, 0, 2, 0, 0.81649658092772603},
      {1, 0, 2, -1, 1, -1, -0.54772255750516607},
      {1, 1, 1, -1, 0, 0, 0.57735026918962573},
      {1, 1, 1, 0, 1, 1, 0.70710678118654757},
      {1, 1, 1, 0, 2, 1, 0.70710678118654757},
      {1, 1, 1, 1, 2, 2, 1.0},
      {1, 1, 2, -2, 2, -1, 0.57735026918962573},
      {1, 1, 2, 1, 2, 2, 0.57735026918962573},
      {2, -2, 2, 0, 2, -2, 0.53452248382484879},
      {2, -2, 2, 2, 0, 0, 0.44721359549995793},
      {2, -1, 1, 1, 2, 0, -0.70710678118654757},
      {2, -1, 2, 0, 2, -1, -0.2672612419124244},
      {2, -1, 2, 2, 2, 1, 0.65465367070797709},
      {2, 0, 1, -1, 2, -1, 0.70710678118654757},
      {2, 0, 1, 0, 1, 0, -0.63245553203367588},
      {2, 1, 1, 1, 2, 2, -0.57735026918962573},
      {2, 1, 2, -2, 2, -1, 0.65465367070797709},
      {2, 1, 2, -1, 0, 0, -0.44721359549995793},
      {2, 1, 2, -1, 2, 0, 0.2672612419124244},
      {2, 1, 2, 0, 1, 1, -0.54772255750516607},
      {2, 2, 1, -1, 2, 1, 0.57735026918962573},
      {2, 2, 2, -2, 0, 0, 0.44721359549995793},
      {2, 2, 2, -2, 2, 0, 0.53452248382484879},
  };
  return table;
}

// Frozen real-basis (1, 1, 2) block under this repo's convention.
inline const std::vector<CgCase>& real_112_table() {
  static const std::vector<CgCase> table = {
      {1, -1, 1, 1, 2, -2, 0.70710678118654735},
      {1, 1, 1, -1, 2, -2, 0.70710678118654735},
      {1, -1, 1, 0, 2, -1, 0.70710678118654746},
      {1, 0, 1, -1, 2, -1, 0.70710678118654746},
      {1, -1, 1, -1, 2, 0, -0.40824829046386291},
      {1, 0, 1, 0, 2, 0, 0.81649658092772603},
      {1, 1, 1, 1, 2, 0, -0.40824829046386291},
      {1, 0, 1, 1, 2, 1, 0.70710678118654746},
      {1, 1, 1, 0, 2, 1, 0.70710678118654746},
      {1, -1, 1, -1, 2, 2, -0.70710678118654735},
      {1, 1, 1, 1, 2, 2, 0.70710678118654735},
  };
  return table;
}

}  // namespace oracles
