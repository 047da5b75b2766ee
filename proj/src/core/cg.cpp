#include "core/cg.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>

#include "core/common.hpp"

namespace cgcp::so3 {

namespace {

// Factorials enter the Racah formula up to (l1+l2+l3+1)!; with the library cap
// l <= 8 that is 25!, kept as log-factorials in extended precision so the
// alternating sum stays accurate through L = 8 (table covers 4L+1 and beyond).
constexpr int kMaxFact = 64;

const long double* log_fact_table() {
  static const auto table = [] {
    std::array<long double, kMaxFact + 1> t{};
    t[0] = 0.0L;
    for (int n = 1; n <= kMaxFact; ++n) t[n] = t[n - 1] + std::log(static_cast<long double>(n));
    return t;
  }();
  return table.data();
}

inline long double lfact(int n) { return log_fact_table()[n]; }

}  // namespace

double cg_coefficient_complex(int l1, int m1, int l2, int m2, int l3, int m3) {
  if (std::abs(m1) > l1 || std::abs(m2) > l2 || std::abs(m3) > l3)
    throw ArgumentError("cg: |m| exceeds l");
  if (l1 + l2 + l3 + 1 > kMaxFact) throw ArgumentError("cg: degree out of supported range");
  if (!selection_rule(l1, l2, l3) || m1 + m2 != m3) return 0.0;

  const long double log_prefactor =
      0.5L * (std::log(static_cast<long double>(2 * l3 + 1)) + lfact(l3 + l1 - l2) +
              lfact(l3 - l1 + l2) + lfact(l1 + l2 - l3) - lfact(l1 + l2 + l3 + 1) +
              lfact(l3 + m3) + lfact(l3 - m3) + lfact(l1 - m1) + lfact(l1 + m1) +
              lfact(l2 - m2) + lfact(l2 + m2));

  const int k_min = std::max({0, l2 - l3 - m1, l1 - l3 + m2});
  const int k_max = std::min({l1 + l2 - l3, l1 - m1, l2 + m2});
  long double sum = 0.0L;
  for (int k = k_min; k <= k_max; ++k) {
    long double log_term = log_prefactor - lfact(k) - lfact(l1 + l2 - l3 - k) -
                           lfact(l1 - m1 - k) - lfact(l2 + m2 - k) - lfact(l3 - l2 + m1 + k) -
                           lfact(l3 - l1 - m2 + k);
    long double term = std::exp(log_term);
    sum += (k % 2 == 0) ? term : -term;
  }
  return static_cast<double>(sum);
}

namespace {

// Row mu of the per-degree unitary U mapping complex harmonics to real ones:
// S_mu = sum_M U[mu, M] Y^M. Rows have at most two non-zeros, at M = +-mu.
struct URow {
  int m_a, m_b;                  // complex column indices (m_b unused when mu == 0)
  std::complex<double> u_a, u_b;
  int count;
};

URow u_row(int mu) {
  constexpr double inv_sqrt2 = 0.70710678118654752440;
  if (mu == 0) return {0, 0, {1.0, 0.0}, {0.0, 0.0}, 1};
  if (mu > 0) {
    double sign = (mu % 2 == 0) ? 1.0 : -1.0;
    return {-mu, mu, {inv_sqrt2, 0.0}, {sign * inv_sqrt2, 0.0}, 2};
  }
  int a = -mu;  // |mu|
  double sign = (a % 2 == 0) ? 1.0 : -1.0;
  return {mu, a, {0.0, inv_sqrt2}, {0.0, -sign * inv_sqrt2}, 2};
}

}  // namespace

double cg_coefficient(int l1, int m1, int l2, int m2, int l3, int m3) {
  if (std::abs(m1) > l1 || std::abs(m2) > l2 || std::abs(m3) > l3)
    throw ArgumentError("cg: |m| exceeds l");
  if (!selection_rule(l1, l2, l3)) return 0.0;

  const URow r1 = u_row(m1), r2 = u_row(m2), r3 = u_row(m3);
  std::complex<double> acc(0.0, 0.0);
  for (int a = 0; a < r1.count; ++a) {
    const int M1 = (a == 0) ? r1.m_a : r1.m_b;
    const std::complex<double> u1 = (a == 0) ? r1.u_a : r1.u_b;
    for (int b = 0; b < r2.count; ++b) {
      const int M2 = (b == 0) ? r2.m_a : r2.m_b;
      const std::complex<double> u2 = (b == 0) ? r2.u_a : r2.u_b;
      const int M3 = M1 + M2;
      for (int c = 0; c < r3.count; ++c) {
        if (((c == 0) ? r3.m_a : r3.m_b) != M3) continue;
        const std::complex<double> u3 = (c == 0) ? r3.u_a : r3.u_b;
        acc += u1 * u2 * std::conj(u3) * cg_coefficient_complex(l1, M1, l2, M2, l3, M3);
      }
    }
  }
  // Blocks with odd l1+l2+l3 come out purely imaginary; the fixed phase
  // (-i)^((l1+l2+l3) mod 2) makes every block real.
  const double value = ((l1 + l2 + l3) % 2 == 0) ? acc.real() : acc.imag();
  // Structural zeros cancel only to ~1e-19 in floating point; the smallest
  // genuine coefficient magnitude for l <= 8 is ~1e-2, so snap the residue.
  return std::abs(value) < 1e-13 ? 0.0 : value;
}

std::vector<CgEntry> cg_path_entries(int l1, int l2, int l3) {
  std::vector<CgEntry> entries;
  if (!selection_rule(l1, l2, l3)) return entries;
  for (int m3 = -l3; m3 <= l3; ++m3)
    for (int m1 = -l1; m1 <= l1; ++m1)
      for (int m2 = -l2; m2 <= l2; ++m2) {
        double v = cg_coefficient(l1, m1, l2, m2, l3, m3);
        if (v != 0.0) entries.push_back({m3, m1, m2, v});
      }
  return entries;
}

}  // namespace cgcp::so3
