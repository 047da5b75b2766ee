#pragma once

#include <vector>

namespace cgcp::so3 {

// Selection rule |l1 - l2| <= l3 <= l1 + l2.
constexpr bool selection_rule(int l1, int l2, int l3) {
  return l3 >= (l1 > l2 ? l1 - l2 : l2 - l1) && l3 <= l1 + l2;
}

// Complex-basis coefficient <l1 m1 l2 m2 | l3 m3> (Condon-Shortley phase,
// Racah's closed form). Zero outside the selection rule and for m3 != m1+m2.
double cg_coefficient_complex(int l1, int m1, int l2, int m2, int l3, int m3);

// Real-basis coefficient coupling real spherical-harmonic components.
// See docs/conventions.md for the change-of-basis and phase convention.
// Throws ArgumentError when any |m| > l; returns exactly 0 when the selection
// rule fails.
double cg_coefficient(int l1, int m1, int l2, int m2, int l3, int m3);

struct CgEntry {
  int m3, m1, m2;  // component indices, each in -l..l
  double value;
};

// All non-zero real-basis coefficients of one path, in (m3, m1, m2)
// lexicographic order.
std::vector<CgEntry> cg_path_entries(int l1, int l2, int l3);

}  // namespace cgcp::so3
