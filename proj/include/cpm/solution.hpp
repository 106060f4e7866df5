#pragma once

#include "cpm/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace cpm {

/// One root of an equilibrium system. Residuals are dimensionless: each
/// equation divided by the magnitude of its terms.
struct EquilibriumSolution {
  Complex beta;
  Complex L;
  Complex x_beta;  // tan(beta/2); infinite for beta = pi
  double residual_force = 0;
  double residual_moment = 0;
  bool is_real = false;
  bool accepted = true;
  std::string branch;  // case ii: signs of L1 satisfying each equation, e.g. "++"
  double normal_force = std::numeric_limits<double>::quiet_NaN();  // real solutions only
  bool backsub_fallback = false;
  std::string note;
};

inline constexpr double kRealTolerance = 1e-8;

/// Zeroes the imaginary parts when both are within kRealTolerance.
inline void flag_real(EquilibriumSolution& s) {
  s.is_real = std::abs(s.beta.imag()) <= kRealTolerance && std::abs(s.L.imag()) <= kRealTolerance;
  if (s.is_real) {
    s.beta = {s.beta.real(), 0.0};
    s.L = {s.L.real(), 0.0};
    if (std::isfinite(s.x_beta.real())) s.x_beta = {s.x_beta.real(), 0.0};
  }
}

/// Deterministic order: real part of beta (to 1e-9), then imaginary part.
inline void sort_solutions(std::vector<EquilibriumSolution>& v) {
  auto key = [](const EquilibriumSolution& s) { return std::llround(s.beta.real() * 1e9); };
  std::stable_sort(v.begin(), v.end(), [&](const EquilibriumSolution& a, const EquilibriumSolution& b) {
    if (key(a) != key(b)) return key(a) < key(b);
    return a.beta.imag() < b.beta.imag();
  });
}

}  // namespace cpm
