#pragma once

// All three free lengths zero. Both equilibrium equations are linear in L:
//   force:  J1 L + J2 cos b + J3 sin b + J4 = 0
//   moment: (K1 + K2 cos b + K3 sin b) L + K4 cos b + K5 sin b = 0
// Eliminating L after x = tan(b/2) leaves a quartic in x.

#include "cpm/mechanism.hpp"
#include "cpm/polynomial.hpp"
#include "cpm/solution.hpp"

#include <array>
#include <vector>

namespace cpm {

struct CaseICoefficients {
  std::array<double, 4> J{};  // J[0] is J1
  std::array<double, 5> K{};

  /// Residuals of the two linear forms; generic over complex (L, cos, sin).
  template <typename S>
  S force(const S& L, const S& c, const S& s) const {
    return S(J[0]) * L + S(J[1]) * c + S(J[2]) * s + S(J[3]);
  }
  template <typename S>
  S moment(const S& L, const S& c, const S& s) const {
    return (S(K[0]) + S(K[1]) * c + S(K[2]) * s) * L + S(K[3]) * c + S(K[4]) * s;
  }
};

/// Extracted by evaluating the exact residuals at six (L, beta) probes.
CaseICoefficients case_i_coefficients(const MechanismParams& params);

/// C0 + C1 x + ... + C4 x⁴, from −P·Q + J1 (1 + x²) R.
CPolynomial<double> case_i_quartic(const CaseICoefficients& k);

struct CaseIResult {
  CaseICoefficients coeffs;
  CPolynomial<double> quartic;  // as formed, before any deflation
  int degree = 4;               // effective degree after the leading-coefficient cutoff
  bool beta_pi_root = false;
  std::vector<EquilibriumSolution> solutions;
};

inline constexpr double kDegenerateLeading = 1e-12;

/// All solutions, sorted by Re beta then Im beta. Throws DegenerateQuartic only
/// when the quartic vanishes entirely.
CaseIResult solve_case_i(const MechanismParams& params);

}  // namespace cpm
