#pragma once

// Spring 1 with nonzero free length, springs 2 and 3 at zero. Multiplying the
// equilibrium equations by L1 gives
//   A·L1 = B,   C·L1 = D
// with A, B, C, D polynomial in (L, cos b, sin b). Squaring and substituting
// L1² gives two quartics in L whose dialytic resultant is a polynomial in
// x = tan(b/2).

#include "cpm/mechanism.hpp"
#include "cpm/polynomial.hpp"
#include "cpm/resultant.hpp"
#include "cpm/solution.hpp"

#include <functional>
#include <vector>

namespace cpm {

template <typename S>
struct ABCD {
  S A, B, C, D;
};

/// A and C are the force projection and moment of the zero-free-length force
/// system; B and D carry the L01 part of spring 1.
template <typename S, typename T>
ABCD<S> abcd_at(const ContactPose<S>& pose, const Anchors<T>& a) {
  const auto v = spring_vectors(pose, a);
  const Vec2<S> u = vec_cast<S>(a.surface_dir);
  const std::array<Vec2<S>, 3> arm{Vec2<S>(vec_cast<S>(a.O1) - pose.P_P),
                                   Vec2<S>(vec_cast<S>(a.O1) - pose.P_P),
                                   Vec2<S>(vec_cast<S>(a.A1) - pose.P_P)};
  ABCD<S> r{S(0), S(0), S(0), S(0)};
  for (int i = 0; i < 3; ++i) {
    r.A += S(a.k[i]) * dot2(v[i], u);
    r.C += S(a.k[i]) * cross2(arm[i], v[i]);
  }
  const S k1L01 = S(a.k[0] * a.L0[0]);
  r.B = k1L01 * dot2(v[0], u);
  r.D = k1L01 * cross2(arm[0], v[0]);
  return r;
}

/// Squared spring-1 length; analytic in the pose.
template <typename S, typename T>
S l1_squared(const ContactPose<S>& pose, const Anchors<T>& a) {
  const Vec2<S> v = pose.P_O2 - vec_cast<S>(a.O1);
  return dot2(v, v);
}

template <typename R>
struct QuarticPair {
  Quartic<std::complex<R>> F;  // A²·L1² − B²
  Quartic<std::complex<R>> M;  // C²·L1² − D²
  double holdout_error = 0;
};

/// Fits two quartics in L to a pair-valued function from five probe nodes
/// {−2, −1, 0, 1, 2}·ell and checks three held-out nodes to 1e-9 relative.
/// Retries on shifted nodes; throws ProbeSingularity if none validate.
template <typename R>
QuarticPair<R> fit_quartic_pair(
    const std::function<std::pair<std::complex<R>, std::complex<R>>(const std::complex<R>&)>& fn,
    R ell);

/// F and M at fixed (cos b, sin b).
template <typename R>
QuarticPair<R> quartic_pair_at(const Anchors<R>& a, const std::complex<R>& c,
                               const std::complex<R>& s);

/// Throws WrongFreeLengthPattern unless L01 > 0 and L02 = L03 = 0.
void require_case_ii_pattern(const MechanismParams& p);

struct ResultantInfo {
  CPolynomial<Wide> poly;   // cleared numerator, trailing cutoff applied
  int degree = 0;
  int clearing_exponent = 0;  // per row: each quartic multiplied by (1 + x²)^e
  int pole_multiplicity = 0;  // factors of (1 + x²) inside poly
  InterpolationInfo interpolation;
};

ResultantInfo resultant_polynomial(const MechanismParams& params);

struct CaseIIResult {
  ResultantInfo resultant;
  std::vector<EquilibriumSolution> solutions;
  int accepted = 0;
  int rejected = 0;
  int real = 0;
  double tol_acc = 0;
  double max_accepted_residual = 0;
  double min_rejected_residual = 0;
  double margin = 0;  // min rejected / max accepted
  double beta_pi_gap = 0;  // relative distance between the closest F and M roots at b = pi
  bool beta_pi_root = false;
};

inline constexpr double kDefaultTolAcc = 1e-6;

CaseIIResult solve_case_ii(const MechanismParams& params, double tol_acc = kDefaultTolAcc);

/// Filter residuals at a candidate: for each equation the smaller of
/// |X·L1 − Y| and |X·L1 + Y| over its scale, with the sign that achieved it.
struct FilterResidual {
  double force = 0;
  double moment = 0;
  char force_sign = '+';
  char moment_sign = '+';
};

FilterResidual filter_residual(const Anchors<double>& a, Complex L, Complex c, Complex s);

}  // namespace cpm
