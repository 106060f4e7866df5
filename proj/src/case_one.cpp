#include "cpm/case_one.hpp"

#include <cmath>

namespace cpm {

namespace {

struct Probe {
  double force;
  double moment;
};

Probe probe(const Anchors<double>& a, double L, double c, double s) {
  const ContactPose<double> pose = pose_from_trig(L, c, s, a);
  return {force_projection_residual(pose, a), moment_residual(pose, a)};
}

void require_zero_free_lengths(const MechanismParams& p) {
  for (int i = 0; i < 3; ++i) {
    if (p.L0[i] != 0) {
      throw Error(ErrorCode::NonZeroFreeLength,
                  "L0" + std::to_string(i + 1) + " = " + std::to_string(p.L0[i]) +
                      "; this solver needs all free lengths zero");
    }
  }
}

}  // namespace

CaseICoefficients case_i_coefficients(const MechanismParams& params) {
  require_zero_free_lengths(params);
  const Anchors<double> a = make_anchors<double>(params);

  const Probe p00 = probe(a, 0, 1, 0);
  const Probe p10 = probe(a, 1, 1, 0);
  const Probe p0h = probe(a, 0, 0, 1);
  const Probe p0p = probe(a, 0, -1, 0);
  const Probe p1h = probe(a, 1, 0, 1);
  const Probe p1p = probe(a, 1, -1, 0);

  CaseICoefficients k;
  k.J[3] = 0.5 * (p00.force + p0p.force);
  k.J[1] = 0.5 * (p00.force - p0p.force);
  k.J[0] = p10.force - p00.force;
  k.J[2] = p0h.force - k.J[3];

  k.K[3] = p00.moment;
  k.K[4] = p0h.moment;
  const double k1_plus_k2 = p10.moment - k.K[3];
  const double k1_minus_k2 = p1p.moment + k.K[3];
  k.K[0] = 0.5 * (k1_plus_k2 + k1_minus_k2);
  k.K[1] = 0.5 * (k1_plus_k2 - k1_minus_k2);
  k.K[2] = p1h.moment - k.K[4] - k.K[0];
  return k;
}

CPolynomial<double> case_i_quartic(const CaseICoefficients& k) {
  using P = CPolynomial<double>;
  const double J1 = k.J[0], J2 = k.J[1], J3 = k.J[2], J4 = k.J[3];
  const double K1 = k.K[0], K2 = k.K[1], K3 = k.K[2], K4 = k.K[3], K5 = k.K[4];
  // with w = 1 + x², cos = (1 − x²)/w, sin = 2x/w
  const P lin({K1 + K2, 2 * K3, K1 - K2});     // w·(K1 + K2 cos + K3 sin)
  const P force({J2 + J4, 2 * J3, J4 - J2});   // w·(J2 cos + J3 sin + J4)
  const P mom({K4, 2 * K5, -K4});              // w·(K4 cos + K5 sin)
  const P w({1.0, 0.0, 1.0});
  // L = −force/(J1 w) into lin·L/w + mom/w = 0, times J1 w²
  return Complex(-1) * (lin * force) + Complex(J1) * (w * mom);
}

CaseIResult solve_case_i(const MechanismParams& params) {
  params.validate();
  CaseIResult out;
  out.coeffs = case_i_coefficients(params);
  const CaseICoefficients& k = out.coeffs;
  const Anchors<double> a = make_anchors<double>(params);

  out.quartic = case_i_quartic(k);
  CPolynomial<double> q = out.quartic;
  q.normalize(kDegenerateLeading);
  if (q.is_zero() || q.degree() < 1) {
    throw Error(ErrorCode::DegenerateQuartic, "quartic vanishes; every beta is a solution or none is");
  }
  out.degree = q.degree();

  auto make = [&](Complex x, Complex c, Complex s, Complex beta) {
    EquilibriumSolution sol;
    sol.x_beta = x;
    sol.beta = beta;
    sol.L = -(Complex(k.J[1]) * c + Complex(k.J[2]) * s + Complex(k.J[3])) / k.J[0];
    const double fs = std::abs(k.J[0] * sol.L) + std::abs(k.J[1] * c) + std::abs(k.J[2] * s) +
                      std::abs(k.J[3]);
    const double ms = std::abs((k.K[0] + k.K[1] * c + k.K[2] * s) * sol.L) +
                      std::abs(k.K[3] * c) + std::abs(k.K[4] * s);
    sol.residual_force = fs > 0 ? std::abs(k.force(sol.L, c, s)) / fs : 0.0;
    sol.residual_moment = ms > 0 ? std::abs(k.moment(sol.L, c, s)) / ms : 0.0;
    flag_real(sol);
    if (sol.is_real) {
      const auto pose = pose_from(sol.L.real(), sol.beta.real(), a);
      sol.normal_force = contact_normal_force(pose, a);
    }
    return sol;
  };

  for (const Complex& x : poly_roots(q).roots) {
    const Complex w = 1.0 + x * x;
    out.solutions.push_back(make(x, (1.0 - x * x) / w, 2.0 * x / w, 2.0 * std::atan(x)));
  }

  // x = tan(b/2) never reaches b = pi; check it directly
  if (out.degree < 4) {
    const double L = -(-k.J[1] + k.J[3]) / k.J[0];
    const double m = k.moment(L, -1.0, 0.0);
    const double ms = std::abs((k.K[0] - k.K[1]) * L) + std::abs(k.K[3]);
    if (std::abs(m) <= 1e-8 * std::max(ms, 1e-300)) {
      out.beta_pi_root = true;
      EquilibriumSolution sol =
          make(Complex(std::numeric_limits<double>::infinity(), 0), -1.0, 0.0, std::numbers::pi);
      sol.note = "beta = pi (tan-half pole)";
      out.solutions.push_back(sol);
    }
  }
  sort_solutions(out.solutions);
  return out;
}

}  // namespace cpm
