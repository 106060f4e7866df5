#include "cpm/case_two.hpp"

#include <cmath>

namespace cpm {

namespace {

template <typename R>
using C = std::complex<R>;

template <typename R>
std::pair<C<R>, C<R>> squared_pair(const Anchors<R>& a, const C<R>& L, const C<R>& c,
                                   const C<R>& s) {
  const ContactPose<C<R>> pose = pose_from_trig(L, c, s, a);
  const ABCD<C<R>> t = abcd_at(pose, a);
  const C<R> l1sq = l1_squared(pose, a);
  return {t.A * t.A * l1sq - t.B * t.B, t.C * t.C * l1sq - t.D * t.D};
}

template <typename R>
using PairFn = std::function<std::pair<C<R>, C<R>>(const C<R>&)>;

template <typename R>
bool fit_at(const PairFn<R>& fn, R ell, R shift, QuarticPair<R>& out) {
  using std::abs;
  const std::array<R, 5> nodes{R(-2), R(-1), R(0), R(1), R(2)};
  const std::array<R, 3> held{R(-1.5), R(0.5), R(2.5)};

  // coefficients in t = L/ell, rescaled at the end
  Eigen::Matrix<C<R>, 5, 5> V;
  Eigen::Matrix<C<R>, 5, 2> rhs;
  R scale_f(0), scale_m(0);
  for (int i = 0; i < 5; ++i) {
    const R t = nodes[i] + shift;
    C<R> p(1);
    for (int j = 0; j < 5; ++j) {
      V(i, j) = p;
      p *= C<R>(t);
    }
    const auto [f, m] = fn(C<R>(t * ell));
    rhs(i, 0) = f;
    rhs(i, 1) = m;
    scale_f = std::max(scale_f, R(abs(f)));
    scale_m = std::max(scale_m, R(abs(m)));
  }
  const Eigen::Matrix<C<R>, 5, 2> coef = V.partialPivLu().solve(rhs);

  R worst(0);
  for (const R& h : held) {
    const R t = h + shift;
    const auto [f, m] = fn(C<R>(t * ell));
    C<R> pf(0), pm(0);
    for (int j = 4; j >= 0; --j) {
      pf = pf * C<R>(t) + coef(j, 0);
      pm = pm * C<R>(t) + coef(j, 1);
    }
    scale_f = std::max(scale_f, R(abs(f)));
    scale_m = std::max(scale_m, R(abs(m)));
    if (scale_f > R(0)) worst = std::max(worst, R(abs(pf - f) / scale_f));
    if (scale_m > R(0)) worst = std::max(worst, R(abs(pm - m) / scale_m));
  }
  out.holdout_error = to_double(worst);
  if (!(out.holdout_error <= 1e-9)) return false;

  R e(1);
  for (int j = 0; j < 5; ++j) {
    out.F[j] = coef(j, 0) / e;
    out.M[j] = coef(j, 1) / e;
    e *= ell;
  }
  return true;
}

}  // namespace

template <typename R>
QuarticPair<R> fit_quartic_pair(const PairFn<R>& fn, R ell) {
  QuarticPair<R> out;
  for (R shift : {R(0), R(0.37), R(-0.61)}) {
    if (fit_at(fn, ell, shift, out)) return out;
  }
  throw Error(ErrorCode::ProbeSingularity,
              "quartic fit in L failed its held-out check (error " +
                  std::to_string(out.holdout_error) + ")");
}

template <typename R>
QuarticPair<R> quartic_pair_at(const Anchors<R>& a, const std::complex<R>& c,
                               const std::complex<R>& s) {
  const PairFn<R> fn = [&](const C<R>& L) { return squared_pair(a, L, c, s); };
  return fit_quartic_pair(fn, a.length_scale);
}

template QuarticPair<double> fit_quartic_pair(const PairFn<double>&, double);
template QuarticPair<Wide> fit_quartic_pair(const PairFn<Wide>&, Wide);
template QuarticPair<double> quartic_pair_at(const Anchors<double>&, const Complex&, const Complex&);
template QuarticPair<Wide> quartic_pair_at(const Anchors<Wide>&, const WideComplex&,
                                           const WideComplex&);

void require_case_ii_pattern(const MechanismParams& p) {
  if (!(p.L0[0] > 0) || p.L0[1] != 0 || p.L0[2] != 0) {
    throw Error(ErrorCode::WrongFreeLengthPattern,
                "this solver needs L01 > 0 and L02 = L03 = 0");
  }
}

namespace {

/// Quartic pair at x with each quartic multiplied by (1 + x²)^e.
QuarticPair<Wide> cleared_pair(const Anchors<Wide>& a, const WideComplex& x, int e) {
  const WideComplex w = WideComplex(1) + x * x;
  QuarticPair<Wide> q = quartic_pair_at(a, (WideComplex(1) - x * x) / w, WideComplex(2) * x / w);
  WideComplex we(1);
  for (int i = 0; i < e; ++i) we *= w;
  for (int j = 0; j < 5; ++j) {
    q.F[j] *= we;
    q.M[j] *= we;
  }
  return q;
}

constexpr int kMaxClearing = 5;

}  // namespace

ResultantInfo resultant_polynomial(const MechanismParams& params) {
  params.validate();
  require_case_ii_pattern(params);
  const Anchors<Wide> a = make_anchors<Wide>(params);

  ResultantInfo info;
  std::string last_error;
  for (int e = 1; e <= kMaxClearing; ++e) {
    std::function<WideComplex(const WideComplex&)> det_at = [&](const WideComplex& x) {
      const QuarticPair<Wide> q = cleared_pair(a, x, e);
      return dialytic_matrix(q.F, q.M).partialPivLu().determinant();
    };
    try {
      info.poly = interpolate_on_circle<Wide>(det_at, 16 * e, &info.interpolation);
    } catch (const Error& err) {
      if (err.code() != ErrorCode::InterpolationMismatch) throw;
      last_error = err.what();
      continue;
    }
    info.clearing_exponent = e;
    info.poly.normalize(Wide(1e-13));
    info.degree = info.poly.degree();
    CPolynomial<Wide> copy = info.poly;
    info.pole_multiplicity = deflate_unit_imaginary(copy, Wide(1e-20));
    return info;
  }
  throw Error(ErrorCode::InterpolationMismatch,
              "no clearing exponent up to " + std::to_string(kMaxClearing) + " validated: " + last_error);
}

FilterResidual filter_residual(const Anchors<double>& a, Complex L, Complex c, Complex s) {
  const ContactPose<Complex> pose = pose_from_trig(L, c, s, a);
  const ABCD<Complex> t = abcd_at(pose, a);
  const Complex l1 = std::sqrt(l1_squared(pose, a));
  const double ell = a.length_scale;
  const double j1 = a.k[0] + a.k[1] + a.k[2];

  auto pick = [](Complex x_l1, Complex y, double scale, double& res, char& sign) {
    const double plus = std::abs(x_l1 - y);
    const double minus = std::abs(x_l1 + y);
    sign = plus <= minus ? '+' : '-';
    res = std::min(plus, minus) / scale;
  };
  FilterResidual r;
  pick(t.A * l1, t.B, std::abs(t.A * l1) + std::abs(t.B) + j1 * ell * ell, r.force, r.force_sign);
  pick(t.C * l1, t.D, std::abs(t.C * l1) + std::abs(t.D) + j1 * ell * ell * ell, r.moment,
       r.moment_sign);
  return r;
}

CaseIIResult solve_case_ii(const MechanismParams& params, double tol_acc) {
  CaseIIResult out;
  out.tol_acc = tol_acc;
  out.resultant = resultant_polynomial(params);
  const int e = out.resultant.clearing_exponent;
  const Anchors<Wide> aw = make_anchors<Wide>(params);
  const Anchors<double> ad = make_anchors<double>(params);

  const RootsResult<Wide> roots = poly_roots(out.resultant.poly);
  for (std::size_t i = 0; i < roots.roots.size(); ++i) {
    const WideComplex& xw = roots.roots[i];
    EquilibriumSolution sol;
    sol.x_beta = to_double(xw);
    sol.beta = 2.0 * std::atan(sol.x_beta);
    try {
      const QuarticPair<Wide> q = cleared_pair(aw, xw, e);
      const BackSubstitution bs = back_substitute<Wide>(q.F, q.M);
      sol.L = bs.L;
      sol.backsub_fallback = bs.used_fallback;
      if (!bs.used_fallback && bs.agreement > kBackSubAgreement) {
        sol.note = "back-substitution and root matching differ by " + std::to_string(bs.agreement);
      }
      const Complex x = sol.x_beta;
      const Complex w = 1.0 + x * x;
      const Complex c = (1.0 - x * x) / w, s = 2.0 * x / w;
      FilterResidual fr = filter_residual(ad, sol.L, c, s);
      if (bs.used_fallback) {
        // near-common roots can be spurious; keep the pair that best solves the unsquared pair
        for (const Complex& L : bs.pairs) {
          const FilterResidual t = filter_residual(ad, L, c, s);
          if (std::max(t.force, t.moment) < std::max(fr.force, fr.moment)) {
            fr = t;
            sol.L = L;
          }
        }
      }
      sol.residual_force = fr.force;
      sol.residual_moment = fr.moment;
      sol.branch = std::string{fr.force_sign, fr.moment_sign};
      sol.accepted = fr.force <= tol_acc && fr.moment <= tol_acc;
    } catch (const Error& err) {
      sol.accepted = false;
      sol.residual_force = sol.residual_moment = std::numeric_limits<double>::infinity();
      sol.note = err.what();
    }
    flag_real(sol);
    if (sol.is_real && sol.accepted) {
      try {
        const auto pose = pose_from(sol.L.real(), sol.beta.real(), ad);
        sol.normal_force = contact_normal_force(pose, ad);
      } catch (const Error&) {
      }
    }
    out.solutions.push_back(sol);
  }

  // b = pi is outside the x parametrization
  {
    const QuarticPair<Wide> q = quartic_pair_at(aw, WideComplex(-1), WideComplex(0));
    CPolynomial<Wide> pf(std::vector<WideComplex>(q.F.begin(), q.F.end()));
    CPolynomial<Wide> pm(std::vector<WideComplex>(q.M.begin(), q.M.end()));
    pf.normalize();
    pm.normalize();
    out.beta_pi_gap = std::numeric_limits<double>::infinity();
    if (pf.degree() >= 1 && pm.degree() >= 1) {
      Complex best_L;
      for (const WideComplex& u : poly_roots(pf).roots) {
        for (const WideComplex& v : poly_roots(pm).roots) {
          const double d = to_double(Wide(abs(u - v) / std::max(Wide(abs(u)), Wide(1))));
          if (d < out.beta_pi_gap) {
            out.beta_pi_gap = d;
            best_L = to_double(WideComplex((u + v) / Wide(2)));
          }
        }
      }
      if (out.beta_pi_gap <= 1e-8) {
        out.beta_pi_root = true;
        EquilibriumSolution sol;
        sol.x_beta = Complex(std::numeric_limits<double>::infinity(), 0);
        sol.beta = std::numbers::pi;
        sol.L = best_L;
        const FilterResidual fr = filter_residual(ad, best_L, -1.0, 0.0);
        sol.residual_force = fr.force;
        sol.residual_moment = fr.moment;
        sol.branch = std::string{fr.force_sign, fr.moment_sign};
        sol.accepted = fr.force <= tol_acc && fr.moment <= tol_acc;
        sol.note = "beta = pi (tan-half pole)";
        flag_real(sol);
        out.solutions.push_back(sol);
      }
    }
  }

  sort_solutions(out.solutions);
  out.max_accepted_residual = 0;
  out.min_rejected_residual = std::numeric_limits<double>::infinity();
  for (const auto& s : out.solutions) {
    const double r = std::max(s.residual_force, s.residual_moment);
    if (s.accepted) {
      ++out.accepted;
      out.max_accepted_residual = std::max(out.max_accepted_residual, r);
    } else {
      ++out.rejected;
      out.min_rejected_residual = std::min(out.min_rejected_residual, r);
    }
    if (s.is_real) ++out.real;
  }
  out.margin = out.max_accepted_residual > 0 ? out.min_rejected_residual / out.max_accepted_residual
                                             : std::numeric_limits<double>::infinity();
  return out;
}

}  // namespace cpm
