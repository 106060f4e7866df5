#pragma once

// Dialytic (Sylvester) elimination of L from two quartics, determinants of
// polynomial matrices by evaluation on the unit circle, and recovery of L at
// a common root.

#include "cpm/numeric.hpp"
#include "cpm/polynomial.hpp"

#include <Eigen/SVD>

#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <random>
#include <vector>

namespace cpm {

/// Coefficients q[0..4] of q0 + q1 L + ... + q4 L⁴.
template <typename S>
using Quartic = std::array<S, 5>;

template <typename S>
using Matrix8 = Eigen::Matrix<S, 8, 8>;

/// 8x8 matrix acting on (L⁷, ..., L, 1): rows are F·L^r and M·L^r, r = 0..3,
/// interleaved F, M with r = 0 first.
template <typename S>
Matrix8<S> dialytic_matrix(const Quartic<S>& f, const Quartic<S>& m) {
  Matrix8<S> a = Matrix8<S>::Zero();
  for (int r = 0; r < 4; ++r) {
    for (int k = 0; k <= 4; ++k) {
      const int col = 7 - (k + r);
      a(2 * r, col) = f[k];
      a(2 * r + 1, col) = m[k];
    }
  }
  return a;
}

/// Square matrix of polynomials in x.
template <typename R>
struct PolyMatrix {
  int n = 0;
  std::vector<CPolynomial<R>> entries;  // row-major

  PolyMatrix() = default;
  explicit PolyMatrix(int dim) : n(dim), entries(static_cast<std::size_t>(dim * dim)) {}

  CPolynomial<R>& operator()(int i, int j) { return entries[i * n + j]; }
  const CPolynomial<R>& operator()(int i, int j) const { return entries[i * n + j]; }

  Eigen::Matrix<std::complex<R>, Eigen::Dynamic, Eigen::Dynamic> at(
      const std::complex<R>& x) const {
    Eigen::Matrix<std::complex<R>, Eigen::Dynamic, Eigen::Dynamic> m(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) m(i, j) = (*this)(i, j)(x);
    return m;
  }

  int degree_bound() const {
    // sum over rows of the largest entry degree
    int d = 0;
    for (int i = 0; i < n; ++i) {
      int row = 0;
      for (int j = 0; j < n; ++j) row = std::max(row, (*this)(i, j).degree());
      d += row;
    }
    return d;
  }
};

struct InterpolationInfo {
  int nodes = 0;
  int degree_bound = 0;
  double holdout_error = 0;  // max |poly − det| / max |det| at held-out nodes
};

inline constexpr double kHoldoutTolerance = 1e-7;
inline constexpr int kHoldoutNodes = 16;

/// Determinant of a matrix-valued function of x that is a polynomial of
/// degree ≤ D. `det_at(x)` returns the (already cleared) scalar determinant.
/// Samples at N ≈ 1.25 (D+1) unit-circle nodes offset by half a step, with N a
/// multiple of 4 so no node is ±i, recovers coefficients by the inverse DFT
/// (the least-squares fit on those nodes) and checks 16 held-out random nodes,
/// also kept away from ±i.
template <typename R>
CPolynomial<R> interpolate_on_circle(const std::function<std::complex<R>(const std::complex<R>&)>& det_at,
                                     int D, InterpolationInfo* info = nullptr) {
  using std::abs;
  using std::cos;
  using std::sin;
  using C = std::complex<R>;
  int N = std::max(D + 1, static_cast<int>(std::ceil(1.25 * (D + 1))));
  N = (N + 3) / 4 * 4;
  const R pi = pi_v<R>();
  std::vector<C> vals(N);
  std::vector<C> nodes(N);
  for (int j = 0; j < N; ++j) {
    const R t = pi * R(2 * j + 1) / R(N);
    nodes[j] = C(cos(t), sin(t));
    vals[j] = det_at(nodes[j]);
  }
  std::vector<C> coeff(D + 1, C(0));
  for (int m = 0; m <= D; ++m) {
    C acc(0);
    for (int j = 0; j < N; ++j) {
      // z_j^{-m} = conj(z_j)^m on the unit circle
      const R t = -pi * R(2 * j + 1) * R(m) / R(N);
      acc += vals[j] * C(cos(t), sin(t));
    }
    coeff[m] = acc / R(N);
  }
  CPolynomial<R> p(std::move(coeff));

  std::mt19937_64 rng(0x5eed);
  std::uniform_real_distribution<double> ang(0.0, 2.0 * std::numbers::pi);
  R scale(0);
  for (const C& v : vals) scale = std::max(scale, R(abs(v)));
  R worst(0);
  for (int h = 0; h < kHoldoutNodes; ++h) {
    double td = ang(rng);
    while (std::abs(std::cos(td)) < 0.05) td = ang(rng);
    const R t = R(td);
    const C x(cos(t), sin(t));
    const C v = det_at(x);
    scale = std::max(scale, R(abs(v)));
    worst = std::max(worst, R(abs(p(x) - v)));
  }
  const double err = scale > R(0) ? to_double(R(worst / scale)) : 0.0;
  if (info) *info = InterpolationInfo{N, D, err};
  if (!(err <= kHoldoutTolerance)) {
    throw Error(ErrorCode::InterpolationMismatch,
                "held-out nodes disagree by " + std::to_string(err) + " (relative) at degree bound " +
                    std::to_string(D));
  }
  return p;
}

/// Determinant of a polynomial matrix.
template <typename R>
CPolynomial<R> polymatrix_det(const PolyMatrix<R>& m, InterpolationInfo* info = nullptr) {
  std::function<std::complex<R>(const std::complex<R>&)> f = [&m](const std::complex<R>& x) {
    return m.at(x).partialPivLu().determinant();
  };
  CPolynomial<R> p = interpolate_on_circle<R>(f, m.degree_bound(), info);
  return p.normalize();
}

struct BackSubstitution {
  Complex L;
  double condition = 0;      // 2-norm condition of the 7x7 system used
  bool used_fallback = false;
  double fallback_gap = 0;   // |root_F − root_M| of the closest pair
  double agreement = 0;      // relative |L_linear − L_fallback|
  std::vector<Complex> pairs;  // midpoints of every (F root, M root) pair, closest first
};

inline constexpr double kBackSubCondition = 1e12;
inline constexpr double kBackSubAgreement = 1e-6;

namespace detail {

template <typename S>
Eigen::Matrix<S, 7, 8> seven_rows(const Matrix8<S>& a, int dropped) {
  Eigen::Matrix<S, 7, 8> r;
  int k = 0;
  for (int i = 0; i < 8; ++i) {
    if (i != dropped) r.row(k++) = a.row(i);
  }
  return r;
}

template <typename R>
std::vector<std::complex<R>> quartic_roots(const Quartic<std::complex<R>>& q) {
  CPolynomial<R> p(std::vector<std::complex<R>>(q.begin(), q.end()));
  p.normalize();
  if (p.degree() < 1) return {};
  return poly_roots(p).roots;
}

}  // namespace detail

/// L shared by the two quartics. Solves seven rows of the dialytic system for
/// (L⁷, ..., L) and reads the last component; the closest pair of quartic
/// roots is the cross-check and the fallback when the solve is ill-conditioned.
template <typename R>
BackSubstitution back_substitute(const Quartic<std::complex<R>>& f,
                                 const Quartic<std::complex<R>>& m) {
  using std::abs;
  using std::sqrt;
  using C = std::complex<R>;
  const Matrix8<C> a = dialytic_matrix(f, m);

  BackSubstitution out;
  double best_cond = std::numeric_limits<double>::infinity();
  C L_lin(0);
  // dropping M·L³ is the natural choice; F·L³ is tried when that is worse
  for (int dropped : {7, 6}) {
    const Eigen::Matrix<C, 7, 8> rows = detail::seven_rows(a, dropped);
    Eigen::Matrix<C, 7, 7> sys = rows.template leftCols<7>();
    const Eigen::Matrix<C, 7, 1> rhs = -rows.col(7);
    // unit columns; powers of L differ by orders of magnitude
    std::array<R, 7> colscale;
    for (int j = 0; j < 7; ++j) {
      R n(0);
      for (int i = 0; i < 7; ++i) n += R(abs(sys(i, j))) * R(abs(sys(i, j)));
      colscale[j] = n > R(0) ? R(sqrt(n)) : R(1);
      sys.col(j) /= colscale[j];
    }
    Eigen::Matrix<Complex, 7, 7> sys_d;
    for (int i = 0; i < 7; ++i)
      for (int j = 0; j < 7; ++j) sys_d(i, j) = to_double(sys(i, j));
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd{Eigen::MatrixXcd(sys_d)};
    const auto& sv = svd.singularValues();
    const double cond = sv(6) > 0 ? sv(0) / sv(6) : std::numeric_limits<double>::infinity();
    if (cond < best_cond) {
      best_cond = cond;
      L_lin = sys.partialPivLu().solve(rhs)(6) / colscale[6];
    }
  }
  out.condition = best_cond;

  const auto rf = detail::quartic_roots<R>(f);
  const auto rm = detail::quartic_roots<R>(m);
  std::vector<std::pair<R, C>> pairs;
  for (const C& u : rf)
    for (const C& v : rm) pairs.emplace_back(R(abs(u - v)), (u + v) / R(2));
  std::stable_sort(pairs.begin(), pairs.end(),
                   [](const auto& x, const auto& y) { return x.first < y.first; });
  for (const auto& pr : pairs) out.pairs.push_back(to_double(pr.second));
  const C L_fb = pairs.empty() ? C(0) : pairs.front().second;
  const R gap = pairs.empty() ? R(0) : pairs.front().first;
  const bool have_fb = !rf.empty() && !rm.empty();
  out.fallback_gap = have_fb ? to_double(gap) : std::numeric_limits<double>::infinity();

  const bool well = std::isfinite(best_cond) && best_cond <= kBackSubCondition;
  if (have_fb) {
    const R denom = std::max(R(abs(L_fb)), R(1));
    out.agreement = to_double(R(abs(L_lin - L_fb) / denom));
  }
  if (well || !have_fb) {
    out.L = to_double(L_lin);
  } else {
    out.L = to_double(L_fb);
    out.used_fallback = true;
  }
  return out;
}

}  // namespace cpm
