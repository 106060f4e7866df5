#pragma once

// Univariate polynomials with complex coefficients and an Aberth–Ehrlich
// all-roots solver. R is the real type (double or Wide).

#include "cpm/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

namespace cpm {

template <typename R>
class CPolynomial {
 public:
  using C = std::complex<R>;

  CPolynomial() : c_{C(0)} {}
  explicit CPolynomial(std::vector<C> coeffs) : c_(std::move(coeffs)) {
    if (c_.empty()) c_.push_back(C(0));
  }

  static CPolynomial from_roots(const std::vector<C>& roots, C lead = C(1)) {
    std::vector<C> c{lead};
    for (const C& r : roots) {
      c.push_back(C(0));
      for (std::size_t k = c.size() - 1; k > 0; --k) c[k] = c[k - 1] - r * c[k];
      c[0] = -r * c[0];
    }
    return CPolynomial(std::move(c));
  }

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  const std::vector<C>& coeffs() const { return c_; }
  const C& operator[](int k) const { return c_[k]; }
  C& operator[](int k) { return c_[k]; }

  R max_abs() const {
    using std::abs;
    R m(0);
    for (const C& v : c_) m = std::max(m, R(abs(v)));
    return m;
  }

  bool is_zero() const { return max_abs() == R(0); }

  /// Drops top coefficients with |c| <= rel·max|c|.
  CPolynomial& normalize(R rel = R(1e-13)) {
    using std::abs;
    const R cut = rel * max_abs();
    while (c_.size() > 1 && abs(c_.back()) <= cut) c_.pop_back();
    return *this;
  }

  C operator()(const C& x) const {
    C acc(0);
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
    return acc;
  }

  CPolynomial derivative() const {
    if (c_.size() == 1) return CPolynomial();
    std::vector<C> d(c_.size() - 1);
    for (std::size_t k = 1; k < c_.size(); ++k) d[k - 1] = c_[k] * R(static_cast<double>(k));
    return CPolynomial(std::move(d));
  }

  friend CPolynomial operator*(const CPolynomial& a, const CPolynomial& b) {
    std::vector<C> out(a.c_.size() + b.c_.size() - 1, C(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i)
      for (std::size_t j = 0; j < b.c_.size(); ++j) out[i + j] += a.c_[i] * b.c_[j];
    return CPolynomial(std::move(out));
  }

  friend CPolynomial operator+(const CPolynomial& a, const CPolynomial& b) {
    std::vector<C> out(std::max(a.c_.size(), b.c_.size()), C(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i) out[i] += a.c_[i];
    for (std::size_t i = 0; i < b.c_.size(); ++i) out[i] += b.c_[i];
    return CPolynomial(std::move(out));
  }

  friend CPolynomial operator*(const C& s, const CPolynomial& p) {
    std::vector<C> out(p.c_);
    for (C& v : out) v *= s;
    return CPolynomial(std::move(out));
  }

 private:
  std::vector<C> c_;  // c_[k] multiplies x^k
};

/// Divides by (1 + x²) as long as the remainder stays below rel·max|c|.
/// Returns the number of factors removed.
template <typename R>
int deflate_unit_imaginary(CPolynomial<R>& p, R rel) {
  using std::abs;
  using C = std::complex<R>;
  int count = 0;
  while (p.degree() >= 2) {
    std::vector<C> r(p.coeffs());
    const int n = p.degree();
    std::vector<C> q(n - 1);
    for (int k = n; k >= 2; --k) {
      q[k - 2] = r[k];
      r[k - 2] -= r[k];
      r[k] = C(0);
    }
    if (R(abs(r[0])) + R(abs(r[1])) > rel * p.max_abs()) break;
    p = CPolynomial<R>(std::move(q));
    ++count;
  }
  return count;
}

template <typename R>
struct RootsResult {
  std::vector<std::complex<R>> roots;
  std::vector<R> backward_error;  // |p(z)| / Σ|c_k||z|^k per root
  int iterations = 0;
  bool converged = false;
};

namespace detail {

/// Newton step ratio p/p' and backward error at z. Evaluates the reversed
/// polynomial outside the unit disk.
template <typename R>
std::pair<std::complex<R>, R> newton_ratio(const std::vector<std::complex<R>>& c,
                                           const std::complex<R>& z) {
  using std::abs;
  using C = std::complex<R>;
  const int n = static_cast<int>(c.size()) - 1;
  const R az = abs(z);
  if (az <= R(1)) {
    C p(0), dp(0);
    R scale(0);
    for (int k = n; k >= 0; --k) {
      dp = dp * z + p;
      p = p * z + c[k];
      scale = scale * az + R(abs(c[k]));
    }
    const R be = scale > R(0) ? R(abs(p)) / scale : R(0);
    if (p == C(0)) return {C(0), R(0)};
    return {p / dp, be};
  }
  // p(z) = z^n q(y), y = 1/z, q reversed; p/p' = z q / (n q − y q')
  const C y = C(1) / z;
  const R ay = R(1) / az;
  C q(0), dq(0);
  R scale(0);
  for (int k = 0; k <= n; ++k) {
    dq = dq * y + q;
    q = q * y + c[k];
    scale = scale * ay + R(abs(c[k]));
  }
  const R be = scale > R(0) ? R(abs(q)) / scale : R(0);
  if (q == C(0)) return {C(0), R(0)};
  return {z * q / (R(static_cast<double>(n)) * q - y * dq), be};
}

/// Starting points on circles given by the upper convex hull of
/// (k, log|c_k|); each hull segment contributes its width in roots.
template <typename R>
std::vector<std::complex<R>> newton_polygon_start(const std::vector<std::complex<R>>& c) {
  using std::abs;
  using std::cos;
  using std::exp;
  using std::log;
  using std::sin;
  const int n = static_cast<int>(c.size()) - 1;
  std::vector<R> lg(n + 1);
  for (int k = 0; k <= n; ++k) {
    const R a = abs(c[k]);
    lg[k] = a > R(0) ? R(log(a)) : R(-1e30);
  }
  std::vector<int> hull;
  for (int k = 0; k <= n; ++k) {
    if (lg[k] <= R(-1e29) && k != 0 && k != n) continue;
    while (hull.size() >= 2) {
      const int i = hull[hull.size() - 2];
      const int j = hull.back();
      // drop j if it lies on or below the chord i..k
      if ((lg[j] - lg[i]) * R(k - i) <= (lg[k] - lg[i]) * R(j - i)) {
        hull.pop_back();
      } else {
        break;
      }
    }
    hull.push_back(k);
  }
  std::vector<std::complex<R>> z;
  z.reserve(n);
  const R two_pi = R(2) * pi_v<R>();
  const R sigma = R(0.7);  // angular offset, avoids symmetric stalls
  for (std::size_t h = 1; h < hull.size(); ++h) {
    const int i = hull[h - 1];
    const int j = hull[h];
    const int m = j - i;
    const R radius = exp((lg[i] - lg[j]) / R(m));
    for (int t = 0; t < m; ++t) {
      const R ang = two_pi * R(t) / R(m) + two_pi * R(static_cast<double>(i)) / R(n) + sigma;
      z.emplace_back(radius * cos(ang), radius * sin(ang));
    }
  }
  return z;
}

}  // namespace detail

/// All roots of p (degree ≥ 1) by Aberth–Ehrlich iteration. Exact zero
/// low-order coefficients are split off as roots at 0. Deterministic.
template <typename R>
RootsResult<R> poly_roots(const CPolynomial<R>& poly, int max_iter = 500) {
  using std::abs;
  using C = std::complex<R>;
  CPolynomial<R> p = poly;
  p.normalize(R(0));
  if (p.is_zero()) throw Error(ErrorCode::ZeroPolynomial, "polynomial is identically zero");
  if (p.degree() < 1) throw Error(ErrorCode::ZeroPolynomial, "constant polynomial has no roots");

  std::vector<C> c = p.coeffs();
  RootsResult<R> out;
  int zeros = 0;
  while (c.size() > 1 && c.front() == C(0)) {
    c.erase(c.begin());
    ++zeros;
  }
  const int n = static_cast<int>(c.size()) - 1;
  const R eps = epsilon_v<R>();
  const R stop = R(8) * eps;

  std::vector<C> z = detail::newton_polygon_start(c);
  std::vector<R> be(n, R(1));
  std::vector<bool> done(n, false);
  if (n == 1) {
    z[0] = -c[0] / c[1];
    done[0] = true;
    be[0] = R(0);
  }

  int it = 0;
  int remaining = n == 1 ? 0 : n;
  for (; it < max_iter && remaining > 0; ++it) {
    for (int i = 0; i < n; ++i) {
      if (done[i]) continue;
      auto [ratio, err] = detail::newton_ratio(c, z[i]);
      be[i] = err;
      if (err <= stop) {
        done[i] = true;
        --remaining;
        continue;
      }
      C s(0);
      for (int j = 0; j < n; ++j) {
        if (j != i) s += C(1) / (z[i] - z[j]);
      }
      const C w = ratio / (C(1) - ratio * s);
      z[i] -= w;
    }
  }
  // final backward errors
  for (int i = 0; i < n; ++i) be[i] = detail::newton_ratio(c, z[i]).second;

  out.iterations = it;
  out.converged = remaining == 0;
  out.roots.assign(zeros, C(0));
  out.backward_error.assign(zeros, R(0));
  out.roots.insert(out.roots.end(), z.begin(), z.end());
  out.backward_error.insert(out.backward_error.end(), be.begin(), be.end());
  return out;
}

/// Like poly_roots but throws NonConvergence when any root fails the
/// backward-error bound `tol`.
template <typename R>
std::vector<std::complex<R>> poly_roots_checked(const CPolynomial<R>& p, R tol = R(1e-8)) {
  RootsResult<R> r = poly_roots(p);
  R worst(0);
  for (const R& e : r.backward_error) worst = std::max(worst, e);
  if (worst > tol) {
    throw Error(ErrorCode::NonConvergence,
                "root finder stopped after " + std::to_string(r.iterations) +
                    " iterations; worst backward error " + std::to_string(to_double(worst)));
  }
  return r.roots;
}

}  // namespace cpm
