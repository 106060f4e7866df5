#pragma once

#include "cpm/mechanism.hpp"
#include "cpm/solution.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <random>
#include <vector>

namespace cpm::test {

/// The worked instance used throughout: surface at 150°, base at 20°.
inline MechanismParams reference_params(double L01 = 0) {
  MechanismParams p;
  p.P_M = {19.5, 6.25};
  p.alpha = deg_to_rad(150);
  p.P_A1_in1 = {5.5, 0};
  p.P_A2_in2 = {4.5, 0};
  p.P_P_in2 = {2.25, 2.5};
  p.P_O1 = {5, 3.5};
  p.phi1 = deg_to_rad(20);
  p.k = {1.5, 1.85, 1.45};
  p.L0 = {L01, 0, 0};
  return p;
}

struct Root {
  Complex beta;
  Complex L;
};

/// Published roots for all-zero free lengths (conjugate pair listed once).
inline const std::vector<Root> kZeroFreeRoots = {
    {{2.8889, 0}, {6.8220, 0}},
    {{-0.1904, 0}, {7.3693, 0}},
    {{-0.4294, 1.8668}, {6.1074, 8.2840}},
    {{-0.4294, -1.8668}, {6.1074, -8.2840}},
};

/// Published roots for L01 = 1. The complex rows are given as (β, L) with the
/// upper signs; the conjugate follows.
inline std::vector<Root> one_nonzero_roots() {
  std::vector<Root> r = {
      {{2.9284, 0}, {6.8364, 0}},   {{2.8837, 0}, {6.953, 0}},
      {{2.9468, 0}, {6.9906, 0}},   {{2.9023, 0}, {7.1073, 0}},
      {{-0.2255, 0}, {7.355, 0}},   {{-0.1958, 0}, {7.6037, 0}},
      {{-0.0970, 0}, {7.6834, 0}},  {{-0.0671, 0}, {7.9421, 0}},
  };
  const std::vector<Root> upper = {
      {{-0.479931, -1.778021}, {5.936438, -7.867302}},
      {{-0.442435, -1.882235}, {5.995607, -7.933405}},
      {{-0.444923, -1.757214}, {6.278938, -7.749504}},
      {{-0.400698, -1.867888}, {6.326189, -7.839231}},
      {{0.148383, -1.075567}, {7.441804, -8.670424}},
      {{-1.658747, -1.330224}, {7.48042, -10.277582}},
      {{0.711855, -1.023609}, {7.868223, 0.279091}},
      {{0.731613, -1.712544}, {8.081043, -9.024726}},
      {{0.732104, -1.71446}, {8.08135, -9.026026}},
      {{0.733525, -1.712055}, {8.082343, -9.024419}},
      {{0.734018, -1.713966}, {8.08265, -9.025719}},
      {{0.768221, -1.459601}, {8.107967, -8.849827}},
      {{-2.936115, -1.174705}, {8.607065, -10.526548}},
      {{1.111301, -1.470257}, {13.473818, -3.974404}},
  };
  for (const Root& u : upper) {
    r.push_back(u);
    r.push_back({std::conj(u.beta), std::conj(u.L)});
  }
  return r;
}

/// Largest componentwise gap after greedy nearest-neighbour pairing of `want`
/// against `got`. Infinity if `got` has fewer entries.
inline double pairing_gap(const std::vector<Root>& want, const std::vector<Root>& got) {
  if (got.size() < want.size()) return std::numeric_limits<double>::infinity();
  std::vector<bool> used(got.size(), false);
  double worst = 0;
  for (const Root& w : want) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t at = 0;
    for (std::size_t i = 0; i < got.size(); ++i) {
      if (used[i]) continue;
      const double d = std::max({std::abs(w.beta.real() - got[i].beta.real()),
                                 std::abs(w.beta.imag() - got[i].beta.imag()),
                                 std::abs(w.L.real() - got[i].L.real()),
                                 std::abs(w.L.imag() - got[i].L.imag())});
      if (d < best) {
        best = d;
        at = i;
      }
    }
    used[at] = true;
    worst = std::max(worst, best);
  }
  return worst;
}

inline std::vector<Root> as_roots(const std::vector<EquilibriumSolution>& v, bool accepted_only) {
  std::vector<Root> out;
  for (const auto& s : v) {
    if (accepted_only && !s.accepted) continue;
    out.push_back({s.beta, s.L});
  }
  return out;
}

/// Random well-posed mechanism: base and surface lines clearly not parallel,
/// all springs zero free length unless L01 is given.
inline MechanismParams random_params(std::mt19937_64& rng, double L01 = 0) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  auto in = [&](double lo, double hi) { return lo + (hi - lo) * u(rng); };
  MechanismParams p;
  p.P_O1 = {in(-5, 5), in(-5, 5)};
  p.phi1 = in(-std::numbers::pi, std::numbers::pi);
  do {
    p.alpha = in(-std::numbers::pi, std::numbers::pi);
  } while (std::abs(std::sin(p.alpha - p.phi1)) < 0.3);
  p.P_M = {in(5, 20), in(5, 20)};
  p.P_A1_in1 = {in(2, 8), 0};
  p.P_A2_in2 = {in(2, 6), 0};
  p.P_P_in2 = {in(-3, 3), in(1, 4)};
  p.k = {in(0.5, 3), in(0.5, 3), in(0.5, 3)};
  p.L0 = {L01, 0, 0};
  return p;
}

/// Exact residuals at a pose with a scale built from the individual terms.
struct ScaledResidual {
  double force;
  double moment;
};

template <typename S>
ScaledResidual scaled_residual(const MechanismParams& params, const S& L, const S& beta) {
  const Anchors<double> a = make_anchors<double>(params);
  const ContactPose<S> pose = pose_from(L, beta, a);
  const SpringState<S> st = spring_state(pose, a);
  const Vec2<S> u = vec_cast<S>(a.surface_dir);
  const std::array<Vec2<S>, 3> anchor{vec_cast<S>(a.O1), vec_cast<S>(a.O1), vec_cast<S>(a.A1)};
  S f(0), m(0);
  double fs = 0, ms = 0;
  for (int i = 0; i < 3; ++i) {
    const Vec2<S> fi = st.dir[i] * st.force[i];
    const S fu = dot2(fi, u);
    const S mi = cross2(Vec2<S>(anchor[i] - pose.P_P), fi);
    f += fu;
    m += mi;
    fs += std::abs(fu);
    ms += std::abs(mi);
  }
  return {std::abs(f) / std::max(fs, 1e-300), std::abs(m) / std::max(ms, 1e-300)};
}

}  // namespace cpm::test
