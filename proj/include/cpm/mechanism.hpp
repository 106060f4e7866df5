#pragma once

// Mechanism data and the contact-constrained pose (L, beta).
//
// The top platform touches the surface at its pin P. P slides along the
// surface line, L being its signed distance from E (where the base X axis
// meets the surface), and the platform angle is phi2 = alpha + beta + pi.
// All pose and residual arithmetic is generic over the scalar so complex
// roots can be checked by substitution.

#include "cpm/geometry.hpp"
#include "cpm/numeric.hpp"

#include <array>
#include <cmath>
#include <complex>

namespace cpm {

/// Given quantities of the mechanism. Angles in radians, lengths in m,
/// stiffness in N/m.
struct MechanismParams {
  Point2 P_M{0, 0};        // a point on the surface (fixed frame)
  double alpha = 0;        // surface direction
  Point2 P_A1_in1{1, 0};   // A1 in base frame, on its X axis
  Point2 P_A2_in2{1, 0};   // A2 in top frame, on its X axis
  Point2 P_P_in2{0, 0};    // contact pin in top frame
  Point2 P_O1{0, 0};       // base frame origin (fixed frame)
  double phi1 = 0;         // base frame orientation
  std::array<double, 3> k{1, 1, 1};
  std::array<double, 3> L0{0, 0, 0};

  double d_O1A1() const { return std::abs(P_A1_in1.x()); }
  double d_O2A2() const { return std::abs(P_A2_in2.x()); }

  /// Throws ValidationError naming the offending field.
  void validate() const;
};

inline void MechanismParams::validate() const {
  auto fail = [](const std::string& what) { throw Error(ErrorCode::ValidationError, what); };
  auto finite = [](const Point2& p) { return std::isfinite(p.x()) && std::isfinite(p.y()); };
  if (!finite(P_M) || !finite(P_A1_in1) || !finite(P_A2_in2) || !finite(P_P_in2) ||
      !finite(P_O1) || !std::isfinite(alpha) || !std::isfinite(phi1)) {
    fail("non-finite coordinate or angle");
  }
  for (int i = 0; i < 3; ++i) {
    if (!(k[i] > 0) || !std::isfinite(k[i])) fail("k" + std::to_string(i + 1) + " must be > 0");
    if (!(L0[i] >= 0) || !std::isfinite(L0[i])) fail("L0" + std::to_string(i + 1) + " must be >= 0");
  }
  if (P_A1_in1.y() != 0) fail("P_A1_in1 must lie on the base X axis (y = 0)");
  if (P_A2_in2.y() != 0) fail("P_A2_in2 must lie on the top X axis (y = 0)");
  if (!(d_O1A1() > 0)) fail("P_A1_in1: d_O1A1 must be > 0");
  if (!(d_O2A2() > 0)) fail("P_A2_in2: d_O2A2 must be > 0");
}

/// Fixed-frame quantities derived once from MechanismParams, in real type T.
template <typename T>
struct Anchors {
  Vec2<T> O1;
  Vec2<T> A1;
  Vec2<T> E;
  T alpha;
  Vec2<T> surface_dir;  // (cos alpha, sin alpha)
  Vec2<T> P_in2;
  T a2x;                // signed X of A2 in the top frame
  std::array<T, 3> k;
  std::array<T, 3> L0;
  T length_scale;       // characteristic mechanism length, for residual scaling
};

template <typename T>
Anchors<T> make_anchors(const MechanismParams& p) {
  using std::abs;
  using std::cos;
  using std::sin;
  Anchors<T> a;
  const T phi1 = T(p.phi1);
  const T alpha = T(p.alpha);
  a.O1 = vec_cast<T>(p.P_O1);
  a.A1 = make_transform(phi1, a.O1).apply(vec_cast<T>(p.P_A1_in1));
  const Line2<T> base = line_through(a.O1, phi1);
  const Line2<T> surface = line_through(vec_cast<T>(p.P_M), alpha);
  a.E = intersect_lines(base, surface);
  a.alpha = alpha;
  a.surface_dir = Vec2<T>(cos(alpha), sin(alpha));
  a.P_in2 = vec_cast<T>(p.P_P_in2);
  a.a2x = T(p.P_A2_in2.x());
  for (int i = 0; i < 3; ++i) {
    a.k[i] = T(p.k[i]);
    a.L0[i] = T(p.L0[i]);
  }
  const T d_pin = a.P_in2.norm();
  a.length_scale = std::max({T((a.E - a.O1).norm()), T(abs(a.a2x)), T(p.d_O1A1()), d_pin, T(1)});
  return a;
}

template <typename S>
struct ContactPose {
  S L;
  S beta;
  S phi2;
  Vec2<S> P_E;
  Vec2<S> P_P;
  Vec2<S> P_O2;
  Vec2<S> P_A2;
};

/// Pose from L and (cos beta, sin beta). Used directly with the tan-half
/// parametrization, where cos/sin are rational in x and beta itself is not
/// needed.
template <typename S, typename T>
ContactPose<S> pose_from_trig(const S& L, const S& cos_beta, const S& sin_beta,
                              const Anchors<T>& a, const S& beta = S(0)) {
  const S ca = S(a.surface_dir.x());
  const S sa = S(a.surface_dir.y());
  // rotation by alpha + beta
  const S c = ca * cos_beta - sa * sin_beta;
  const S s = sa * cos_beta + ca * sin_beta;

  ContactPose<S> pose;
  pose.L = L;
  pose.beta = beta;
  pose.phi2 = S(a.alpha) + beta + S(pi_v<T>());
  pose.P_E = vec_cast<S>(a.E);
  pose.P_P = Vec2<S>(pose.P_E.x() + L * ca, pose.P_E.y() + L * sa);
  const S px = S(a.P_in2.x());
  const S py = S(a.P_in2.y());
  // frame 2 sits at phi2 = alpha + beta + pi, so R(phi2) = -R(alpha + beta) and
  // P_P = P_O2 + R(phi2) P_in2 gives P_O2 = P_P + R(alpha + beta) P_in2.
  pose.P_O2 = Vec2<S>(pose.P_P.x() + c * px - s * py, pose.P_P.y() + s * px + c * py);
  const S a2x = S(a.a2x);
  pose.P_A2 = Vec2<S>(pose.P_O2.x() - a2x * c, pose.P_O2.y() - a2x * s);
  return pose;
}

template <typename S, typename T>
ContactPose<S> pose_from(const S& L, const S& beta, const Anchors<T>& a) {
  using std::cos;
  using std::sin;
  return pose_from_trig(L, S(cos(beta)), S(sin(beta)), a, beta);
}

/// Top-platform frame of a pose: rotation phi2 about P_O2.
inline Transform2H<double> top_frame(const ContactPose<double>& pose) {
  return make_transform(pose.phi2, pose.P_O2);
}

inline constexpr double kZeroSpringLength = 1e-12;

template <typename S>
struct SpringState {
  std::array<S, 3> length;
  std::array<Vec2<S>, 3> dir;
  std::array<S, 3> force;
};

/// Spring end vectors head − tail: O1→O2, O1→A2, A1→A2.
template <typename S, typename T>
std::array<Vec2<S>, 3> spring_vectors(const ContactPose<S>& pose, const Anchors<T>& a) {
  const Vec2<S> O1 = vec_cast<S>(a.O1);
  const Vec2<S> A1 = vec_cast<S>(a.A1);
  return {Vec2<S>(pose.P_O2 - O1), Vec2<S>(pose.P_A2 - O1), Vec2<S>(pose.P_A2 - A1)};
}

/// Spring lengths use the principal square root of the squared distance, which
/// keeps the construction analytic for complex poses.
template <typename S, typename T>
SpringState<S> spring_state(const ContactPose<S>& pose, const Anchors<T>& a) {
  using std::abs;
  using std::sqrt;
  const auto v = spring_vectors(pose, a);
  SpringState<S> st;
  for (int i = 0; i < 3; ++i) {
    st.length[i] = sqrt(dot2(v[i], v[i]));
    if (abs(st.length[i]) < kZeroSpringLength) {
      throw Error(ErrorCode::ZeroLengthSpring,
                  "spring " + std::to_string(i + 1) + " has zero length; direction undefined");
    }
    st.dir[i] = v[i] / st.length[i];
    st.force[i] = S(a.k[i]) * (st.length[i] - S(a.L0[i]));
  }
  return st;
}

/// (f1 S1 + f2 S2 + f3 S3) · (cos alpha, sin alpha).
template <typename S, typename T>
S force_projection_residual(const ContactPose<S>& pose, const Anchors<T>& a) {
  const SpringState<S> st = spring_state(pose, a);
  const Vec2<S> u = vec_cast<S>(a.surface_dir);
  S sum(0);
  for (int i = 0; i < 3; ++i) sum += st.force[i] * dot2(st.dir[i], u);
  return sum;
}

/// z part of Σ (anchor − P) × f_i S_i with anchors O1, O1, A1.
template <typename S, typename T>
S moment_residual(const ContactPose<S>& pose, const Anchors<T>& a) {
  const SpringState<S> st = spring_state(pose, a);
  const std::array<Vec2<S>, 3> anchor{vec_cast<S>(a.O1), vec_cast<S>(a.O1), vec_cast<S>(a.A1)};
  S sum(0);
  for (int i = 0; i < 3; ++i) {
    const Vec2<S> arm = anchor[i] - pose.P_P;
    const Vec2<S> f = st.dir[i] * st.force[i];
    sum += cross2(arm, f);
  }
  return sum;
}

/// Normal component of the surface reaction on the pin, positive when the
/// surface pushes (toward the platform side). Negative means it would have to
/// pull.
inline double contact_normal_force(const ContactPose<double>& pose, const Anchors<double>& a) {
  const SpringState<double> st = spring_state(pose, a);
  Vec2<double> reaction = Vec2<double>::Zero();
  for (int i = 0; i < 3; ++i) reaction += st.force[i] * st.dir[i];
  Vec2<double> n(a.surface_dir.y(), -a.surface_dir.x());
  if ((pose.P_O2 - pose.P_P).dot(n) < 0) n = -n;
  return reaction.dot(n);
}

}  // namespace cpm
