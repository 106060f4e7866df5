#pragma once

// Planar points, rigid transforms, lines and the surface plane used for
// contact detection. Everything is templated on the real type so the same
// construction can run in double or in Wide.

#include "cpm/numeric.hpp"

#include <cmath>

namespace cpm {

/// Rotation by `angle` followed by translation to `origin`: the 3x3
/// homogeneous matrix [R t; 0 1].
template <typename T>
struct Transform2H {
  T angle{0};
  Vec2<T> origin{Vec2<T>::Zero()};

  Eigen::Matrix<T, 2, 2> rotation() const {
    using std::cos;
    using std::sin;
    Eigen::Matrix<T, 2, 2> r;
    r << cos(angle), -sin(angle), sin(angle), cos(angle);
    return r;
  }

  Eigen::Matrix<T, 3, 3> matrix() const {
    Eigen::Matrix<T, 3, 3> m = Eigen::Matrix<T, 3, 3>::Identity();
    m.template topLeftCorner<2, 2>() = rotation();
    m.template topRightCorner<2, 1>() = origin;
    return m;
  }

  Vec2<T> apply(const Vec2<T>& p) const { return rotation() * p + origin; }
};

template <typename T>
Transform2H<T> make_transform(T angle, const Vec2<T>& origin) {
  return Transform2H<T>{angle, origin};
}

/// outer ∘ inner: apply(compose(a, b), p) == a.apply(b.apply(p)).
template <typename T>
Transform2H<T> compose(const Transform2H<T>& outer, const Transform2H<T>& inner) {
  return Transform2H<T>{outer.angle + inner.angle, outer.apply(inner.origin)};
}

/// Planar line as (unit direction, moment) where the moment is the z part of
/// point × direction.
template <typename T>
struct Line2 {
  Vec2<T> direction;
  T moment;
};

template <typename T>
Line2<T> line_through(const Vec2<T>& point, T angle) {
  using std::cos;
  using std::sin;
  const T c = cos(angle);
  const T s = sin(angle);
  return Line2<T>{Vec2<T>(c, s), point.x() * s - point.y() * c};
}

inline constexpr double kParallelTolerance = 1e-9;
inline constexpr double kOnSurfaceTolerance = 1e-9;

/// Solves x·sinθ_i − y·cosθ_i = moment_i for both lines.
template <typename T>
Vec2<T> intersect_lines(const Line2<T>& l1, const Line2<T>& l2) {
  using std::abs;
  const T det = cross2(l1.direction, l2.direction);
  if (abs(det) <= T(kParallelTolerance)) {
    throw Error(ErrorCode::ParallelLines, "lines are parallel (|d1 x d2| <= 1e-9)");
  }
  // rows: [d.y, -d.x] · (x, y) = moment
  const T x = (l1.moment * (-l2.direction.x()) - l2.moment * (-l1.direction.x())) / det;
  const T y = (l1.direction.y() * l2.moment - l2.direction.y() * l1.moment) / det;
  return Vec2<T>(x, y);
}

/// Residual of the line equation; zero for points on the line.
template <typename T>
T line_residual(const Line2<T>& l, const Vec2<T>& p) {
  return p.x() * l.direction.y() - p.y() * l.direction.x() - l.moment;
}

template <typename T>
struct PlaneSpec {
  Vec2<T> normal;
  T offset;  // D0

  T evaluate(const Vec2<T>& p) const { return p.dot(normal) + offset; }
};

/// Surface through `point` at angle `alpha`; the normal is the direction
/// rotated by −π/2.
template <typename T>
PlaneSpec<T> make_plane(T alpha, const Vec2<T>& point) {
  using std::cos;
  using std::sin;
  const T a = alpha - pi_v<T>() / T(2);
  Vec2<T> n(cos(a), sin(a));
  return PlaneSpec<T>{n, -point.dot(n)};
}

enum class Contact { OnSurface, NoContact, InContact };

inline const char* to_string(Contact c) {
  switch (c) {
    case Contact::OnSurface: return "on_surface";
    case Contact::NoContact: return "no_contact";
    case Contact::InContact: return "in_contact";
  }
  return "unknown";
}

/// NoContact when p lies on the origin's side of the surface.
inline Contact classify_contact(const Point2& p, const PlaneSpec<double>& plane) {
  if (std::abs(plane.offset) <= kOnSurfaceTolerance) {
    throw Error(ErrorCode::OriginOnPlane, "surface passes through the fixed-frame origin");
  }
  const double v = plane.evaluate(p);
  if (std::abs(v) <= kOnSurfaceTolerance) return Contact::OnSurface;
  // origin evaluates to D0, so same side means same sign as D0
  if ((v > 0) == (plane.offset > 0)) return Contact::NoContact;
  return Contact::InContact;
}

}  // namespace cpm
