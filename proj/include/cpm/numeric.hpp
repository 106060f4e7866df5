#pragma once

#include <boost/multiprecision/float128.hpp>
#include <boost/multiprecision/eigen.hpp>
#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <type_traits>

namespace cpm {

/// Quad precision used where double loses the resultant coefficients.
using Wide = boost::multiprecision::float128;
using Complex = std::complex<double>;
using WideComplex = std::complex<Wide>;

template <typename Scalar>
using Vec2 = Eigen::Matrix<Scalar, 2, 1>;

using Point2 = Vec2<double>;

template <typename T>
struct RealOf {
  using type = T;
};
template <typename T>
struct RealOf<std::complex<T>> {
  using type = T;
};
template <typename T>
using real_of_t = typename RealOf<T>::type;

template <typename T>
inline constexpr bool is_complex_v = false;
template <typename T>
inline constexpr bool is_complex_v<std::complex<T>> = true;

enum class ErrorCode {
  ParallelLines,
  OriginOnPlane,
  ZeroLengthSpring,
  NotAssemblable,
  NonZeroFreeLength,
  WrongFreeLengthPattern,
  DegenerateQuartic,
  ZeroPolynomial,
  NonConvergence,
  InterpolationMismatch,
  ProbeSingularity,
  ParseError,
  ValidationError,
  IoError,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code), detail_(what) {}

  ErrorCode code() const noexcept { return code_; }
  const std::string& detail() const noexcept { return detail_; }

  /// Same error with a stage name prepended to the message.
  Error in_stage(const std::string& stage) const { return Error(code_, stage + ": " + detail_); }

 private:
  ErrorCode code_;
  std::string detail_;
};

inline const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::ParallelLines: return "ParallelLines";
    case ErrorCode::OriginOnPlane: return "OriginOnPlane";
    case ErrorCode::ZeroLengthSpring: return "ZeroLengthSpring";
    case ErrorCode::NotAssemblable: return "NotAssemblable";
    case ErrorCode::NonZeroFreeLength: return "NonZeroFreeLength";
    case ErrorCode::WrongFreeLengthPattern: return "WrongFreeLengthPattern";
    case ErrorCode::DegenerateQuartic: return "DegenerateQuartic";
    case ErrorCode::ZeroPolynomial: return "ZeroPolynomial";
    case ErrorCode::NonConvergence: return "NonConvergence";
    case ErrorCode::InterpolationMismatch: return "InterpolationMismatch";
    case ErrorCode::ProbeSingularity: return "ProbeSingularity";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ValidationError: return "ValidationError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

inline double deg_to_rad(double deg) { return deg * std::numbers::pi / 180.0; }

/// Lossy narrowing of any supported scalar to double / complex<double>.
inline double to_double(double v) { return v; }
inline double to_double(const Wide& v) { return v.convert_to<double>(); }
inline Complex to_double(const Complex& v) { return v; }
inline Complex to_double(const WideComplex& v) {
  return {v.real().convert_to<double>(), v.imag().convert_to<double>()};
}

template <typename Real>
Real pi_v() {
  if constexpr (std::is_same_v<Real, Wide>) {
    static const Wide pi = acos(Wide(-1));
    return pi;
  } else {
    return std::numbers::pi_v<Real>;
  }
}

template <typename Real>
Real epsilon_v() {
  return std::numeric_limits<Real>::epsilon();
}

/// 2D cross product (z component).
template <typename Scalar>
Scalar cross2(const Vec2<Scalar>& a, const Vec2<Scalar>& b) {
  return a.x() * b.y() - a.y() * b.x();
}

/// Plain bilinear dot product; no conjugation, so it stays polynomial over complex inputs.
template <typename Scalar>
Scalar dot2(const Vec2<Scalar>& a, const Vec2<Scalar>& b) {
  return a.x() * b.x() + a.y() * b.y();
}

template <typename To, typename From>
Vec2<To> vec_cast(const Vec2<From>& v) {
  return Vec2<To>(To(v.x()), To(v.y()));
}

}  // namespace cpm
