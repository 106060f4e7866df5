#include "cpm/free_pose.hpp"

#include <algorithm>
#include <cmath>

namespace cpm {

namespace {

constexpr double kTangency = 1e-12;

[[noreturn]] void not_assemblable(const std::string& what) {
  throw Error(ErrorCode::NotAssemblable, what);
}

}  // namespace

Point2 solve_a2(double L02, double L03, double d_O1A1) {
  if (!(d_O1A1 > 0)) not_assemblable("d_O1A1 must be > 0");
  const double slack = 1e-12 * std::max({L02, L03, d_O1A1});
  if (d_O1A1 > L02 + L03 + slack || d_O1A1 < std::abs(L02 - L03) - slack) {
    not_assemblable("springs 2 and 3 cannot reach A2 (triangle inequality fails)");
  }
  const double ax = (L02 * L02 - L03 * L03 + d_O1A1 * d_O1A1) / (2 * d_O1A1);
  const double ay2 = L02 * L02 - ax * ax;
  return Point2(ax, std::sqrt(std::max(ay2, 0.0)));
}

double dialytic_4x4_residual(double A, double B, double C) {
  return -B * B + 2 * B * C - A * A * C - C * C;
}

DialyticCoefficients dialytic_coefficients(const Point2& a2, double L01, double d_O2A2,
                                           double o2x) {
  const double l02_sq = a2.squaredNorm();
  return {-2 * a2.y(), o2x * o2x - 2 * o2x * a2.x() + l02_sq - d_O2A2 * d_O2A2,
          o2x * o2x - L01 * L01};
}

std::vector<O2Candidate> solve_o2(const Point2& a2, double L01, double d_O2A2) {
  const double dist = a2.norm();
  const double slack = 1e-12 * std::max({dist, L01, d_O2A2, 1.0});
  if (dist > L01 + d_O2A2 + slack || dist < std::abs(L01 - d_O2A2) - slack || dist == 0) {
    not_assemblable("circles |O2| = L01 and |O2 - A2| = d_O2A2 do not intersect");
  }

  const double K = dist * dist + L01 * L01 - d_O2A2 * d_O2A2;
  std::vector<Point2> pts;

  if (std::abs(a2.y()) > 1e-12 * dist) {
    // o_y from subtracting the circles, then the quadratic in o_x
    const double D = 4 * dist * dist;
    const double E = -4 * a2.x() * K;
    const double F = K * K - 4 * a2.y() * a2.y() * L01 * L01;
    double disc = E * E - 4 * D * F;
    const double disc_scale = E * E + std::abs(4 * D * F);
    if (disc < 0) {
      if (disc < -kTangency * disc_scale) not_assemblable("negative discriminant");
      disc = 0;
    }
    const double root = std::sqrt(disc);
    auto oy_of = [&](double ox) { return (K - 2 * a2.x() * ox) / (2 * a2.y()); };
    if (disc <= kTangency * disc_scale) {
      const double ox = -E / (2 * D);
      pts.emplace_back(ox, oy_of(ox));
    } else {
      // numerically stable pair
      const double q = -0.5 * (E + std::copysign(root, E));
      const double ox1 = q / D;
      const double ox2 = q != 0 ? F / q : -ox1;
      pts.emplace_back(ox1, oy_of(ox1));
      pts.emplace_back(ox2, oy_of(ox2));
    }
  } else {
    // A2 on the base X axis: radical line is vertical
    const double ox = K / (2 * a2.x());
    double h2 = L01 * L01 - ox * ox;
    if (h2 < 0) {
      if (h2 < -kTangency * std::max(L01 * L01, 1.0)) not_assemblable("negative discriminant");
      h2 = 0;
    }
    const double h = std::sqrt(h2);
    pts.emplace_back(ox, h);
    if (h > kTangency * std::max(L01, 1.0)) pts.emplace_back(ox, -h);
  }

  std::sort(pts.begin(), pts.end(), [](const Point2& a, const Point2& b) { return a.y() > b.y(); });
  std::vector<O2Candidate> out;
  for (const Point2& o : pts) {
    out.push_back({o, std::atan2(a2.y() - o.y(), a2.x() - o.x())});
  }
  return out;
}

FreePoseResult solve_free_pose(const MechanismParams& params) {
  FreePoseResult r;
  r.A2_in1 = solve_a2(params.L0[1], params.L0[2], params.d_O1A1());
  if (params.P_A1_in1.x() < 0) r.A2_in1.x() = -r.A2_in1.x();
  r.candidates = solve_o2(r.A2_in1, params.L0[0], params.d_O2A2());
  if (params.P_A2_in2.x() < 0) {
    for (auto& c : r.candidates) c.phi2_in1 += std::numbers::pi;
  }
  return r;
}

Point2 free_point_p_fixed(const MechanismParams& params, int candidate) {
  const FreePoseResult fp = solve_free_pose(params);
  if (candidate < 0 || candidate >= static_cast<int>(fp.candidates.size())) {
    throw Error(ErrorCode::ValidationError,
                "o2_candidate index " + std::to_string(candidate) + " out of range (" +
                    std::to_string(fp.candidates.size()) + " candidates)");
  }
  const O2Candidate& c = fp.candidates[candidate];
  const auto frame1 = make_transform(params.phi1, params.P_O1);
  const auto frame2 = make_transform(c.phi2_in1, c.O2_in1);
  return compose(frame1, frame2).apply(params.P_P_in2);
}

}  // namespace cpm
