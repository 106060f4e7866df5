#pragma once

// Pose of the top platform with every spring at its free length: two circle
// intersections in base-frame coordinates, then the pin P in the fixed frame.

#include "cpm/geometry.hpp"
#include "cpm/mechanism.hpp"

#include <vector>

namespace cpm {

struct O2Candidate {
  Point2 O2_in1;
  double phi2_in1;  // orientation of the top X axis relative to frame 1
};

struct FreePoseResult {
  Point2 A2_in1;
  std::vector<O2Candidate> candidates;  // sorted by descending y
};

/// A2 on circles |A2| = L02 and |A2 − (d, 0)| = L03, upper branch.
Point2 solve_a2(double L02, double L03, double d_O1A1);

/// O2 on circles |O2| = L01 and |O2 − a2| = d_O2A2. One candidate when tangent.
std::vector<O2Candidate> solve_o2(const Point2& a2, double L01, double d_O2A2);

/// −B² + 2BC − A²C − C², the expanded 4x4 determinant of the dialytic system
/// in (o_y³, o_y², o_y, 1).
double dialytic_4x4_residual(double A, double B, double C);

/// For fixed o_x the two circles read o_y² + A·o_y + B = 0 and o_y² + C = 0.
struct DialyticCoefficients {
  double A, B, C;
};
DialyticCoefficients dialytic_coefficients(const Point2& a2, double L01, double d_O2A2,
                                           double o2x);

FreePoseResult solve_free_pose(const MechanismParams& params);

/// Fixed-frame pin position for the chosen O2 candidate (0 = larger o2y).
Point2 free_point_p_fixed(const MechanismParams& params, int candidate = 0);

}  // namespace cpm
