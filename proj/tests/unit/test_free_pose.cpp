#include "cpm/free_pose.hpp"

#include "../support.hpp"

#include <doctest.h>

#include <random>

using namespace cpm;

TEST_CASE("A2 from its two circles") {
  const Point2 a = solve_a2(2, 3.5, 5.5);
  CHECK(a.x() == doctest::Approx(2));
  CHECK(std::abs(a.y()) < 1e-7);

  const Point2 b = solve_a2(3, 4, 5);
  CHECK(b.x() == doctest::Approx(1.8));
  CHECK(b.y() == doctest::Approx(2.4));
  CHECK(b.norm() == doctest::Approx(3));
  CHECK((b - Point2(5, 0)).norm() == doctest::Approx(4));

  CHECK_THROWS_WITH_AS(solve_a2(0, 0, 5.5), doctest::Contains("NotAssemblable"), Error);
  CHECK_THROWS_AS(solve_a2(1, 1, 5), Error);
}

TEST_CASE("O2 from its two circles") {
  const auto t = solve_o2({2, 0}, 1, 1);
  REQUIRE(t.size() == 1);
  CHECK((t[0].O2_in1 - Point2(1, 0)).norm() < 1e-7);

  const Point2 a2(1.8, 2.4);
  const auto two = solve_o2(a2, 3, 3);
  REQUIRE(two.size() == 2);
  CHECK(two[0].O2_in1.y() >= two[1].O2_in1.y());
  for (const auto& c : two) {
    CHECK(c.O2_in1.norm() == doctest::Approx(3));
    CHECK((c.O2_in1 - a2).norm() == doctest::Approx(3));
    // orientation points from O2 to A2
    const Point2 d = a2 - c.O2_in1;
    CHECK(c.phi2_in1 == doctest::Approx(std::atan2(d.y(), d.x())));
    // equal radii: both on the perpendicular bisector
    CHECK(std::abs((c.O2_in1 - a2 / 2).dot(a2)) < 1e-9);
  }

  CHECK_THROWS_WITH_AS(solve_o2({10, 0}, 1, 1), doctest::Contains("NotAssemblable"), Error);
  CHECK_THROWS_AS(solve_o2({1, 0}, 5, 1), Error);
}

TEST_CASE("dialytic residual") {
  CHECK(dialytic_4x4_residual(0, 1, 1) == doctest::Approx(0));
  CHECK(dialytic_4x4_residual(2, 3, 1) == doctest::Approx(-8));

  // vanishes when both circle equations share a root in o_y
  const Point2 a2(1.8, 2.4);
  for (const auto& c : solve_o2(a2, 3, 3)) {
    const auto k = dialytic_coefficients(a2, 3, 3, c.O2_in1.x());
    const double scale = std::max({1.0, k.B * k.B, k.C * k.C, k.A * k.A * std::abs(k.C)});
    CHECK(std::abs(dialytic_4x4_residual(k.A, k.B, k.C)) <= 1e-9 * scale);
  }
}

TEST_CASE("pin position with every spring at its free length") {
  MechanismParams p;
  p.P_O1 = {0, 0};
  p.phi1 = 0;
  p.P_A1_in1 = {5, 0};
  p.P_A2_in2 = {3, 0};
  p.P_P_in2 = {1, 1};
  p.L0 = {0, 3, 2};
  p.P_M = {10, 0};
  p.alpha = std::numbers::pi / 2;
  const Point2 P = free_point_p_fixed(p);
  CHECK((P - Point2(1, 1)).norm() < 1e-6);

  // same pose carried by a moved base frame
  MechanismParams q = p;
  q.P_O1 = {2, -1};
  q.phi1 = 0.5;
  const Point2 Q = free_point_p_fixed(q);
  CHECK((Q - make_transform(0.5, Point2(2, -1)).apply({1, 1})).norm() < 1e-6);
}

TEST_CASE("zero free lengths cannot assemble") {
  CHECK_THROWS_WITH_AS(solve_free_pose(cpm::test::reference_params()),
                       doctest::Contains("NotAssemblable"), Error);
}

TEST_CASE("free pose meets every free length") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(0, 1);
  for (int i = 0; i < 50; ++i) {
    MechanismParams p = cpm::test::random_params(rng);
    const double d1 = p.d_O1A1();
    const Point2 a2(d1 * (u(rng) * 1.6 - 0.3), 0.5 + 4 * u(rng));
    const double L01 = 0.5 + 3 * u(rng);
    const double ang = 2 * std::numbers::pi * u(rng);
    const Point2 o2 = L01 * Point2(std::cos(ang), std::sin(ang));
    p.P_A2_in2 = {(o2 - a2).norm(), 0};
    p.L0 = {L01, a2.norm(), (a2 - Point2(d1, 0)).norm()};
    const FreePoseResult r = solve_free_pose(p);
    CHECK((r.A2_in1 - a2).norm() < 1e-9 * (1 + a2.norm()));
    for (const auto& c : r.candidates) {
      CHECK(std::abs(c.O2_in1.norm() - L01) < 1e-9);
      CHECK(std::abs((c.O2_in1 - r.A2_in1).norm() - p.d_O2A2()) < 1e-9);
    }
    bool found = false;
    for (const auto& c : r.candidates) found |= (c.O2_in1 - o2).norm() < 1e-7;
    CHECK(found);
  }
}
