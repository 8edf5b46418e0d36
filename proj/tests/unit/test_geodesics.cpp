#include <doctest.h>

#include "helpers.hpp"

using namespace lktest;

TEST_CASE("flat geodesics are straight lines") {
  FlatModel m(1);
  const auto res = integrate_geodesic(m, pt({0.0}), Vec::Ones(1), 1.0, 100);
  CHECK(std::abs(res.points.back().coords[0] - 1.0) <= 1e-14);
  CHECK(std::abs(res.points[50].coords[0] - 0.5) <= 1e-14);
}

TEST_CASE("p1 geodesic from the origin reaches fs-distance T at unit speed") {
  FubiniStudyModel m(1);
  const ChartPoint z0 = pt({0.0});
  // h₁₁(0) = 1, so v = 1 is unit speed.
  const auto res = integrate_geodesic(m, z0, Vec::Ones(1), kPi / 4.0, 1000);
  const double dist = fs_distance(m, z0, res.points.back());
  CHECK(dist == doctest::Approx(kPi / 4.0).epsilon(1e-9));
  // closed-form chart image is tan(t)
  CHECK(std::abs(res.points.back().coords[0] - std::tan(kPi / 4.0)) <= 1e-9);
}

TEST_CASE("p1 geodesic reaches the antipode in chart 1 at T = pi/2") {
  FubiniStudyModel m(1);
  const auto res = integrate_geodesic(m, pt({0.0}), Vec::Ones(1), kPi / 2.0, 1000);
  const ChartPoint end = res.points.back();
  CHECK(end.chart_id == 1);
  CHECK(std::abs(end.coords[0]) <= 1e-9);
  // and the distance from the start is the diameter
  CHECK(fs_distance(m, pt({0.0}), end) == doctest::Approx(kPi / 2.0).epsilon(1e-9));
}

TEST_CASE("geodesic speed is conserved across steps and chart switches") {
  FubiniStudyModel m(1);
  ChartPoint z = pt({0.0});
  Vec v = Vec::Ones(1);
  const double speed0 = h_inner(m, {z, v}, {z, v}).real();
  const int steps = 1000;
  const double T = 2.2;  // crosses the chart switch at |z| = 2
  double worst = 0.0;
  bool switched = false;
  for (int i = 0; i < steps; ++i) {
    const auto res = integrate_geodesic(m, z, v, T / steps, 1);
    z = res.final_velocity.base;
    v = res.final_velocity.components;
    switched = switched || z.chart_id == 1;
    worst = std::max(worst, std::abs(h_inner(m, {z, v}, {z, v}).real() - speed0));
  }
  CHECK(switched);
  CHECK(worst <= 1e-8);
}

TEST_CASE("integrate_geodesic input validation") {
  FlatModel m(1);
  CHECK_THROWS_AS(integrate_geodesic(m, pt({0.0}), Vec::Ones(1), 1.0, 0), std::invalid_argument);
  CHECK_THROWS_AS(integrate_geodesic(m, pt({0.0}), Vec::Ones(2), 1.0, 4), std::invalid_argument);
}
