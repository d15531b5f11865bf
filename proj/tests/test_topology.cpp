#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>

#include "shapes.hpp"
#include "wdc/errors.hpp"
#include "wdc/topology.hpp"

using namespace wdc;

namespace {

double signed_area(const std::vector<P2>& loop) {
  double a = 0;
  for (std::size_t k = 0; k + 1 < loop.size(); ++k) a += cross(loop[k], loop[k + 1]);
  return 0.5 * a;
}

}  // namespace

TEST_CASE("level loops of the sup norm") {
  auto f = shapes::sup_dist(1.0);
  auto ll = level_loops_2d(f, 0.25, 0.05);
  REQUIRE(ll.loops.size() == 1);
  const auto& loop = ll.loops[0];
  CHECK(loop.front().x == loop.back().x);
  CHECK(loop.front().y == loop.back().y);
  for (const auto& p : loop) CHECK(std::abs(std::max(std::abs(p.x), std::abs(p.y)) - 1.25) <= 1e-8);
  CHECK(signed_area(loop) > 0);
  // Inscribed polygon of the 2.5 x 2.5 square loses at most the corner triangles.
  CHECK(signed_area(loop) == doctest::Approx(6.25).epsilon(0.01));
}

TEST_CASE("annulus loops and orientation") {
  auto f = shapes::annulus();
  auto ll = level_loops_2d(f, 0.25, 0.05);
  REQUIRE(ll.loops.size() == 2);
  int outer = 0, inner = 0;
  for (const auto& loop : ll.loops) {
    const double a = signed_area(loop);
    const double target = a > 0 ? 2.25 : 0.75;
    (a > 0 ? outer : inner)++;
    for (const auto& p : loop) CHECK(std::abs(std::abs(p.x) + std::abs(p.y) - target) <= 1e-8);
    const double w = loop_winding(f, loop);
    CHECK(w == doctest::Approx(a > 0 ? 1.0 : -1.0).epsilon(1e-9));
    auto rev = loop;
    std::reverse(rev.begin(), rev.end());
    CHECK(loop_winding(f, rev) == doctest::Approx(-w).epsilon(1e-9));
  }
  CHECK(outer == 1);
  CHECK(inner == 1);
}

TEST_CASE("empty level") {
  auto ll = level_loops_2d(shapes::sup_dist(1.0), -1.5, 0.05);
  CHECK(ll.loops.empty());
  CHECK(ll.note == "empty level set");
  CHECK(euler_degree_2d(shapes::sup_dist(1.0), -1.5, 0.05).chi == 0);
  CHECK(euler_cubical(shapes::sup_dist(1.0), -1.5, 0.05).chi == 0);
}

TEST_CASE("degree agrees with the cubical oracle") {
  for (const auto& s : shapes::euler_suite()) {
    CAPTURE(s.name);
    for (double r : s.levels)
      for (double grid : {0.05, 0.1}) {
        CAPTURE(r);
        CAPTURE(grid);
        auto deg = euler_degree_2d(s.f, r, grid);
        auto cub = euler_cubical(s.f, r, grid);
        CHECK(deg.chi == s.chi);
        CHECK(cub.chi == s.chi);
        for (double res : deg.residual) CHECK(res < 1e-6);
        CHECK(cub.per_loop[0] - cub.per_loop[1] + cub.per_loop[2] == cub.chi);
      }
  }
}

TEST_CASE("grid halving keeps chi") {
  auto f = shapes::two_holes();
  CHECK(euler_degree_2d(f, 0.2, 0.1).chi == euler_degree_2d(f, 0.2, 0.05).chi);
  CHECK(euler_cubical(f, 0.2, 0.05).chi == euler_cubical(f, 0.2, 0.025).chi);
}

TEST_CASE("errors") {
  auto cone = DCFunction::convex(MaxAffine({shapes::A({1, 0}), shapes::A({-1, 0})}));
  CHECK_THROWS_AS(euler_cubical(cone, 0.5, 0.1), Error);
  CHECK_THROWS_AS(level_loops_2d(shapes::square(), 0.2, 0.0), Error);
  auto f3 = DCFunction::zero(3);
  CHECK_THROWS_AS(euler_cubical(f3, 0.0, 0.1), Error);
}

TEST_CASE("export") {
  auto ll = level_loops_2d(shapes::sup_dist(1.0), 0.25, 0.5);
  CHECK(loops_csv(ll).rfind("loop,k,x,y\n0,0,", 0) == 0);
  CHECK(loops_svg(ll).find("<polygon") != std::string::npos);
}
