#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <random>

#include "shapes.hpp"
#include "wdc/errors.hpp"
#include "wdc/singular.hpp"

using namespace wdc;
using shapes::A;

namespace {

MaxAffine sup_pieces() { return MaxAffine({A({1, 0}), A({-1, 0}), A({0, 1}), A({0, -1})}); }

// Active-gradient diameter straight from the pieces.
double brute_diam(const MaxAffine& g, P2 p) {
  double top = -1e300;
  for (const auto& m : g.pieces()) top = std::max(top, m.a[0] * p.x + m.a[1] * p.y + m.b);
  std::vector<P2> act;
  for (const auto& m : g.pieces())
    if (m.a[0] * p.x + m.a[1] * p.y + m.b >= top - 1e-9) act.push_back({m.a[0], m.a[1]});
  double d = 0;
  for (auto a : act)
    for (auto b : act) d = std::max(d, norm(a - b));
  return d;
}

bool has_segment(const SegmentCover& c, P2 a, P2 b, double tol) {
  for (const auto& s : c.segments)
    if ((norm(s.p - a) <= tol && norm(s.q - b) <= tol) || (norm(s.p - b) <= tol && norm(s.q - a) <= tol)) return true;
  return false;
}

}  // namespace

TEST_CASE("sup norm singular set") {
  const Box2 box = Box2::square(1.0);
  auto c = singular_set_pwa_2d(sup_pieces(), 1.0, box);
  REQUIRE(c.segments.size() == 3);
  CHECK(has_segment(c, {-1, -1}, {1, 1}, 1e-12));
  CHECK(has_segment(c, {-1, 1}, {1, -1}, 1e-12));
  CHECK(has_segment(c, {0, 0}, {0, 0}, 1e-12));
  CHECK(c.clipped);
  CHECK(c.verified == 9);
  CHECK(singular_set_pwa_2d(sup_pieces(), 2.0, box).segments.empty());
  CHECK(singular_set_pwa_2d(MaxAffine({A({1, 2}, 3)}), 1e-3, box).segments.empty());
}

TEST_CASE("singular set against brute force") {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> nd;
  std::uniform_real_distribution<double> ud(-2, 2);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<AffineMap> ps;
    for (int k = 0; k < 6; ++k) ps.push_back(A({nd(rng), nd(rng)}, 0.3 * nd(rng)));
    MaxAffine g(ps);
    const double eps = 1.0;
    const Box2 box = Box2::square(2.0);
    auto c = singular_set_pwa_2d(g, eps, box);
    CHECK(c.segments.size() <= 15 + 15);
    for (const auto& s : c.segments)
      for (double t : {0.1, 0.5, 0.9}) CHECK(brute_diam(g, s.p + t * (s.q - s.p)) > eps);
    // Off the cover the predicate fails.
    for (int k = 0; k < 2000; ++k) {
      const P2 p{ud(rng), ud(rng)};
      if (distance_to_cover(c, p) > 1e-6) CHECK(brute_diam(g, p) <= eps + 1e-9);
    }
  }
}

TEST_CASE("zero sets with large subgradients") {
  const Box2 box = Box2::square(1.0);
  auto c = zero_set_large_subdiff_2d(shapes::sup_dist(0.0), 0.5, box);
  REQUIRE(c.segments.size() == 1);
  CHECK(c.segments[0].degenerate(1e-12));
  CHECK(norm(c.segments[0].p) <= 1e-12);

  auto g = MaxAffine({A({1, 0}), A({-1, 0}), A({0, 1})});
  CHECK(zero_set_large_subdiff_2d(DCFunction(g, g), 0.1, box).segments.empty());

  // max(y - |x|, 0) = max(y, x, -x) - max(x, -x)
  DCFunction roof(MaxAffine({A({0, 1}), A({1, 0}), A({-1, 0})}), MaxAffine({A({1, 0}), A({-1, 0})}));
  auto r = zero_set_large_subdiff_2d(roof, 1.0, box);
  int rays = 0;
  for (const auto& s : r.segments)
    if (!s.degenerate(1e-9)) {
      ++rays;
      CHECK(std::abs(std::abs(s.p.x) - s.p.y) <= 1e-12);
      CHECK(std::abs(std::abs(s.q.x) - s.q.y) <= 1e-12);
      CHECK(std::max(norm(s.p), norm(s.q)) == doctest::Approx(std::sqrt(2.0)));
    }
  CHECK(rays == 2);
  CHECK(distance_to_cover(r, {-0.5, -0.5}) > 0.1);
  CHECK(zero_set_large_subdiff_2d(roof, 1.5, box).segments.empty());
}

TEST_CASE("boundary covers of auras") {
  auto sq = boundary_cover_2d(shapes::square(), 0.5);
  REQUIRE(sq.cover.segments.size() == 4);
  for (P2 a : {P2{1, 1}, P2{-1, 1}, P2{-1, -1}, P2{1, -1}}) {
    const P2 b{-a.y, a.x};
    CHECK(has_segment(sq.cover, a, b, 1e-9));
  }
  CHECK(sq.traced);
  CHECK(sq.trace_points > 0);
  CHECK(sq.trace_distance <= 10 * sq.trace_tol);

  auto two = boundary_cover_2d(shapes::two_squares(), 0.5);
  CHECK(two.cover.segments.size() == 8);
  int left = 0;
  for (const auto& s : two.cover.segments) left += s.mid().x < 0;
  CHECK(left == 4);

  auto pt = boundary_cover_2d(shapes::l1(), 0.5);
  REQUIRE(pt.cover.segments.size() == 1);
  CHECK(norm(pt.cover.segments[0].p) <= 1e-12);

  // Flat bottom: not an aura.
  auto flat = wdc::max(shapes::sup_dist(1.0), DCFunction::zero(2));
  auto bad = wdc::min(flat, DCFunction::affine(A({0, 0}, 0.25)));
  CHECK_THROWS_AS(boundary_cover_2d(bad, 0.5, Box2::square(3.0)), Error);
}

TEST_CASE("export") {
  auto c = singular_set_pwa_2d(sup_pieces(), 1.0, Box2::square(1.0));
  CHECK(cover_csv(c).rfind("segment,x0,y0,x1,y1,provenance\n", 0) == 0);
  CHECK(cover_svg(c).find("<circle") != std::string::npos);
  CHECK_THROWS_AS(singular_set_pwa_2d(sup_pieces(), 0.0, Box2::square(1.0)), Error);
}
