#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "wdc/aura.hpp"
#include "wdc/errors.hpp"
#include "wdc/polytope.hpp"

using namespace wdc;

namespace {

AffineMap A(Vec a, double b = 0.0) { return AffineMap{std::move(a), b}; }

VPolytope square(double half, P2 c = {}) {
  return VPolytope{{{c.x - half, c.y - half}, {c.x + half, c.y - half}, {c.x + half, c.y + half}, {c.x - half, c.y + half}}};
}

DCFunction abs1() { return DCFunction::convex(MaxAffine({A({1}), A({-1})})); }

// Distance from the origin to the segment [p, q].
double seg_dist(P2 p, P2 q) {
  const P2 d = q - p;
  const double t = std::clamp(-dot(p, d) / dot(d, d), 0.0, 1.0);
  return norm(p + t * d);
}

SamplingPlan local_box(double half) {
  SamplingPlan p;
  p.lo = {-half, -half};
  p.hi = {half, half};
  p.local = true;
  return p;
}

}  // namespace

TEST_CASE("polytope distance auras") {
  auto f = aura_distance_polytope(square(1.0));
  CHECK(f(Vec{2.0, 0.0}) == doctest::Approx(1.0));
  std::mt19937 rng(1);
  std::uniform_real_distribution<double> u(-3, 3);
  double worst = 0.0;
  for (int k = 0; k < 10000; ++k) {
    Vec x{u(rng), u(rng)};
    worst = std::max(worst, std::abs(f(x) - std::max(norm_inf(x) - 1.0, 0.0)));
  }
  CHECK(worst <= 1e-12);

  auto pt = aura_distance_polytope(VPolytope{{{0.0, 0.0}}});
  auto rep = check_weak_regularity(pt, 0.0, 0.5);
  CHECK(rep.margin == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));

  auto seg = aura_distance_polytope(VPolytope{{{0.0, 0.0}, {1.0, 0.0}}}, PolyNorm::L1);
  for (int k = 0; k < 10000; ++k) {
    const double x = u(rng), y = u(rng);
    const double ref = std::max({-x, x - 1.0, 0.0}) + std::abs(y);
    CHECK(seg(Vec{x, y}) == doctest::Approx(ref).epsilon(1e-12));
    const bool on = x >= 0.0 && x <= 1.0 && y == 0.0;
    CHECK((seg(Vec{x, y}) == 0.0) == on);
  }
  CHECK(seg(Vec{0.5, 0.0}) == 0.0);
  CHECK(check_weak_regularity(seg, 0.0, 0.5).margin >= 1.0 - 1e-12);
  CHECK_THROWS_AS(aura_distance_polytope(VPolytope{{Vec(4, 0.0)}}), Error);
}

TEST_CASE("hypograph aura") {
  auto F = aura_hypograph(abs1());
  CHECK(F(Vec{0.0, 1.0}) == 1.0);
  CHECK(F(Vec{0.0, -1.0}) == 0.0);
  auto s = subdiff(F, Vec{0.0, 1.0}, SubdiffMode::Clarke);
  CHECK(s.hull.vertices.size() == 2);
  CHECK(hull_excess(s.hull, VPolytope{{{1, 1}, {-1, 1}}}) <= 1e-12);
  CHECK(hull_excess(VPolytope{{{1, 1}, {-1, 1}}}, s.hull) <= 1e-12);
  std::mt19937 rng(2);
  std::uniform_real_distribution<double> u(-2, 2);
  int probes = 0;
  while (probes < 1000) {
    Vec p{u(rng), u(rng)};
    if (rng() % 4 == 0) p[0] = 0.0;  // land on the kink line too
    if (F(p) <= 0.0) continue;
    ++probes;
    for (const auto& v : subdiff(F, p, SubdiffMode::Clarke).hull.vertices) CHECK(v[1] == 1.0);
  }
}

TEST_CASE("degenerate sector aura") {
  auto zero = DCFunction::zero(1);
  auto G = aura_degenerate_sector(zero, zero, 0.0);
  CHECK(G(Vec{-1.0, 0.0}) == 1.0);
  CHECK(G(Vec{0.5, 0.0}) == 0.0);
  CHECK(G(Vec{0.5, 0.1}) > 0.0);
  auto rep = check_weak_regularity(G, 0.0, 0.3, local_box(1.0));
  CHECK(rep.margin >= 1.0 / std::sqrt(2.0) - 1e-9);

  auto x = DCFunction::affine(A({1}));
  CHECK_THROWS_AS(aura_degenerate_sector(zero, x, 0.0), Error);
  auto H = aura_degenerate_sector(zero, x, 0.0, false);
  CHECK(H(Vec{1.0, 0.5}) == doctest::Approx(0.0));
  CHECK(H(Vec{1.0, 2.0}) == doctest::Approx(1.0));
  CHECK(H(Vec{1.0, -1.0}) == doctest::Approx(1.0));
  CHECK_THROWS_AS(aura_degenerate_sector(x, zero, 0.0, false), Error);

  // Rotated copy follows the frame.
  auto R = aura_degenerate_sector(zero, zero, kPi / 2);
  CHECK(R(Vec{0.0, 0.7}) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(R(Vec{0.0, -0.7}) > 0.1);
}

TEST_CASE("sector complement") {
  OpenSectorSpec upper{0.0, 1.0, DCFunction::zero(1)};
  auto F = aura_sector_complement({upper});
  std::mt19937 rng(4);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int k = 0; k < 2000; ++k) {
    Vec p{u(rng), u(rng)};
    CHECK((F(p) == 0.0) == (p[1] <= 0.0));
  }
  OpenSectorSpec q2{kPi / 4, 1.0, abs1()};
  OpenSectorSpec q4{5 * kPi / 4, 1.0, abs1()};
  auto G = aura_sector_complement({q2, q4});
  for (int k = 0; k < 10000; ++k) {
    Vec p{u(rng), u(rng)};
    const bool open_quadrant = p[0] * p[1] < 0.0;
    CHECK((G(p) > 0.0) == open_quadrant);
  }
  auto rep = check_weak_regularity(G, 0.0, 0.2, local_box(0.5));
  CHECK(rep.margin >= 0.5);
  OpenSectorSpec overlap{kPi / 4 + 0.1, 1.0, abs1()};
  CHECK_THROWS_AS(aura_sector_complement({q2, overlap}), Error);
}

TEST_CASE("exact margins") {
  auto inf = DCFunction::convex(MaxAffine({A({1, 0}), A({-1, 0}), A({0, 1}), A({0, -1})}));
  CHECK(std::abs(check_weak_regularity(inf, 0.0, 0.5).margin - 1.0 / std::sqrt(2.0)) <= 1e-12);

  auto cone = DCFunction::convex(MaxAffine({A({-3, 1}), A({3, 1}), A({0, 0})}));
  try {
    check_weak_regularity(cone, 0.0, 0.5);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Unbounded);
  }
  auto cap_l1 = DCFunction::convex(MaxAffine({A({1, 1}, -10), A({1, -1}, -10), A({-1, 1}, -10), A({-1, -1}, -10)}));
  auto capped = max(cone, cap_l1);
  CHECK(std::abs(check_weak_regularity(capped, 0.0, 0.5).margin - 1.0) <= 1e-12);
  // With a sup-norm cap the bottom corners meet the cone sides with hull
  // conv{(3,1),(0,-1)}, whose distance to the origin is below 1.
  auto cap_inf = add_constant(inf, -10.0);
  const double corner = seg_dist({3, 1}, {0, -1});
  CHECK(std::abs(check_weak_regularity(max(cone, cap_inf), 0.0, 0.5).margin - corner) <= 1e-12);

  auto half = DCFunction::convex(MaxAffine({A({0, 1}), A({0, 0})}));
  CHECK_THROWS_AS(check_weak_regularity(half, 0.0, 0.5), Error);

  // monotone in the shell width, covariant in scale
  auto sq = aura_distance_polytope(square(1.0));
  double prev = 0.0;
  for (double eps : {2.0, 1.0, 0.5, 0.1}) {
    const double m = check_weak_regularity(sq, 0.0, eps).margin;
    CHECK(m >= prev - 1e-15);
    prev = m;
  }
  const double m1 = check_weak_regularity(capped, 0.0, 0.5).margin;
  const double m3 = check_weak_regularity(scale(capped, 3.0), 0.0, 1.5).margin;
  CHECK(m3 == doctest::Approx(3.0 * m1).epsilon(1e-12));

  // empty shell is reported
  auto far = check_weak_regularity(add_constant(sq, 5.0), 0.0, 0.5);
  CHECK(far.empty_shell);
}

TEST_CASE("sampled mode in 3d") {
  auto f = aura_distance_polytope(VPolytope{{{0.0, 0.0, 0.0}}});
  SamplingPlan plan;
  plan.samples = 2000;
  auto rep = check_weak_regularity(f, 0.0, 0.5, plan);
  CHECK(rep.mode == AuraMode::Sampled);
  CHECK(rep.samples > 0);
  CHECK(rep.margin >= 1.0 / std::sqrt(3.0) - 1e-9);
  SamplingPlan threaded = plan;
  threaded.threads = 4;
  auto rep4 = check_weak_regularity(f, 0.0, 0.5, threaded);
  CHECK(rep4.margin == rep.margin);
  CHECK(rep4.argmin == rep.argmin);
}

TEST_CASE("weak touch and sums") {
  auto a = aura_distance_polytope(square(1.0, {-3, 0}));
  auto b = aura_distance_polytope(square(1.0, {3, 0}));
  auto t = weak_touch(a, b);
  CHECK_FALSE(t.touched);
  WeakTouchReport rep;
  auto s = aura_sum(a, b, {}, &rep);
  std::mt19937 rng(6);
  std::uniform_real_distribution<double> u(-5, 5);
  for (int k = 0; k < 10000; ++k) {
    Vec p{u(rng), u(rng)};
    const bool in = (std::abs(p[0] + 3) <= 1 && std::abs(p[1]) <= 1) && (std::abs(p[0] - 3) <= 1 && std::abs(p[1]) <= 1);
    CHECK((s(p) == 0.0) == in);
    CHECK((s(p) == 0.0) == (a(p) == 0.0 && b(p) == 0.0));
  }

  // Full-dimensional square against itself: only outward normals, no touch.
  CHECK_FALSE(weak_touch(a, a).touched);

  // Squares sharing the edge y = 0 touch with v = (0, 1).
  auto lower = aura_distance_polytope(VPolytope{{{-1, -1}, {1, -1}, {1, 0}, {-1, 0}}});
  auto upper = aura_distance_polytope(VPolytope{{{-1, 0}, {1, 0}, {1, 1}, {-1, 1}}});
  auto tt = weak_touch(lower, upper);
  REQUIRE(tt.touched);
  CHECK(std::abs(tt.x[1]) <= 1e-9);
  CHECK(lower(tt.x) == doctest::Approx(0.0));
  CHECK(upper(tt.x) == doctest::Approx(0.0));
  CHECK(norm(tt.v) == doctest::Approx(1.0));
  try {
    aura_sum(lower, upper);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Consistency);
  }

  // A segment's distance aura touches itself (normals on both sides).
  auto seg = aura_distance_polytope(VPolytope{{{0.0, 0.0}, {1.0, 0.0}}}, PolyNorm::L1);
  CHECK(weak_touch(seg, seg).touched);

  // Localization: square plus a window aura overlapping it.
  auto win = aura_distance_polytope(VPolytope{{{-3.5, -2}, {-2, -2}, {-2, 2}, {-3.5, 2}}});
  auto loc = aura_sum(a, win);
  for (int k = 0; k < 10000; ++k) {
    Vec p{u(rng), u(rng)};
    const bool in = std::abs(p[0] + 3) <= 1 && std::abs(p[1]) <= 1 && p[0] >= -3.5 && p[0] <= -2.0;
    CHECK((loc(p) == 0.0) == in);
  }
}
