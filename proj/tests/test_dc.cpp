#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "wdc/dc.hpp"
#include "wdc/errors.hpp"
#include "wdc/polytope.hpp"

using namespace wdc;

namespace {

AffineMap A(Vec a, double b = 0.0) { return AffineMap{std::move(a), b}; }

DCFunction abs1() { return DCFunction::convex(MaxAffine({A({1}), A({-1})})); }

// Random PWA DC function in d dims with small integer-free coefficients.
DCFunction random_dc(std::mt19937& rng, std::size_t d, int ng, int nh) {
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  auto part = [&](int n) {
    std::vector<AffineMap> p;
    for (int i = 0; i < n; ++i) {
      Vec a(d);
      for (auto& v : a) v = u(rng);
      p.push_back(A(a, u(rng)));
    }
    return MaxAffine(p);
  };
  return DCFunction(part(ng), part(nh));
}

// Closest point of conv{p0, p1, p2} in the plane to the origin, by checking
// the interior stationary point and each edge projection.
Vec triangle_projection_oracle(const Vec& p0, const Vec& p1, const Vec& p2) {
  const Vec pts[3] = {p0, p1, p2};
  Vec best = p0;
  auto consider = [&](const Vec& q) {
    if (norm(q) < norm(best)) best = q;
  };
  for (int i = 0; i < 3; ++i) {
    const Vec& a = pts[i];
    const Vec& b = pts[(i + 1) % 3];
    const Vec ab = sub(b, a);
    double t = -dot(a, ab) / dot(ab, ab);
    t = std::clamp(t, 0.0, 1.0);
    consider(axpy(a, t, ab));
  }
  // origin inside: barycentric test
  auto sgn = [](const Vec& a, const Vec& b) { return a[0] * b[1] - a[1] * b[0]; };
  const double s0 = sgn(sub(p1, p0), scaled(p0, -1));
  const double s1 = sgn(sub(p2, p1), scaled(p1, -1));
  const double s2 = sgn(sub(p0, p2), scaled(p2, -1));
  if ((s0 >= 0 && s1 >= 0 && s2 >= 0) || (s0 <= 0 && s1 <= 0 && s2 <= 0)) best = {0.0, 0.0};
  return best;
}

bool hull_approx(const VPolytope& p, std::vector<Vec> expected, double tol = 1e-9) {
  if (p.vertices.size() != expected.size()) return false;
  for (const auto& e : expected) {
    bool found = false;
    for (const auto& v : p.vertices) found = found || dist(v, e) <= tol;
    if (!found) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("evaluation") {
  CHECK(abs1()(Vec{2.0}) == 2.0);
  auto negabs = DCFunction::concave(MaxAffine({A({1}), A({-1})}));
  CHECK(negabs(Vec{3.0}) == -3.0);
  auto same = DCFunction(MaxAffine({A({1, 1})}), MaxAffine({A({1, 1})}));
  CHECK(same(Vec{0.3, -7.0}) == 0.0);
  CHECK_THROWS_AS(abs1()(Vec{1.0, 2.0}), Error);
}

TEST_CASE("max and min combinations") {
  auto x = DCFunction::affine(A({1}));
  auto m = max(abs1(), x);
  auto n = min(abs1(), abs1());
  for (double t = -3; t <= 3; t += 0.25) {
    CHECK(m(Vec{t}) == doctest::Approx(std::abs(t)).epsilon(1e-12));
    CHECK(n(Vec{t}) == doctest::Approx(std::abs(t)).epsilon(1e-12));
  }
  std::mt19937 rng(7);
  std::vector<DCFunction> fs{random_dc(rng, 2, 3, 2), random_dc(rng, 2, 2, 3), random_dc(rng, 2, 3, 3)};
  auto mx = combine(CombineMode::Max, fs);
  auto mn = combine(CombineMode::Min, fs);
  std::uniform_real_distribution<double> u(-5, 5);
  double worst = 0.0, worst_min = 0.0;
  for (int k = 0; k < 10000; ++k) {
    Vec p{u(rng), u(rng)};
    const double ref = std::max({fs[0](p), fs[1](p), fs[2](p)});
    const double ref_min = std::min({fs[0](p), fs[1](p), fs[2](p)});
    worst = std::max(worst, std::abs(mx(p) - ref) / (1 + std::abs(ref)));
    worst_min = std::max(worst_min, std::abs(mn(p) - ref_min) / (1 + std::abs(ref_min)));
  }
  CHECK(worst <= 1e-12);
  CHECK(worst_min <= 1e-12);
}

TEST_CASE("scale and precompose") {
  auto f = abs1();
  auto neg = scale(f, -2.0);
  CHECK(neg(Vec{1.5}) == -3.0);
  auto z = scale(f, 0.0);
  CHECK(z.g.size() == 1);
  CHECK(z.h.size() == 1);
  CHECK(z(Vec{4.0}) == 0.0);
  // f(2x + 1)
  auto p = precompose(f, {{2.0}}, {1.0});
  CHECK(p(Vec{-2.0}) == 3.0);
  CHECK_THROWS_AS(add(f, DCFunction::zero(2)), Error);
  CHECK_THROWS_AS(combine(CombineMode::Add, std::span<const DCFunction>{}), Error);
}

TEST_CASE("lattice conversion") {
  auto e1 = LatticeExpr::min({LatticeExpr::affine(A({1})), LatticeExpr::affine(A({-1}))});
  auto f1 = lattice_to_dc(e1);
  for (double t = -2; t <= 2; t += 0.5) CHECK(f1(Vec{t}) == -std::abs(t));
  auto e2 = LatticeExpr::max({LatticeExpr::affine(A({1})), LatticeExpr::affine(A({-1}))});
  auto f2 = lattice_to_dc(e2);
  CHECK(f2.g.size() == 2);
  CHECK(f2.h.size() == 1);
  auto e3 = LatticeExpr::max({LatticeExpr::min({LatticeExpr::affine(A({-1, 1})), LatticeExpr::affine(A({1, 1}))}),
                              LatticeExpr::affine(A({0, 0}))});
  auto f3 = lattice_to_dc(e3);
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(-4, 4);
  double worst = 0.0;
  for (int k = 0; k < 10000; ++k) {
    const double x = u(rng), y = u(rng);
    worst = std::max(worst, std::abs(f3(Vec{x, y}) - std::max(y - std::abs(x), 0.0)));
  }
  CHECK(worst <= 1e-12);
  LatticeExpr bad;
  bad.op = LatticeExpr::Op::Max;
  CHECK_THROWS_AS(lattice_to_dc(bad), Error);
}

TEST_CASE("subdifferentials") {
  const Vec o{0.0};
  auto s = subdiff(abs1(), o, SubdiffMode::Clarke);
  CHECK(hull_approx(s.hull, {{-1.0}, {1.0}}));

  auto zero = DCFunction(MaxAffine({A({1}), A({-1})}), MaxAffine({A({1}), A({-1})}));
  CHECK(hull_approx(subdiff(zero, o, SubdiffMode::Outer).hull, {{-2.0}, {2.0}}));
  CHECK(hull_approx(subdiff(zero, o, SubdiffMode::Clarke).hull, {{0.0}}));

  // max(x,-x) - max(2x,0) is -x on both half-lines
  auto f = DCFunction(MaxAffine({A({1}), A({-1})}), MaxAffine({A({2}), A({0})}));
  for (double t : {-1.0, -0.5, 0.5, 2.0}) CHECK(f(Vec{t}) == -t);
  auto c = subdiff(f, o, SubdiffMode::Clarke);
  CHECK(c.exactness == Exactness::ClarkeExact);
  CHECK(hull_approx(c.hull, {{-1.0}}));
  auto out = subdiff(f, o, SubdiffMode::Outer);
  CHECK(out.exactness == Exactness::OuterEstimate);
  CHECK(hull_approx(out.hull, {{-3.0}, {1.0}}));

  auto big = DCFunction::zero(4);
  CHECK_THROWS_AS(subdiff(DCFunction(MaxAffine({A({1, 0, 0, 0}), A({-1, 0, 0, 0})}), big.h), Vec(4, 0.0),
                          SubdiffMode::Clarke),
                  Error);
}

TEST_CASE("clarke inside outer and collapse at smooth points") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int trial = 0; trial < 20; ++trial) {
    auto f = random_dc(rng, 2, 4, 3);
    // Sample kink points: a point on the tie line of two g pieces.
    for (int k = 0; k < 20; ++k) {
      Vec p{u(rng), u(rng)};
      auto cl = subdiff(f, p, SubdiffMode::Clarke);
      auto ou = subdiff(f, p, SubdiffMode::Outer);
      CHECK(hull_excess(cl.hull, ou.hull) <= 1e-9);
      if (f.g.active(p, kActivityTol).size() == 1 && f.h.active(p, kActivityTol).size() == 1) {
        CHECK(cl.hull.vertices.size() == 1);
      }
    }
  }
  // Gradient limits along a seam lie in the hull: |x| + |y| at (0, 0.5).
  auto f = DCFunction::convex(MaxAffine({A({1, 1}), A({1, -1}), A({-1, 1}), A({-1, -1})}));
  auto cl = subdiff(f, Vec{0.0, 0.5}, SubdiffMode::Clarke);
  CHECK(hull_approx(cl.hull, {{1.0, 1.0}, {-1.0, 1.0}}));
  for (double t = 1e-3; t > 1e-9; t /= 10) {
    auto single = subdiff(f, Vec{t, 0.5}, SubdiffMode::Clarke);
    CHECK(hull_excess(single.hull, cl.hull) <= 1e-9);
  }
}

TEST_CASE("min norm point") {
  CHECK(hull_approx(VPolytope{{min_norm_point(VPolytope{{{1, 0}, {0, 1}}})}}, {{0.5, 0.5}}));
  CHECK(hull_approx(VPolytope{{min_norm_point(VPolytope{{{2}, {3}}})}}, {{2.0}}));
  const Vec p0{1, 1}, p1{1, -1}, p2{3, 0};
  auto r = wolfe_min_norm(VPolytope{{p0, p1, p2}});
  CHECK(r.certified);
  CHECK(dist(r.point, triangle_projection_oracle(p0, p1, p2)) <= 1e-10);

  std::mt19937 rng(5);
  std::normal_distribution<double> n(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    Vec shift{n(rng), n(rng)};
    Vec a = add(Vec{n(rng), n(rng)}, shift), b = add(Vec{n(rng), n(rng)}, shift), c = add(Vec{n(rng), n(rng)}, shift);
    auto res = wolfe_min_norm(VPolytope{{a, b, c}});
    CHECK(res.certified);
    CHECK(dist(res.point, triangle_projection_oracle(a, b, c)) <= 1e-8);
  }
}

TEST_CASE("one-sided slopes") {
  CHECK(one_sided_slope_1d(abs1(), 0.0, Side::Right) == 1.0);
  CHECK(one_sided_slope_1d(abs1(), 0.0, Side::Left) == -1.0);
  auto f = DCFunction::convex(MaxAffine({A({1}), A({2}, -1)}));
  CHECK(one_sided_slope_1d(f, 1.0, Side::Right) == 2.0);
  CHECK(one_sided_slope_1d(f, 1.0, Side::Left) == 1.0);

  std::mt19937 rng(19);
  std::uniform_real_distribution<double> u(-2, 2);
  for (int trial = 0; trial < 50; ++trial) {
    auto g = random_dc(rng, 1, 4, 3);
    // breakpoint of two g pieces
    const double x = (g.g[1].b - g.g[0].b) / (g.g[0].a[0] - g.g[1].a[0]);
    if (!std::isfinite(x) || std::abs(x) > 10) continue;
    const double t = std::ldexp(1.0, -20);
    const double fd_right = (g(Vec{x + t}) - g(Vec{x})) / t;
    const double fd_left = (g(Vec{x}) - g(Vec{x - t})) / t;
    CHECK(std::abs(one_sided_slope_1d(g, x, Side::Right) - fd_right) <= 1e-9 * (1 + std::abs(fd_right)) + 1e-6);
    CHECK(std::abs(one_sided_slope_1d(g, x, Side::Left) - fd_left) <= 1e-9 * (1 + std::abs(fd_left)) + 1e-6);
    // slope_right(x) equals slope_right just to the right
    CHECK(one_sided_slope_1d(g, x, Side::Right) == doctest::Approx(one_sided_slope_1d(g, x + 1e-7, Side::Right)));
  }
}
