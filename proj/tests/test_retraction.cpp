#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "wdc/aura.hpp"
#include "wdc/errors.hpp"
#include "wdc/polytope.hpp"
#include "wdc/retraction.hpp"

using namespace wdc;

namespace {

AffineMap A(Vec a, double b = 0.0) { return AffineMap{std::move(a), b}; }

// max(|x - c|_inf - half, 0)
DCFunction square_aura(double half, P2 c = {}) {
  return DCFunction::convex(MaxAffine({A({1, 0}, -c.x - half), A({-1, 0}, c.x - half), A({0, 1}, -c.y - half),
                                       A({0, -1}, c.y - half), A({0, 0})}));
}

DCFunction l1() { return DCFunction::convex(MaxAffine({A({1, 1}), A({1, -1}), A({-1, 1}), A({-1, -1})})); }

RetractionConfig config(double eps) {
  RetractionConfig c;
  c.eps_reg = eps;
  c.step = 0.05;
  return c;
}

}  // namespace

TEST_CASE("descent direction") {
  auto d = descent_direction(l1(), Vec{1, 1}, 0.5);
  CHECK(d[0] == doctest::Approx(1 / std::sqrt(2.0)).epsilon(1e-15));
  CHECK(d[1] == doctest::Approx(1 / std::sqrt(2.0)).epsilon(1e-15));
  d = descent_direction(l1(), Vec{1, 0}, 0.5);
  CHECK(d[0] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(std::abs(d[1]) <= 1e-15);
  try {
    descent_direction(l1(), Vec{0, 0}, 0.5);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Regularity);
  }

  // Wolfe inequality against a direct sweep of hull vertices.
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> u(-2, 2);
  std::vector<AffineMap> gp, hp;
  for (int i = 0; i < 6; ++i) gp.push_back(A({u(rng), u(rng)}, u(rng)));
  for (int i = 0; i < 3; ++i) hp.push_back(A({u(rng), u(rng)}, u(rng)));
  DCFunction f{MaxAffine(gp), MaxAffine(hp)};
  int done = 0;
  for (int k = 0; k < 100; ++k) {
    Vec x{u(rng), u(rng)};
    // Put x on a seam of g half the time so the hull has two vertices.
    if (k % 2) {
      const auto& a = f.g[0];
      const auto& b = f.g[1];
      const Vec n = sub(a.a, b.a);
      const double shift = (a(x) - b(x)) / dot(n, n);
      x = axpy(x, -shift, n);
    }
    const auto hull = subdiff(f, x, SubdiffMode::Clarke).hull;
    const Vec p = min_norm_point(hull);
    if (norm(p) < 1e-6) continue;
    const Vec dir = descent_direction(f, x, 0.0);
    for (const auto& v : hull.vertices) CHECK(dot(dir, v) >= norm(p) - 1e-9);
    ++done;
  }
  CHECK(done > 50);
}

TEST_CASE("retract along a radial segment") {
  auto f = square_aura(1.0);
  const double eps = 1 / std::sqrt(2.0);
  auto tr = retract(f, Vec{2, 0}, config(eps));
  CHECK(tr.end().x[0] == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(std::abs(tr.end().x[1]) <= 1e-12);
  CHECK(tr.end().t == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(tr.end().fx <= 1e-9 * 2);
  auto rep = verify_trace(f, tr, config(eps));
  CHECK(rep.ok);
  CHECK(rep.worst_iv >= 1.0);
  // Speed 2 and distance 1: f drops at rate 1, ratio f / ((eps/2) dist) = 2 / eps.
  CHECK(rep.worst_iv == doctest::Approx(2 / eps).epsilon(1e-6));
  CHECK(rep.max_speed <= 2.0 + 1e-12);

  // Corner start moves along the diagonal to the corner.
  tr = retract(f, Vec{2, 1.9}, config(eps));
  CHECK(tr.end().x[0] == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(tr.end().x[1] == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(verify_trace(f, tr, config(eps)).ok);
}

TEST_CASE("identity on the zero set") {
  auto f = square_aura(1.0);
  auto tr = retract(f, Vec{0.3, -0.2}, config(0.5));
  REQUIRE(tr.samples.size() == 1);
  CHECK(tr.end().x == Vec{0.3, -0.2});
  auto rep = verify_trace(f, tr, config(0.5));
  CHECK(rep.ok);
  CHECK(rep.failures.empty());
}

TEST_CASE("two squares keep their basins") {
  auto f = min(square_aura(1.0, {-3, 0}), square_aura(1.0, {3, 0}));
  auto eps = check_weak_regularity(f, 0.0, 1.0).margin;
  CHECK(eps == doctest::Approx(1 / std::sqrt(2.0)).epsilon(1e-12));
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> u(-5, 5);
  int n = 0;
  while (n < 50) {
    Vec x{u(rng), u(rng)};
    const double fx = f(x);
    if (!(fx > 0 && fx < 1.0)) continue;
    ++n;
    auto tr = retract(f, x, config(eps));
    const double side = x[0] < 0 ? -1 : 1;
    for (const auto& s : tr.samples) CHECK(s.x[0] * side > 0);
    const Vec e = tr.end().x;
    CHECK(std::max(std::abs(e[0] - 3 * side), std::abs(e[1])) == doctest::Approx(1.0).epsilon(1e-8));
    auto rep = verify_trace(f, tr, config(eps));
    CHECK(rep.ok);
  }
}

TEST_CASE("complement of two quadrants") {
  OpenSectorSpec q2{kPi / 4, 1.0, DCFunction::convex(MaxAffine({A({1}), A({-1})}))};
  OpenSectorSpec q4{5 * kPi / 4, 1.0, q2.phi};
  auto G = aura_sector_complement({q2, q4});
  SamplingPlan plan;
  plan.lo = {-0.5, -0.5};
  plan.hi = {0.5, 0.5};
  plan.local = true;
  const double eps = check_weak_regularity(G, 0.0, 0.2, plan).margin;
  REQUIRE(eps > 0.0);
  std::mt19937 rng(9);
  std::uniform_real_distribution<double> u(-0.4, 0.4);
  int n = 0, bad = 0;
  while (n < 100) {
    Vec x{u(rng), u(rng)};
    const double gx = G(x);
    if (!(gx > 0 && gx < 0.2)) continue;
    ++n;
    auto tr = retract(G, x, config(eps));
    // Lands on the boundary of the closed first/third quadrants.
    CHECK(tr.end().x[0] * tr.end().x[1] >= -1e-9);
    auto rep = verify_trace(G, tr, config(eps));
    if (!rep.ok) ++bad;
    CHECK(rep.time_ratio <= 1.1);
  }
  CHECK(bad == 0);
}

TEST_CASE("boundary path") {
  auto f = square_aura(1.0);
  const double eps = 1 / std::sqrt(2.0);
  std::vector<Vec> curve;
  for (int k = 0; k <= 40; ++k) {
    const double s = k / 40.0;
    curve.push_back({1 + 0.2 * std::sin(kPi * s), 0.5 - s});
  }
  auto rep = boundary_path(f, curve, config(eps));
  for (int k = 0; k <= 40; ++k) {
    CHECK(rep.points[k][0] == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(rep.points[k][1] == doctest::Approx(curve[k][1]).epsilon(1e-9));
  }
  CHECK(rep.output_diameter == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(rep.ok);
  CHECK(rep.output_diameter <= rep.lip_bound);

  std::vector<Vec> inside{{1, 0.5}, {0.5, 0.5}, {0, 0}, {1, -0.5}};
  rep = boundary_path(f, inside, config(eps));
  CHECK(rep.points == inside);
  CHECK_THROWS_AS(boundary_path(f, {{2, 0}, {1, 0}}, config(eps)), Error);
}

TEST_CASE("config and export") {
  RetractionConfig bad;
  CHECK_THROWS_AS(validate(bad), Error);
  auto f = square_aura(1.0);
  auto tr = retract(f, Vec{1.5, 0}, config(0.5));
  const auto csv = trace_csv(tr);
  CHECK(csv.rfind("t,x0,x1,f\n0,1.5,0,0.5\n", 0) == 0);
  const auto svg = trace_svg({tr});
  CHECK(svg.find("<polyline") != std::string::npos);
}
