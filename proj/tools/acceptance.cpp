#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "germs.hpp"
#include "shapes.hpp"
#include "wdc/aura.hpp"
#include "wdc/errors.hpp"
#include "wdc/fractal.hpp"
#include "wdc/numfmt.hpp"
#include "wdc/planar.hpp"
#include "wdc/polytope.hpp"
#include "wdc/retraction.hpp"
#include "wdc/singular.hpp"
#include "wdc/topology.hpp"

using namespace wdc;
using shapes::A;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

int report(int id, const char* what, double limit, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const Error& e) {
    o = {false, std::string("error (") + to_string(e.kind()) + "): " + e.what()};
  }
  const double s = seconds_since(t0);
  if (limit > 0 && s >= limit) {
    o.pass = false;
    o.detail += "; over the time limit";
  }
  std::printf("criterion %2d %s  %s: %s [%.2f s", id, o.pass ? "PASS" : "FAIL", what, o.detail.c_str(), s);
  if (limit > 0) std::printf(" / %.0f s", limit);
  std::printf("]\n");
  return o.pass ? 0 : 1;
}

RetractionConfig config(double eps) {
  RetractionConfig c;
  c.eps_reg = eps;
  c.step = 0.05;
  return c;
}

// dist(p, conv V)
double hull_dist(const Vec& p, const VPolytope& v) {
  VPolytope s;
  for (const auto& x : v.vertices) {
    Vec d(x.size());
    for (std::size_t k = 0; k < x.size(); ++k) d[k] = x[k] - p[k];
    s.vertices.push_back(d);
  }
  return norm(min_norm_point(s));
}

double tree_eval(const LatticeExpr& e, const Vec& x) {
  if (e.op == LatticeExpr::Op::Leaf) {
    double s = e.leaf.b;
    for (std::size_t k = 0; k < x.size(); ++k) s += e.leaf.a[k] * x[k];
    return s;
  }
  double r = tree_eval(e.children[0], x);
  for (std::size_t i = 1; i < e.children.size(); ++i) {
    const double c = tree_eval(e.children[i], x);
    r = e.op == LatticeExpr::Op::Max ? std::max(r, c) : std::min(r, c);
  }
  return r;
}

Outcome euler_identity() {
  Outcome o;
  int runs = 0;
  for (const auto& s : shapes::euler_suite())
    for (double grid : {0.05, 0.1}) {
      const double r = 0.25;
      const int d = euler_degree_2d(s.f, r, grid).chi, c = euler_cubical(s.f, r, grid).chi;
      ++runs;
      if (d != c || d != s.chi) {
        o.pass = false;
        o.detail += s.name + " grid " + shortest(grid) + ": degree " + std::to_string(d) + ", cubical " +
                    std::to_string(c) + "; ";
      }
    }
  if (o.pass) o.detail = std::to_string(runs) + " runs, six shapes, degree = cubical = expected chi";
  return o;
}

Outcome level_invariance() {
  Outcome o;
  for (const auto& s : shapes::euler_suite()) {
    std::vector<int> chis;
    for (double r : s.levels) chis.push_back(euler_degree_2d(s.f, r, 0.05).chi);
    for (int c : chis)
      if (c != chis.front() || c != s.chi) {
        o.pass = false;
        o.detail += s.name + " changes chi across levels; ";
        break;
      }
  }
  if (o.pass) o.detail = "chi constant at levels 0.1, 0.25, 0.4 on all six shapes";
  return o;
}

Outcome retraction_contract() {
  Outcome o;
  const double shell = 0.5;
  std::size_t traces = 0, bad = 0;
  double worst_time = 0.0;
  std::mt19937_64 rng(2024);
  for (const auto& s : shapes::euler_suite()) {
    const double eps = check_weak_regularity(s.f, 0.0, shell).margin;
    const Box2 b = plan_box_2d(s.f, 0.0, shell, {});
    std::uniform_real_distribution<double> ux(b.xlo, b.xhi), uy(b.ylo, b.yhi);
    int n = 0;
    while (n < 100) {
      const Vec x{ux(rng), uy(rng)};
      const double fx = s.f(x);
      if (!(fx > 0.0 && fx < shell)) continue;
      ++n;
      ++traces;
      const auto cfg = config(eps);
      const auto tr = retract(s.f, x, cfg);
      const auto rep = verify_trace(s.f, tr, cfg);
      worst_time = std::max(worst_time, rep.time_ratio);
      if (!rep.ok || rep.time_ratio > 1.1) ++bad;
    }
  }
  o.pass = bad == 0;
  o.detail = std::to_string(traces) + " traces, " + std::to_string(bad) + " failures, worst t/(f/margin) " +
             shortest(worst_time);
  return o;
}

P2 on_square(double t, double half) {
  const P2 d{std::cos(t), std::sin(t)};
  return (half / std::max(std::abs(d.x), std::abs(d.y))) * d;
}

P2 on_diamond(double t, double r) {
  const P2 d{std::cos(t), std::sin(t)};
  return (r / (std::abs(d.x) + std::abs(d.y))) * d;
}

Outcome boundary_bound() {
  Outcome o;
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> ut(0.0, 2 * kPi), us(0.2, 1.4), uh(0.05, 0.4);
  const auto sq = shapes::square(), an = shapes::annulus();
  const double esq = check_weak_regularity(sq, 0.0, 1.0).margin, ean = check_weak_regularity(an, 0.0, 0.5).margin;
  int fails = 0;
  double worst = 0.0;
  for (int c = 0; c < 50; ++c) {
    const bool square = c % 2 == 0;
    const double t0 = ut(rng), span = us(rng), h = uh(rng) * (square ? 1.0 : 0.5);
    std::vector<Vec> curve;
    for (int k = 0; k <= 30; ++k) {
      const double s = k / 30.0, t = t0 + span * s;
      const P2 base = square ? on_square(t, 1.0) : on_diamond(t, 2.0);
      const P2 p = (1.0 + h * std::sin(kPi * s)) * base;
      curve.push_back({p.x, p.y});
    }
    const auto& f = square ? sq : an;
    const double eps = square ? esq : ean;
    const auto r = boundary_path(f, curve, config(eps));
    const double bound = 6.0 / eps * r.input_diameter + 1e-6;
    worst = std::max(worst, r.output_diameter / bound);
    if (!r.ok || r.output_diameter > bound) ++fails;
  }
  o.pass = fails == 0;
  o.detail = "50 curves, " + std::to_string(fails) + " failures, worst output/bound " + shortest(worst);
  return o;
}

Outcome aura_algebra() {
  Outcome o;
  const auto a = aura_distance_polytope(VPolytope{{{-4, -1}, {-2, -1}, {-2, 1}, {-4, 1}}});
  const auto b = aura_distance_polytope(VPolytope{{{2, -1}, {4, -1}, {4, 1}, {2, 1}}});
  const auto s = aura_sum(a, b);
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(-5, 5);
  int miss = 0;
  for (int k = 0; k < 10000; ++k) {
    Vec p{u(rng), u(rng)};
    if (k % 5 == 0) p[0] = std::round(p[0]);  // land on edges too
    // {f + g = 0} = {f = 0} ∩ {g = 0}, empty for disjoint squares
    const bool in = std::abs(p[0] + 3) <= 1 && std::abs(p[0] - 3) <= 1 && std::abs(p[1]) <= 1;
    miss += (s(p) == 0.0) != in || (s(p) == 0.0) != (a(p) == 0.0 && b(p) == 0.0);
  }
  const auto lower = aura_distance_polytope(VPolytope{{{-1, -1}, {1, -1}, {1, 0}, {-1, 0}}});
  const auto upper = aura_distance_polytope(VPolytope{{{-1, 0}, {1, 0}, {1, 1}, {-1, 1}}});
  bool refused = false;
  std::string witness;
  try {
    aura_sum(lower, upper);
  } catch (const Error& e) {
    refused = e.kind() == ErrorKind::Consistency && std::string(e.what()).find(" at (") != std::string::npos;
    witness = e.what();
  }
  const auto F = aura_hypograph(DCFunction::convex(MaxAffine({A({1}), A({-1})})));
  int law = 0, probes = 0;
  while (probes < 1000) {
    Vec p{u(rng), u(rng)};
    if (probes % 4 == 0) p[0] = 0.0;
    if (F(p) <= 0.0) continue;
    ++probes;
    for (const auto& v : subdiff(F, p, SubdiffMode::Clarke).hull.vertices) law += v[1] != 1.0;
  }
  o.pass = miss == 0 && refused && law == 0;
  o.detail = "sum zero set = intersection, " + std::to_string(miss) + " misses / 1e4, touching " + (refused ? "refused (" + witness + ")" : "accepted") +
             ", second coordinate != 1 at " + std::to_string(law) + " of 1e3 probes";
  return o;
}

Outcome margins() {
  const auto inf = DCFunction::convex(MaxAffine({A({1, 0}), A({-1, 0}), A({0, 1}), A({0, -1})}));
  const double m1 = check_weak_regularity(inf, 0.0, 0.5).margin;
  const auto cone = DCFunction::convex(MaxAffine({A({-3, 1}), A({3, 1}), A({0, 0})}));
  const auto cap = DCFunction::convex(MaxAffine({A({1, 1}, -10), A({1, -1}, -10), A({-1, 1}, -10), A({-1, -1}, -10)}));
  const double m2 = check_weak_regularity(max(cone, cap), 0.0, 0.5).margin;
  Outcome o;
  o.pass = std::abs(m1 - 1 / std::sqrt(2.0)) <= 1e-12 && std::abs(m2 - 1.0) <= 1e-12;
  char buf[160];
  std::snprintf(buf, sizeof buf, "sup norm %.15f (|err| %.1e), capped cone with l1 cap %.15f (|err| %.1e)", m1,
                std::abs(m1 - 1 / std::sqrt(2.0)), m2, std::abs(m2 - 1.0));
  o.detail = buf;
  return o;
}

int single_true(const std::array<bool, 5>& p) {
  int n = 0, which = 0;
  for (int i = 0; i < 5; ++i)
    if (p[i]) ++n, which = i + 1;
  return n == 1 ? which : -n;
}

Outcome planar_round_trip() {
  Outcome o;
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  int models = 0, pairs = 0, bad_set = 0, bad_type = 0;
  double min_margin = 1e300;
  bool conds[4] = {false, false, false, false};
  for (const auto& gm : germs::suite()) {
    const auto m = characterize_local(gm.g);
    ++models;
    conds[static_cast<int>(m.condition)] = true;
    if (m.condition != gm.condition || m.sectors.size() != gm.sectors) {
      o.pass = false;
      o.detail += gm.name + " has the wrong condition; ";
    }
    const auto a = build_planar_aura(m, 10000);
    min_margin = std::min(min_margin, a.report.margin);
    for (int i = 0; i < 5000; ++i) {
      const P2 p = m.x + m.rho * P2{u(rng), u(rng)};
      if (norm(p - m.x) >= m.rho) continue;
      bad_set += (a.F(Vec{p.x, p.y}) <= 1e-12) != gm.g.contains(p, 1e-12);
    }
    for (int j = 0; j < 64; ++j) {
      const double t = 2 * kPi * j / 64;
      const P2 v{std::cos(t), std::sin(t)};
      const auto tag = classify_direction(m, v);
      ++pairs;
      const int want = static_cast<int>(tag.type);
      if (single_true(type_predicates(m, v, tag.r, tag.u)) != want ||
          single_true(type_predicates(m, v, 0.5 * tag.r, 0.5 * tag.u)) != want)
        ++bad_type;
    }
  }
  o.pass = o.pass && bad_set == 0 && bad_type == 0 && min_margin > 0.0 && conds[1] && conds[2] && conds[3];
  o.detail += std::to_string(models) + " models over (i)/(ii)/(iii), zero-set mismatches " + std::to_string(bad_set) +
              ", min margin " + shortest(min_margin) + ", non-unique or unstable types " + std::to_string(bad_type) +
              " of " + std::to_string(pairs);
  return o;
}

Outcome singular_sets() {
  const MaxAffine g({A({1, 0}), A({-1, 0}), A({0, 1}), A({0, -1})});
  const auto c1 = singular_set_pwa_2d(g, 1.0, Box2{});
  const auto c2 = singular_set_pwa_2d(g, 2.0, Box2{});
  // Expected: diagonals y = x, y = -x across [-1,1]^2 and the origin.
  const std::vector<std::pair<P2, P2>> want{{{-1, -1}, {1, 1}}, {{1, -1}, {-1, 1}}, {{0, 0}, {0, 0}}};
  std::vector<bool> hit(want.size(), false);
  double err = 0.0;
  bool extra = false;
  for (const auto& s : c1.segments) {
    bool found = false;
    for (std::size_t k = 0; k < want.size(); ++k) {
      const auto& [p, q] = want[k];
      const double e = std::min(std::max(norm(s.p - p), norm(s.q - q)), std::max(norm(s.p - q), norm(s.q - p)));
      if (e <= 1e-12 && !hit[k]) {
        hit[k] = found = true;
        err = std::max(err, e);
        break;
      }
    }
    extra = extra || !found;
  }
  Outcome o;
  o.pass = !extra && hit[0] && hit[1] && hit[2] && c2.segments.empty();
  o.detail = "eps 1: " + std::to_string(c1.segments.size()) + " pieces, endpoint error " + shortest(err) +
             "; eps 2: " + std::to_string(c2.segments.size()) + " pieces";
  return o;
}

Outcome fractal_bound() {
  const IfsSpec s{18 * kPi / 180};
  const auto k = ifs_generate(s, 8);
  FractalCheckOptions opt;
  opt.grid = 0.005;
  opt.shell_lo = 0.02;
  opt.shell_hi = 0.2;
  const auto r = fractal_regularity_check(k, opt);
  const double direct = std::log(0.5) / std::log(1.0 / (2.0 * std::cos(18 * kPi / 180)));
  const double dim = hausdorff_dim(s);
  const double floor = std::cos(72 * kPi / 180) - 0.02;
  Outcome o;
  o.pass = r.min_norm >= floor && std::abs(dim - direct) <= 1e-9;
  char buf[200];
  std::snprintf(buf, sizeof buf, "min %.6f >= %.6f over %zu shell points, dim %.10f (direct %.10f)", r.min_norm, floor,
                r.shell_points, dim, direct);
  o.detail = buf;
  return o;
}

Outcome dc_oracles() {
  std::mt19937_64 rng(123);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  std::uniform_int_distribution<int> ui(-3, 3);
  auto rand_max = [&](int n, bool integer) {
    std::vector<AffineMap> ps;
    for (int i = 0; i < n; ++i)
      ps.push_back(integer ? A({double(ui(rng)), double(ui(rng))}, ui(rng)) : A({u(rng), u(rng)}, u(rng)));
    return MaxAffine(ps);
  };
  double worst = 0.0;
  auto rel = [&](double got, double want) { worst = std::max(worst, std::abs(got - want) / std::max(1.0, std::abs(want))); };
  for (int c = 0; c < 4; ++c) {
    const DCFunction f1(rand_max(3 + c, false), rand_max(2, false)), f2(rand_max(2, false), rand_max(3, false));
    const std::vector<DCFunction> args{f1, f2};
    const auto s = combine(CombineMode::Add, args), mx = combine(CombineMode::Max, args), mn = combine(CombineMode::Min, args);
    for (int i = 0; i < 10000; ++i) {
      const Vec x{u(rng), u(rng)};
      const double a = f1(x), b = f2(x);
      rel(s(x), a + b);
      rel(mx(x), std::max(a, b));
      rel(mn(x), std::min(a, b));
    }
    std::function<LatticeExpr(int)> tree = [&](int depth) {
      if (depth == 0) return LatticeExpr::affine(A({u(rng), u(rng)}, u(rng)));
      std::vector<LatticeExpr> ch;
      for (int i = 0; i < 2 + (depth + c) % 2; ++i) ch.push_back(tree(depth - 1));
      return (depth + c) % 2 ? LatticeExpr::max(ch) : LatticeExpr::min(ch);
    };
    const auto e = tree(3);
    const auto l = lattice_to_dc(e);
    for (int i = 0; i < 10000; ++i) {
      const Vec x{u(rng), u(rng)};
      rel(l(x), tree_eval(e, x));
    }
  }
  // Integer data on a half-integer grid hits seams and vertices.
  double slack = 0.0;
  int probes = 0;
  while (probes < 1000) {
    const DCFunction f(rand_max(4, true), rand_max(3, true));
    for (int i = 0; i < 50; ++i, ++probes) {
      const Vec x{0.5 * ui(rng), 0.5 * ui(rng)};
      const auto cl = subdiff(f, x, SubdiffMode::Clarke), out = subdiff(f, x, SubdiffMode::Outer);
      for (const auto& v : cl.hull.vertices) slack = std::max(slack, hull_dist(v, out.hull));
    }
  }
  Outcome o;
  o.pass = worst <= 1e-12 && slack <= 1e-9;
  char buf[160];
  std::snprintf(buf, sizeof buf, "worst relative error %.2e over 1.6e5 evaluations, clarke outside outer by %.2e at %d probes",
                worst, slack, probes);
  o.detail = buf;
  return o;
}

}  // namespace

int main() {
  int failed = 0;
  failed += report(1, "Euler degree identity", 10, euler_identity);
  failed += report(2, "level invariance", 10, level_invariance);
  failed += report(3, "retraction contract", 30, retraction_contract);
  failed += report(4, "boundary-path bound", 0, boundary_bound);
  failed += report(5, "aura algebra", 0, aura_algebra);
  failed += report(6, "weak-regularity margins", 0, margins);
  failed += report(7, "planar characterization round trip", 0, planar_round_trip);
  failed += report(8, "singular sets", 0, singular_sets);
  failed += report(9, "fractal bound", 60, fractal_bound);
  failed += report(10, "DC calculus oracles", 0, dc_oracles);
  std::printf("%d of 10 criteria passed\n", 10 - failed);
  return failed == 0 ? 0 : 1;
}
