#include "wdc/aura.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <random>
#include <set>
#include <thread>

#include "wdc/errors.hpp"
#include "wdc/lp.hpp"
#include "wdc/numfmt.hpp"
#include "wdc/polytope.hpp"
#include "wdc/pwa1d.hpp"

namespace wdc {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double radical_inverse(std::uint64_t k, unsigned base) {
  double inv = 1.0 / base, f = inv, r = 0.0;
  while (k > 0) {
    r += f * static_cast<double>(k % base);
    k /= base;
    f *= inv;
  }
  return r;
}

const unsigned kPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};

std::vector<std::vector<std::size_t>> index_subsets(std::size_t n, std::size_t k) {
  std::vector<std::vector<std::size_t>> out;
  if (k > n) return out;
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  while (true) {
    out.push_back(idx);
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
    if (i == 0) break;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
  return out;
}

std::vector<Vec> rotation(double angle) {
  const double c = std::cos(angle), s = std::sin(angle);
  return {{c, -s}, {s, c}};
}

double min_norm_at(const DCFunction& f, std::span<const double> x) {
  const auto mode = f.dim() <= 3 ? SubdiffMode::Clarke : SubdiffMode::Outer;
  return norm(min_norm_point(subdiff(f, x, mode).hull));
}

// Closed set of unit directions of a cone, as arcs [start, start + len].
struct DirSet {
  bool full = false;
  std::vector<std::pair<double, double>> arcs;
};

DirSet directions_2d(const VPolytope& h) {
  double scale = 0.0;
  for (const auto& v : h.vertices) scale = std::max(scale, norm(v));
  std::vector<double> ang;
  for (const auto& v : h.vertices)
    if (norm(v) > 1e-12 * (1.0 + scale)) ang.push_back(wrap_positive(std::atan2(v[1], v[0])));
  DirSet d;
  if (ang.empty()) return d;
  std::sort(ang.begin(), ang.end());
  std::vector<double> uniq;
  for (double a : ang)
    if (uniq.empty() || a - uniq.back() > 1e-13) uniq.push_back(a);
  if (uniq.size() > 1 && uniq.front() + 2 * kPi - uniq.back() <= 1e-13) uniq.pop_back();
  if (uniq.size() == 1) {
    d.arcs.push_back({uniq[0], 0.0});
    return d;
  }
  const std::size_t n = uniq.size();
  std::size_t gi = 0;
  double gmax = -1.0;
  std::vector<double> gaps(n);
  for (std::size_t i = 0; i < n; ++i) {
    gaps[i] = i + 1 < n ? uniq[i + 1] - uniq[i] : uniq[0] + 2 * kPi - uniq[i];
    if (gaps[i] > gmax) {
      gmax = gaps[i];
      gi = i;
    }
  }
  constexpr double kFlat = 1e-12;
  if (gmax > kPi + kFlat) {
    const double start = uniq[(gi + 1) % n];
    d.arcs.push_back({start, 2 * kPi - gmax});
  } else if (gmax >= kPi - kFlat) {
    std::size_t flat = 0;
    for (double g : gaps) flat += g >= kPi - kFlat ? 1 : 0;
    if (flat >= 2) {
      // a line through the origin: only the two opposite directions
      d.arcs.push_back({uniq[(gi + 1) % n], 0.0});
      d.arcs.push_back({uniq[gi], 0.0});
    } else {
      d.arcs.push_back({uniq[(gi + 1) % n], kPi});
    }
  } else {
    d.full = true;
  }
  return d;
}

// Direction common to a and b within angular widening w.
std::optional<double> meet(const DirSet& a, const DirSet& b, double w) {
  if ((a.full && (b.full || !b.arcs.empty()))) return b.full ? 0.0 : b.arcs.front().first;
  if (b.full && !a.arcs.empty()) return a.arcs.front().first;
  for (const auto& [s1, l1] : a.arcs)
    for (const auto& [s2, l2] : b.arcs) {
      const double d = wrap_positive(s2 - s1);
      if (d <= l1 + w) return s1 + std::min(d, l1);
      if (d >= 2 * kPi - l2 - w) return s1;
    }
  return std::nullopt;
}

DirSet shifted(DirSet d, double by) {
  for (auto& [s, l] : d.arcs) s = wrap_positive(s + by);
  return d;
}

// u in cone(V) up to a small residual.
bool in_cone(const std::vector<Vec>& vs, const Vec& u, double tol) {
  const std::size_t m = vs.size(), d = u.size();
  if (m == 0) return false;
  std::vector<Vec> rows;
  Vec rhs;
  for (std::size_t k = 0; k < d; ++k) {
    Vec r(m), rn(m);
    for (std::size_t j = 0; j < m; ++j) {
      r[j] = vs[j][k];
      rn[j] = -vs[j][k];
    }
    rows.push_back(r);
    rhs.push_back(u[k] + tol);
    rows.push_back(rn);
    rhs.push_back(-u[k] + tol);
  }
  const auto res = lp::maximize(Vec(m, 0.0), rows, rhs, Vec(m, 0.0), Vec(m, 1e6));
  return res.status == lp::Status::Optimal;
}

std::optional<Vec> antipodal_nd(const VPolytope& hf, const VPolytope& hg) {
  std::vector<Vec> vf, vg;
  for (const auto& v : hf.vertices)
    if (norm(v) > 1e-12) vf.push_back(scaled(v, 1.0 / norm(v)));
  for (const auto& v : hg.vertices)
    if (norm(v) > 1e-12) vg.push_back(scaled(v, 1.0 / norm(v)));
  std::vector<Vec> cand = vf;
  for (const auto& v : vg) cand.push_back(scaled(v, -1.0));
  if (hf.dim() == 3)
    for (const auto& p : vf)
      for (const auto& q : vg) {
        Vec c{p[1] * q[2] - p[2] * q[1], p[2] * q[0] - p[0] * q[2], p[0] * q[1] - p[1] * q[0]};
        if (norm(c) > 1e-12) {
          cand.push_back(scaled(c, 1.0 / norm(c)));
          cand.push_back(scaled(c, -1.0 / norm(c)));
        }
      }
  for (const auto& u : cand)
    if (in_cone(vf, u, kTouchAngle) && in_cone(vg, scaled(u, -1.0), kTouchAngle)) return u;
  return std::nullopt;
}

std::optional<Vec> touch_at(const DCFunction& f, const DCFunction& g, std::span<const double> x) {
  const auto mode = f.dim() <= 3 ? SubdiffMode::Clarke : SubdiffMode::Outer;
  const auto hf = subdiff(f, x, mode).hull;
  const auto hg = subdiff(g, x, mode).hull;
  if (f.dim() == 2) {
    const auto df = directions_2d(hf);
    const auto dg = shifted(directions_2d(hg), kPi);
    if (auto a = meet(df, dg, kTouchAngle)) return Vec{std::cos(*a), std::sin(*a)};
    return std::nullopt;
  }
  if (f.dim() == 1) {
    for (const auto& p : hf.vertices)
      for (const auto& q : hg.vertices)
        if (p[0] * q[0] < 0.0) return Vec{p[0] > 0 ? 1.0 : -1.0};
    return std::nullopt;
  }
  return antipodal_nd(hf, hg);
}

// Min over probe values with lowest-index tie-break, split across threads.
template <class F>
std::pair<double, std::size_t> parallel_min(std::size_t n, int threads, F&& value) {
  const std::size_t t = static_cast<std::size_t>(std::max(1, threads));
  std::vector<std::pair<double, std::size_t>> best(t, {kInf, n});
  std::vector<std::exception_ptr> errors(t);
  auto work = [&](std::size_t id) {
    try {
      for (std::size_t k = id; k < n; k += t) {
        const double v = value(k);
        if (v < best[id].first || (v == best[id].first && k < best[id].second)) best[id] = {v, k};
      }
    } catch (...) {
      errors[id] = std::current_exception();
    }
  };
  if (t == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t id = 0; id < t; ++id) pool.emplace_back(work, id);
    for (auto& th : pool) th.join();
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  auto out = best.front();
  for (const auto& b : best)
    if (b.first < out.first || (b.first == out.first && b.second < out.second)) out = b;
  return out;
}

}  // namespace

const char* to_string(AuraMode m) { return m == AuraMode::ExactPwa2d ? "exact-pwa-2d" : "sampled"; }

std::vector<Vec> plan_points(const SamplingPlan& plan) {
  const std::size_t d = plan.lo.size();
  if (plan.hi.size() != d) fail(ErrorKind::Dimension, "sampling box bounds differ in dimension");
  if (d > std::size(kPrimes)) fail(ErrorKind::Unsupported, "sampling plan supports up to 12 dimensions");
  std::vector<Vec> pts;
  pts.reserve(plan.samples);
  std::mt19937_64 rng(plan.seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (std::size_t k = 0; k < plan.samples; ++k) {
    Vec x(d);
    for (std::size_t i = 0; i < d; ++i) {
      const double t = plan.low_discrepancy ? radical_inverse(plan.seed + k + 1, kPrimes[i]) : u(rng);
      x[i] = plan.lo[i] + t * (plan.hi[i] - plan.lo[i]);
    }
    pts.push_back(std::move(x));
  }
  return pts;
}

DCFunction aura_distance_polytope(const VPolytope& p, PolyNorm pn) {
  if (p.vertices.empty()) fail(ErrorKind::Validation, "distance aura needs a nonempty polytope");
  const std::size_t d = p.dim();
  if (d == 0 || d > 3) fail(ErrorKind::Unsupported, "distance auras are supported for d <= 3");
  for (const auto& v : p.vertices)
    if (v.size() != d) fail(ErrorKind::Dimension, "polytope vertices differ in dimension");
  // Dual-ball facets n.w = 1 and normal-fan walls (v_i - v_j).w = 0.
  std::vector<std::pair<Vec, double>> planes;
  if (pn == PolyNorm::Linf) {
    for (std::size_t mask = 0; mask < (1u << d); ++mask) {
      Vec n(d);
      for (std::size_t k = 0; k < d; ++k) n[k] = (mask >> k) & 1 ? -1.0 : 1.0;
      planes.push_back({n, 1.0});
    }
  } else {
    for (std::size_t k = 0; k < d; ++k)
      for (double s : {1.0, -1.0}) {
        Vec n(d, 0.0);
        n[k] = s;
        planes.push_back({n, 1.0});
      }
  }
  const auto verts = prune_vertices(p).vertices;
  std::vector<Vec> walls;
  for (std::size_t i = 0; i < verts.size(); ++i)
    for (std::size_t j = i + 1; j < verts.size(); ++j) {
      Vec n = sub(verts[i], verts[j]);
      const double l = norm(n);
      if (l == 0.0) continue;
      n = scaled(n, 1.0 / l);
      bool dup = false;
      for (const auto& w : walls) {
        const double c = std::abs(dot(w, n));
        if (std::abs(c - 1.0) < 1e-12) dup = true;
      }
      if (!dup) walls.push_back(n);
    }
  for (const auto& w : walls) planes.push_back({w, 0.0});
  auto dual_norm = [pn](const Vec& w) {
    if (pn == PolyNorm::Linf) {
      double s = 0.0;
      for (double v : w) s += std::abs(v);
      return s;
    }
    return norm_inf(w);
  };
  std::vector<Vec> cands{Vec(d, 0.0)};
  for (const auto& idx : index_subsets(planes.size(), d)) {
    std::vector<Vec> m;
    Vec rhs;
    for (std::size_t k : idx) {
      m.push_back(planes[k].first);
      rhs.push_back(planes[k].second);
    }
    if (!solve_linear(m, rhs, 1e-12)) continue;
    if (dual_norm(rhs) > 1.0 + 1e-12) continue;
    for (double& v : rhs)
      if (std::abs(v) < 1e-15) v = 0.0;
    bool dup = false;
    for (const auto& c : cands) dup = dup || norm_inf(sub(c, rhs)) < 1e-12;
    if (!dup) cands.push_back(rhs);
  }
  std::vector<AffineMap> pieces;
  for (const auto& w : cands) {
    double support = -kInf;
    for (const auto& v : verts) support = std::max(support, dot(w, v));
    pieces.push_back(AffineMap{w, -support});
  }
  return DCFunction::convex(prune_dominated(MaxAffine(pieces), 0));
}

DCFunction aura_hypograph(const DCFunction& phi) {
  if (phi.dim() != 1) fail(ErrorKind::Dimension, "hypograph aura needs a 1-d boundary");
  const std::size_t coord[1] = {0};
  const DCFunction lifted = lift(phi, 2, coord);
  const DCFunction y = DCFunction::affine(AffineMap{{0.0, 1.0}, 0.0});
  return max(add(y, negate(lifted)), DCFunction::zero(2));
}

DCFunction aura_degenerate_sector(const DCFunction& lo, const DCFunction& hi, double angle, bool check_tangent) {
  if (lo.dim() != 1 || hi.dim() != 1) fail(ErrorKind::Dimension, "sector boundaries must be 1-d");
  if (std::abs(lo(Vec{0.0})) > 1e-12 || std::abs(hi(Vec{0.0})) > 1e-12)
    fail(ErrorKind::Validation, "sector boundaries must vanish at the apex");
  if (check_tangent && (std::abs(one_sided_slope_1d(lo, 0.0, Side::Right)) > 1e-12 ||
                        std::abs(one_sided_slope_1d(hi, 0.0, Side::Right)) > 1e-12))
    fail(ErrorKind::Validation, "sector boundaries need zero right slope at the apex");
  const Pwa1d pl = Pwa1d::from_dc(lo).zero_extended_left();
  const Pwa1d ph = Pwa1d::from_dc(hi).zero_extended_left();
  Vec xs{0.0};
  for (double k : pl.knots) xs.push_back(k);
  for (double k : ph.knots) xs.push_back(k);
  const double far = 1.0 + *std::max_element(xs.begin(), xs.end());
  xs.push_back(far);
  for (double x : xs)
    if (x >= 0.0 && pl(x) > ph(x) + 1e-12 * (1.0 + std::abs(ph(x))))
      fail(ErrorKind::Validation, "lower sector boundary exceeds the upper one at x = " + fmt_point(Vec{x}));
  if (pl.right_slope > ph.right_slope + 1e-12)
    fail(ErrorKind::Validation, "lower sector boundary eventually exceeds the upper one");
  const std::size_t coord[1] = {0};
  const DCFunction gl = lift(pl.to_dc(), 2, coord);
  const DCFunction gh = lift(ph.to_dc(), 2, coord);
  const DCFunction y = DCFunction::affine(AffineMap{{0.0, 1.0}, 0.0});
  const DCFunction below = add(gl, negate(y));
  const DCFunction above = add(y, negate(gh));
  const std::vector<DCFunction> parts{below, above, DCFunction::zero(2)};
  const DCFunction band = combine(CombineMode::Max, parts);
  const DCFunction left = DCFunction::convex(MaxAffine({AffineMap{{-1.0, 0.0}, 0.0}, AffineMap{{0.0, 0.0}, 0.0}}));
  return precompose(add(band, left), rotation(-angle), Vec{0.0, 0.0});
}

DCFunction aura_sector_complement(const std::vector<OpenSectorSpec>& sectors) {
  if (sectors.empty()) fail(ErrorKind::Validation, "sector complement needs at least one sector");
  double rho = kInf;
  for (const auto& s : sectors) {
    const auto chk = validate_sector(s);
    if (!chk.ok) fail(ErrorKind::Validation, "invalid sector: " + chk.reason);
    rho = std::min(rho, s.radius);
  }
  // Pairwise disjointness on a polar probe grid inside the common ball.
  for (std::size_t i = 0; i < sectors.size(); ++i)
    for (std::size_t j = i + 1; j < sectors.size(); ++j)
      for (int ri = 1; ri <= 32; ++ri) {
        const double r = rho * ri / 33.0;
        for (int ai = 0; ai < 720; ++ai) {
          const double a = 2 * kPi * (ai + 0.5) / 720.0;
          const P2 p{r * std::cos(a), r * std::sin(a)};
          if (in_open_sector(sectors[i], p) && in_open_sector(sectors[j], p))
            fail(ErrorKind::Validation, "sectors overlap near " + fmt_point(to_vec(p)));
        }
      }
  std::vector<DCFunction> parts;
  for (const auto& s : sectors) parts.push_back(precompose(aura_hypograph(s.phi), rotation(-s.angle), {0.0, 0.0}));
  return combine(CombineMode::Max, parts);
}

double recession_min_2d(const DCFunction& f) {
  if (f.dim() != 2) fail(ErrorKind::Dimension, "recession test needs d = 2");
  std::vector<P2> dirs;
  for (int k = 0; k < 8; ++k) dirs.push_back({std::cos(k * kPi / 4), std::sin(k * kPi / 4)});
  auto walls = [&](const MaxAffine& p) {
    for (std::size_t i = 0; i < p.size(); ++i)
      for (std::size_t k = i + 1; k < p.size(); ++k) {
        const P2 n{p[i].a[0] - p[k].a[0], p[i].a[1] - p[k].a[1]};
        const double l = norm(n);
        if (l == 0.0) continue;
        dirs.push_back({-n.y / l, n.x / l});
        dirs.push_back({n.y / l, -n.x / l});
      }
  };
  walls(f.g);
  walls(f.h);
  double best = kInf;
  for (const P2 u : dirs) {
    double mg = -kInf, mh = -kInf;
    for (const auto& p : f.g.pieces()) mg = std::max(mg, p.a[0] * u.x + p.a[1] * u.y);
    for (const auto& p : f.h.pieces()) mh = std::max(mh, p.a[0] * u.x + p.a[1] * u.y);
    best = std::min(best, mg - mh);
  }
  return best;
}

double sublevel_radius_2d(const DCFunction& f, double c) {
  const double sigma = recession_min_2d(f);
  if (!(sigma > 1e-12)) fail(ErrorKind::Unbounded, "sublevel set is unbounded");
  double min_b = kInf, max_e = -kInf;
  for (const auto& p : f.g.pieces()) min_b = std::min(min_b, p.b);
  for (const auto& p : f.h.pieces()) max_e = std::max(max_e, p.b);
  const double r = std::max(0.0, c - (min_b - max_e)) / sigma;
  return r * 1.01 + 1e-6;
}

Box2 plan_box_2d(const DCFunction& f, double c, double eps, const SamplingPlan& plan) {
  const bool given = plan.lo.size() == 2 && plan.hi.size() == 2;
  if (plan.local) {
    if (!given) fail(ErrorKind::Validation, "local plans need an explicit box");
    return Box2{plan.lo[0], plan.hi[0], plan.lo[1], plan.hi[1]};
  }
  const double r = sublevel_radius_2d(f, c + eps);
  Box2 b = Box2::square(r);
  if (given) {
    b.xlo = std::min(b.xlo, plan.lo[0]);
    b.xhi = std::max(b.xhi, plan.hi[0]);
    b.ylo = std::min(b.ylo, plan.lo[1]);
    b.yhi = std::max(b.yhi, plan.hi[1]);
  }
  return b;
}

AuraReport check_weak_regularity(const DCFunction& f, double c, double eps, const SamplingPlan& plan) {
  if (!(eps > 0.0)) fail(ErrorKind::Validation, "shell width must be positive");
  AuraReport rep;
  rep.level = c;
  rep.shell_width = eps;
  rep.margin = kInf;
  double vtol = 0.0;
  auto in_shell = [&](double v) { return v > c + vtol && v < c + eps - vtol; };
  if (f.dim() == 2) {
    rep.mode = AuraMode::ExactPwa2d;
    const Box2 box = plan_box_2d(f, c, eps, plan);
    // Values at computed vertices carry rounding of order |grad| * |x| * ulp.
    vtol = 1e-12 * (1.0 + std::abs(c) + f.lipschitz_bound() * box.scale());
    rep.box_lo = {box.xlo, box.ylo};
    rep.box_hi = {box.xhi, box.yhi};
    const Arrangement arr = dc_arrangement(f, box);
    // Strata meeting the shell, each with a representative point inside it.
    std::vector<Vec> reps;
    for (const P2 v : arr.vertices)
      if (in_shell(f(to_vec(v)))) reps.push_back(to_vec(v));
    for (const auto& e : arr.edges) {
      const P2 pa = arr.vertices[e.a], pb = arr.vertices[e.b];
      const double fa = f(to_vec(pa)), fb = f(to_vec(pb));
      const double lo = std::min(fa, fb), hi = std::max(fa, fb);
      if (hi - lo <= vtol) {
        if (in_shell(0.5 * (fa + fb))) reps.push_back(to_vec(arr.midpoint(e)));
        continue;
      }
      const double a = std::max(lo, c + vtol), b = std::min(hi, c + eps - vtol);
      if (!(a < b)) continue;
      // f is affine along the open edge; aim for the middle of the overlap
      const double target = 0.5 * (a + b);
      double t = (target - fa) / (fb - fa);
      t = std::clamp(t, 1e-6, 1.0 - 1e-6);
      reps.push_back(to_vec(pa + t * (pb - pa)));
    }
    rep.samples = reps.size();
    if (reps.empty()) {
      rep.empty_shell = true;
      return rep;
    }
    std::vector<double> vals(reps.size());
    const auto [m, k] = parallel_min(reps.size(), plan.threads, [&](std::size_t i) {
      vals[i] = min_norm_at(f, reps[i]);
      return vals[i];
    });
    rep.margin = m;
    rep.argmin = reps[k];
    for (std::size_t i = 0; i < reps.size(); ++i)
      if (vals[i] < plan.threshold) rep.violations.push_back(reps[i]);
    return rep;
  }
  rep.mode = AuraMode::Sampled;
  SamplingPlan p = plan;
  if (p.lo.size() != f.dim() || p.hi.size() != f.dim()) {
    if (plan.local) fail(ErrorKind::Validation, "local plans need an explicit box");
    // Sampled recession estimate on a deterministic sphere design.
    std::mt19937_64 rng(plan.seed);
    std::normal_distribution<double> nd(0.0, 1.0);
    double sigma = kInf;
    for (int k = 0; k < 4096; ++k) {
      Vec u(f.dim());
      for (double& v : u) v = nd(rng);
      u = scaled(u, 1.0 / norm(u));
      double mg = -kInf, mh = -kInf;
      for (const auto& q : f.g.pieces()) mg = std::max(mg, dot(q.a, u));
      for (const auto& q : f.h.pieces()) mh = std::max(mh, dot(q.a, u));
      sigma = std::min(sigma, mg - mh);
    }
    if (!(sigma > 1e-12)) fail(ErrorKind::Unbounded, "sublevel set appears unbounded");
    double min_b = kInf, max_e = -kInf;
    for (const auto& q : f.g.pieces()) min_b = std::min(min_b, q.b);
    for (const auto& q : f.h.pieces()) max_e = std::max(max_e, q.b);
    const double r = 2.0 * std::max(0.0, c + eps - (min_b - max_e)) / sigma + 1e-6;
    p.lo.assign(f.dim(), -r);
    p.hi.assign(f.dim(), r);
  }
  rep.box_lo = p.lo;
  rep.box_hi = p.hi;
  const auto pts = plan_points(p);
  std::vector<Vec> shell;
  for (const auto& x : pts)
    if (in_shell(f(x))) shell.push_back(x);
  rep.samples = shell.size();
  if (shell.empty()) {
    rep.empty_shell = true;
    return rep;
  }
  std::vector<double> vals(shell.size());
  const auto [m, k] = parallel_min(shell.size(), plan.threads, [&](std::size_t i) {
    vals[i] = min_norm_at(f, shell[i]);
    return vals[i];
  });
  rep.margin = m;
  rep.argmin = shell[k];
  for (std::size_t i = 0; i < shell.size(); ++i)
    if (vals[i] < plan.threshold) rep.violations.push_back(shell[i]);
  return rep;
}

WeakTouchReport weak_touch(const DCFunction& f, const DCFunction& g, const SamplingPlan& plan) {
  if (f.dim() != g.dim()) fail(ErrorKind::Dimension, "weak touch needs equal dimensions");
  WeakTouchReport rep;
  std::vector<Vec> cands;
  double scale = 1.0;
  if (f.dim() == 2) {
    Box2 box;
    if (plan.lo.size() == 2 && plan.hi.size() == 2) {
      box = Box2{plan.lo[0], plan.hi[0], plan.lo[1], plan.hi[1]};
    } else {
      double r = kInf;
      try {
        r = std::min(r, sublevel_radius_2d(f, 0.0));
      } catch (const Error&) {
      }
      try {
        r = std::min(r, sublevel_radius_2d(g, 0.0));
      } catch (const Error&) {
      }
      if (!std::isfinite(r)) fail(ErrorKind::Unbounded, "weak touch needs a box when both zero sets are unbounded");
      box = Box2::square(r + 1.0);
    }
    scale = 1.0 + box.scale();
    auto segs = seam_segments(f.g, box, SourceKind::GSeam);
    for (const auto* part : {&f.h, &g.g, &g.h}) {
      auto s = seam_segments(*part, box, SourceKind::GSeam);
      segs.insert(segs.end(), s.begin(), s.end());
    }
    for (const auto* fn : {&f, &g}) {
      auto s = level_segments(*fn, 0.0, box);
      segs.insert(segs.end(), s.begin(), s.end());
    }
    auto bs = box_segments(box);
    segs.insert(segs.end(), bs.begin(), bs.end());
    const auto arr = build_arrangement(std::move(segs), 1e-9 * scale);
    for (const P2 v : arr.vertices) cands.push_back(to_vec(v));
    for (const auto& e : arr.edges) cands.push_back(to_vec(arr.midpoint(e)));
  }
  if (plan.lo.size() == f.dim() && plan.hi.size() == f.dim()) {
    auto pts = plan_points(plan);
    cands.insert(cands.end(), pts.begin(), pts.end());
  }
  const double ztol = 1e-9 * scale;
  for (const auto& x : cands) {
    if (std::abs(f(x)) > ztol || std::abs(g(x)) > ztol) continue;
    ++rep.candidates;
    if (auto v = touch_at(f, g, x)) {
      rep.touched = true;
      rep.x = x;
      rep.v = *v;
      return rep;
    }
  }
  return rep;
}

DCFunction aura_sum(const DCFunction& f, const DCFunction& g, const SamplingPlan& plan, WeakTouchReport* report) {
  const auto touch = weak_touch(f, g, plan);
  if (report) *report = touch;
  if (touch.touched)
    fail(ErrorKind::Consistency,
         "auras touch weakly at " + fmt_point(touch.x) + " with direction " + fmt_point(touch.v));
  return add(f, g);
}

}  // namespace wdc
