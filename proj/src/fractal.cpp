#include "wdc/fractal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <thread>

#include "wdc/errors.hpp"
#include "wdc/numfmt.hpp"
#include "wdc/polytope.hpp"

namespace wdc {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double seg_dist(const Seg2& s, P2 p, P2* foot = nullptr) {
  const P2 d = s.q - s.p;
  const double dd = dot(d, d);
  const double t = dd > 0.0 ? std::clamp(dot(p - s.p, d) / dd, 0.0, 1.0) : 0.0;
  const P2 y = s.p + t * d;
  if (foot) *foot = y;
  return norm(p - y);
}

// Bounding boxes of aligned blocks of the chain: level l has 2^l blocks.
struct BlockTree {
  std::vector<std::vector<Box2>> levels;

  explicit BlockTree(const std::vector<Seg2>& segs) {
    std::vector<Box2> leaf;
    for (const auto& s : segs)
      leaf.push_back(Box2{std::min(s.p.x, s.q.x), std::max(s.p.x, s.q.x), std::min(s.p.y, s.q.y), std::max(s.p.y, s.q.y)});
    levels.push_back(std::move(leaf));
    while (levels.back().size() > 1) {
      const auto& c = levels.back();
      std::vector<Box2> up;
      for (std::size_t k = 0; k + 1 < c.size(); k += 2)
        up.push_back(Box2{std::min(c[k].xlo, c[k + 1].xlo), std::max(c[k].xhi, c[k + 1].xhi),
                          std::min(c[k].ylo, c[k + 1].ylo), std::max(c[k].yhi, c[k + 1].yhi)});
      levels.push_back(std::move(up));
    }
    std::reverse(levels.begin(), levels.end());
  }
};

double box_dist(const Box2& b, P2 p) {
  const double dx = std::max({b.xlo - p.x, 0.0, p.x - b.xhi});
  const double dy = std::max({b.ylo - p.y, 0.0, p.y - b.yhi});
  return std::hypot(dx, dy);
}

// Distance from p to the chain; with `hits`, also every segment within `radius`.
double query(const BlockTree& t, const std::vector<Seg2>& segs, P2 p, double radius, std::vector<std::size_t>* hits) {
  double best = kInf;
  std::vector<std::pair<std::size_t, std::size_t>> stack{{0, 0}};
  while (!stack.empty()) {
    const auto [l, k] = stack.back();
    stack.pop_back();
    const double bound = hits ? radius : std::min(best, radius);
    if (box_dist(t.levels[l][k], p) > bound) continue;
    if (l + 1 == t.levels.size()) {
      const double d = seg_dist(segs[k], p);
      if (hits) {
        if (d <= radius) hits->push_back(k);
      }
      best = std::min(best, d);
      continue;
    }
    for (std::size_t c : {2 * k, 2 * k + 1})
      if (c < t.levels[l + 1].size()) stack.push_back({l + 1, c});
  }
  return best;
}

struct Partial {
  double min_norm = 1.0;
  P2 argmin;
  std::size_t grid_points = 0, shell_points = 0, singleton = 0;
};

}  // namespace

void validate(const IfsSpec& s) {
  if (!(s.alpha > 0.0 && s.alpha < kPi / 8)) fail(ErrorKind::Validation, "alpha must lie in (0, pi/8)");
}

P2 phi_plus(const IfsSpec& s, P2 p) {
  const double a = s.ratio(), c = std::cos(-s.alpha), sn = std::sin(-s.alpha);
  const P2 d = p - s.v_plus();
  return s.v_plus() + a * P2{c * d.x + sn * d.y, sn * d.x - c * d.y};
}

P2 phi_minus(const IfsSpec& s, P2 p) {
  const P2 q = phi_plus(s, P2{-p.x, p.y});
  return {-q.x, q.y};
}

FractalApprox ifs_generate(const IfsSpec& s, int depth) {
  validate(s);
  if (depth < 0 || depth > kMaxDepth) fail(ErrorKind::Limit, "depth must lie in [0, " + std::to_string(kMaxDepth) + "]");
  FractalApprox k;
  k.spec = s;
  k.depth = depth;
  k.segments = {Seg2{s.v_minus(), s.v_plus(), {}}};
  for (int n = 0; n < depth; ++n) {
    std::vector<Seg2> next;
    next.reserve(2 * k.segments.size());
    for (const auto& g : k.segments) next.push_back(Seg2{phi_minus(s, g.p), phi_minus(s, g.q), {}});
    for (const auto& g : k.segments) next.push_back(Seg2{phi_plus(s, g.p), phi_plus(s, g.q), {}});
    k.segments = std::move(next);
  }
  k.hausdorff_bound = std::pow(s.ratio(), depth) * s.diam_h();
  return k;
}

double hausdorff_dim(const IfsSpec& s) {
  validate(s);
  return std::log(0.5) / std::log(s.ratio());
}

double dist_to_approx(const FractalApprox& k, P2 p) {
  double d = kInf;
  for (const auto& s : k.segments) d = std::min(d, seg_dist(s, p));
  return d;
}

FractalCheck fractal_regularity_check(const FractalApprox& k, const FractalCheckOptions& opt) {
  validate(k.spec);
  if (!(opt.grid > 0.0)) fail(ErrorKind::Validation, "grid spacing must be positive");
  if (!(opt.shell_lo > 0.0 && opt.shell_lo < opt.shell_hi)) fail(ErrorKind::Validation, "shell must satisfy 0 < lo < hi");
  if (!(opt.shell_lo > 2.0 * k.hausdorff_bound))
    fail(ErrorKind::Validation, "shell lower radius " + shortest(opt.shell_lo) + " must exceed twice the depth error " +
                                    shortest(k.hausdorff_bound));
  if (opt.threads < 1) fail(ErrorKind::Validation, "threads must be at least 1");
  FractalCheck out;
  out.fan_tol = opt.fan_tol.value_or(opt.grid / 10.0);
  if (!(out.fan_tol >= 0.0)) fail(ErrorKind::Validation, "fan tolerance must be nonnegative");
  out.bound = -std::cos(k.spec.gamma());
  out.tol = opt.tol;
  out.discretization = 2.0 * (k.hausdorff_bound + out.fan_tol) / (opt.shell_lo - k.hausdorff_bound);

  const BlockTree tree(k.segments);
  const double hi = opt.shell_hi;
  const double xlo = -0.5 - hi, ylo = -hi;
  const auto nx = static_cast<std::size_t>(std::floor((1.0 + 2 * hi) / opt.grid)) + 1;
  const auto ny = static_cast<std::size_t>(std::floor((k.spec.apex().y + 2 * hi) / opt.grid)) + 1;
  const double ftol = out.fan_tol;

  auto sweep = [&](std::size_t row0, std::size_t step, Partial& part) {
    std::vector<std::size_t> hits;
    std::vector<Vec> fan;
    for (std::size_t j = row0; j < ny; j += step)
      for (std::size_t i = 0; i < nx; ++i) {
        const P2 x{xlo + i * opt.grid, ylo + j * opt.grid};
        ++part.grid_points;
        const double d = query(tree, k.segments, x, kInf, nullptr);
        if (d < opt.shell_lo || d > opt.shell_hi) continue;
        ++part.shell_points;
        hits.clear();
        query(tree, k.segments, x, d + ftol, &hits);
        fan.clear();
        for (std::size_t h : hits) {
          P2 y;
          seg_dist(k.segments[h], x, &y);
          const P2 u = (1.0 / norm(x - y)) * (x - y);
          bool dup = false;
          for (const auto& f : fan) dup = dup || std::hypot(f[0] - u.x, f[1] - u.y) <= 1e-12;
          if (!dup) fan.push_back({u.x, u.y});
        }
        double m = 1.0;
        if (fan.size() == 1) {
          ++part.singleton;
        } else {
          m = norm(min_norm_point(VPolytope{fan}));
        }
        if (m < part.min_norm || part.shell_points == 1) {
          part.min_norm = m;
          part.argmin = x;
        }
      }
  };
  const auto nt = static_cast<std::size_t>(opt.threads);
  std::vector<Partial> parts(nt);
  if (nt == 1) {
    sweep(0, 1, parts[0]);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < nt; ++t) pool.emplace_back(sweep, t, nt, std::ref(parts[t]));
    for (auto& th : pool) th.join();
  }
  bool first = true;
  for (const auto& p : parts) {
    out.grid_points += p.grid_points;
    out.shell_points += p.shell_points;
    out.singleton += p.singleton;
    if (p.shell_points == 0) continue;
    // Ties go to the first point in row-major order, as in a single sweep.
    const bool earlier = p.argmin.y < out.argmin.y || (p.argmin.y == out.argmin.y && p.argmin.x < out.argmin.x);
    if (first || p.min_norm < out.min_norm || (p.min_norm == out.min_norm && earlier)) {
      out.min_norm = p.min_norm;
      out.argmin = p.argmin;
    }
    first = false;
  }
  out.pass = out.min_norm >= out.bound - out.tol;
  return out;
}

std::string fractal_svg(const FractalApprox& k) {
  const double px = 512.0, sc = px / 1.2;
  const double h = k.spec.apex().y;
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"512\" height=\"" << shortest(std::ceil(sc * (h + 0.2)))
     << "\">\n<polyline fill=\"none\" stroke=\"black\" stroke-width=\"0.5\" points=\"";
  auto put = [&](P2 p) { os << shortest(sc * (p.x + 0.6)) << ',' << shortest(sc * (h + 0.1 - p.y)) << ' '; };
  if (!k.segments.empty()) put(k.segments.front().p);
  for (const auto& s : k.segments) put(s.q);
  os << "\"/>\n</svg>\n";
  return os.str();
}

}  // namespace wdc
