#include "wdc/topology.hpp"

#include <cmath>
#include <sstream>

#include "wdc/aura.hpp"
#include "wdc/errors.hpp"
#include "wdc/numfmt.hpp"
#include "wdc/polytope.hpp"

namespace wdc {
namespace {

// Fixed fractional offsets keep grid nodes off the rational seams.
constexpr double kShiftX = 0.1234567;
constexpr double kShiftY = 0.2718281;

struct Grid {
  double x0 = 0, y0 = 0, h = 0;
  std::size_t nx = 0, ny = 0;  // cells

  Grid(const Box2& b, double step) : h(step) {
    x0 = b.xlo - kShiftX * h;
    y0 = b.ylo - kShiftY * h;
    nx = static_cast<std::size_t>(std::ceil((b.xhi - x0) / h)) + 1;
    ny = static_cast<std::size_t>(std::ceil((b.yhi - y0) / h)) + 1;
  }
  P2 node(std::size_t i, std::size_t j) const { return {x0 + h * static_cast<double>(i), y0 + h * static_cast<double>(j)}; }
  P2 center(std::size_t i, std::size_t j) const { return node(i, j) + P2{0.5 * h, 0.5 * h}; }
};

void check_grid(double grid) {
  if (!(grid > 0.0) || !std::isfinite(grid)) fail(ErrorKind::Validation, "grid spacing must be positive");
}

void check_planar(const DCFunction& f) {
  if (f.dim() != 2) fail(ErrorKind::Dimension, "planar routine needs a function on R^2");
}

// Point of {f = r} on the segment from inside a to outside b.
P2 refine_crossing(const DCFunction& f, double r, P2 a, P2 b) {
  P2 m = 0.5 * (a + b);
  for (int it = 0; it < 200; ++it) {
    m = 0.5 * (a + b);
    const double v = f(to_vec(m)) - r;
    if (std::abs(v) <= kTraceTol) break;
    (v <= 0 ? a : b) = m;
  }
  return m;
}

std::size_t cell_budget(const Grid& g) {
  const double n = static_cast<double>(g.nx + 1) * static_cast<double>(g.ny + 1);
  if (n > 6e7) fail(ErrorKind::Limit, "grid too fine for the box");
  return static_cast<std::size_t>(n);
}

Vec direction_at(const DCFunction& f, P2 p, P2 along) {
  auto hull_at = [&](P2 q) { return prune_vertices(subdiff(f, to_vec(q), SubdiffMode::Clarke).hull); };
  VPolytope hull = hull_at(p);
  if (hull.vertices.size() > 1) {
    // Seam sample: step off it along the loop.
    const double n = norm(along);
    if (n > 0) {
      for (double s : {1e-9, -1e-9}) {
        VPolytope h2 = hull_at(p + (s / n) * along);
        if (h2.vertices.size() == 1) {
          hull = std::move(h2);
          break;
        }
      }
    }
  }
  const Vec u = min_norm_point(hull);
  const double n = norm(u);
  if (!(n > 1e-12)) fail(ErrorKind::Regularity, "zero subgradient on the level set at " + fmt_point(to_vec(p)));
  return scaled(u, 1.0 / n);
}

}  // namespace

const char* to_string(EulerMethod m) { return m == EulerMethod::Degree ? "degree" : "cubical"; }

Box2 level_box_2d(const DCFunction& f, double r, double grid) {
  check_planar(f);
  check_grid(grid);
  return Box2::square(sublevel_radius_2d(f, r) + 2.0 * grid);
}

LevelLoops level_loops_2d(const DCFunction& f, double r, double grid, std::optional<Box2> box) {
  check_planar(f);
  check_grid(grid);
  LevelLoops out;
  out.level = r;
  out.grid = grid;
  out.box = box ? *box : level_box_2d(f, r, grid);
  const Grid g(out.box, grid);
  cell_budget(g);
  const std::size_t nx = g.nx, ny = g.ny;
  std::vector<char> in((nx + 1) * (ny + 1));
  auto idx = [&](std::size_t i, std::size_t j) { return j * (nx + 1) + i; };
  for (std::size_t j = 0; j <= ny; ++j)
    for (std::size_t i = 0; i <= nx; ++i) {
      in[idx(i, j)] = f(to_vec(g.node(i, j))) - r <= 0.0;
      if (in[idx(i, j)] && (i == 0 || j == 0 || i == nx || j == ny))
        fail(ErrorKind::Validation, "sublevel set reaches the grid box");
    }

  // Edge keys: horizontal (i, j)-(i+1, j) first, then vertical (i, j)-(i, j+1).
  const std::size_t nh = nx * (ny + 1);
  auto hkey = [&](std::size_t i, std::size_t j) { return j * nx + i; };
  auto vkey = [&](std::size_t i, std::size_t j) { return nh + j * (nx + 1) + i; };
  const std::size_t none = static_cast<std::size_t>(-1);
  std::vector<std::size_t> next(nh + (nx + 1) * ny, none);
  bool any = false;

  for (std::size_t j = 0; j < ny; ++j)
    for (std::size_t i = 0; i < nx; ++i) {
      const bool c[4] = {bool(in[idx(i, j)]), bool(in[idx(i + 1, j)]), bool(in[idx(i + 1, j + 1)]),
                         bool(in[idx(i, j + 1)])};
      if (c[0] == c[1] && c[1] == c[2] && c[2] == c[3]) continue;
      any = true;
      const std::size_t e[4] = {hkey(i, j), vkey(i + 1, j), hkey(i, j + 1), vkey(i, j)};
      int exits = 0;
      for (int k = 0; k < 4; ++k) exits += c[k] && !c[(k + 1) % 4];
      // Saddle: join the inside corners through the center when it is inside.
      const bool ccw = exits < 2 || f(to_vec(g.center(i, j))) - r <= 0.0;
      for (int k = 0; k < 4; ++k) {
        if (!(c[k] && !c[(k + 1) % 4])) continue;
        for (int s = 1; s < 4; ++s) {
          const int m = ccw ? (k + s) % 4 : (k + 4 - s) % 4;
          if (!c[m] && c[(m + 1) % 4]) {
            next[e[k]] = e[m];
            break;
          }
        }
      }
    }
  if (!any) {
    out.note = "empty level set";
    return out;
  }

  auto crossing = [&](std::size_t key) {
    std::size_t i, j, i2, j2;
    if (key < nh) {
      i = key % nx, j = key / nx, i2 = i + 1, j2 = j;
    } else {
      const std::size_t k = key - nh;
      i = k % (nx + 1), j = k / (nx + 1), i2 = i, j2 = j + 1;
    }
    P2 a = g.node(i, j), b = g.node(i2, j2);
    if (!in[idx(i, j)]) std::swap(a, b);
    return refine_crossing(f, r, a, b);
  };

  std::vector<char> seen(next.size(), 0);
  for (std::size_t k = 0; k < next.size(); ++k) {
    if (next[k] == none || seen[k]) continue;
    std::vector<P2> loop;
    std::size_t cur = k;
    while (!seen[cur]) {
      seen[cur] = 1;
      loop.push_back(crossing(cur));
      cur = next[cur];
      if (cur == none) fail(ErrorKind::Consistency, "open contour in marching squares");
    }
    loop.push_back(loop.front());
    out.loops.push_back(std::move(loop));
  }
  return out;
}

double loop_winding(const DCFunction& f, const std::vector<P2>& loop, double refine) {
  if (loop.size() < 3) return 0.0;
  auto ang = [](const Vec& u) { return std::atan2(u[1], u[0]); };
  // Increment from a to b, bisecting the chord until it is below the cap.
  // Jumps across a seam never shrink; they stay below pi on regular levels.
  auto step = [&](auto&& self, P2 pa, const Vec& ua, P2 pb, const Vec& ub, int depth) -> double {
    const double inc = wrap_angle(ang(ub) - ang(ua));
    if (std::abs(inc) < refine) return inc;
    if (depth >= 60 || norm(pb - pa) <= 1e-13 * (1.0 + norm(pa))) {
      if (std::abs(inc) > kPi - 1e-6) fail(ErrorKind::Consistency, "winding refinement failed near " + fmt_point(to_vec(pa)));
      return inc;
    }
    const P2 pm = 0.5 * (pa + pb);
    const Vec um = direction_at(f, pm, pb - pa);
    return self(self, pa, ua, pm, um, depth + 1) + self(self, pm, um, pb, ub, depth + 1);
  };
  double total = 0.0;
  const std::size_t n = loop.size() - 1;
  std::vector<Vec> u(n);
  for (std::size_t k = 0; k < n; ++k) u[k] = direction_at(f, loop[k], loop[k + 1] - loop[k]);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t k2 = (k + 1) % n;
    total += step(step, loop[k], u[k], loop[k2], u[k2], 0);
  }
  return total / (2.0 * kPi);
}

EulerResult euler_degree_2d(const DCFunction& f, double r, double grid, double refine, std::optional<Box2> box) {
  if (!(refine > 0.0 && refine < kPi)) fail(ErrorKind::Validation, "refine cap must be in (0, pi)");
  const LevelLoops ll = level_loops_2d(f, r, grid, box);
  EulerResult res;
  res.method = EulerMethod::Degree;
  for (const auto& loop : ll.loops) {
    const double w = loop_winding(f, loop, refine);
    const long k = std::lround(w);
    const double resid = std::abs(w - static_cast<double>(k));
    if (resid >= 0.1) fail(ErrorKind::Consistency, "winding residual " + shortest(resid) + " too large");
    res.per_loop.push_back(static_cast<int>(k));
    res.residual.push_back(resid);
    res.chi += static_cast<int>(k);
  }
  return res;
}

EulerResult euler_cubical(const DCFunction& f, double r, double grid, std::optional<Box2> box) {
  check_planar(f);
  check_grid(grid);
  const Box2 b = box ? *box : level_box_2d(f, r, grid);
  const Grid g(b, grid);
  cell_budget(g);
  const std::size_t nx = g.nx, ny = g.ny;
  std::vector<char> cell(nx * ny);
  for (std::size_t j = 0; j < ny; ++j)
    for (std::size_t i = 0; i < nx; ++i) {
      cell[j * nx + i] = f(to_vec(g.center(i, j))) <= r;
      if (cell[j * nx + i] && (i == 0 || j == 0 || i + 1 == nx || j + 1 == ny))
        fail(ErrorKind::Validation, "sublevel set reaches the grid box");
    }
  auto on = [&](long i, long j) {
    return i >= 0 && j >= 0 && i < long(nx) && j < long(ny) && cell[std::size_t(j) * nx + std::size_t(i)];
  };
  long V = 0, E = 0, F = 0;
  for (long j = 0; j <= long(ny); ++j)
    for (long i = 0; i <= long(nx); ++i) {
      F += on(i, j);
      V += on(i, j) || on(i - 1, j) || on(i, j - 1) || on(i - 1, j - 1);
      E += on(i, j) || on(i, j - 1);  // horizontal edge from node (i, j)
      E += on(i, j) || on(i - 1, j);  // vertical edge from node (i, j)
    }
  EulerResult res;
  res.method = EulerMethod::Cubical;
  res.chi = static_cast<int>(V - E + F);
  res.per_loop = {static_cast<int>(V), static_cast<int>(E), static_cast<int>(F)};
  return res;
}

std::string loops_csv(const LevelLoops& l) {
  std::ostringstream os;
  os << "loop,k,x,y\n";
  for (std::size_t i = 0; i < l.loops.size(); ++i)
    for (std::size_t k = 0; k < l.loops[i].size(); ++k)
      os << i << ',' << k << ',' << shortest(l.loops[i][k].x) << ',' << shortest(l.loops[i][k].y) << '\n';
  return os.str();
}

std::string loops_svg(const LevelLoops& l) {
  const Box2& b = l.box;
  const double span = std::max(b.xhi - b.xlo, b.yhi - b.ylo);
  const double k = 496.0 / span;
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"512\" height=\"512\" viewBox=\"0 0 512 512\">\n";
  for (const auto& loop : l.loops) {
    os << "<polygon fill=\"none\" stroke=\"#222\" stroke-width=\"1\" points=\"";
    for (std::size_t i = 0; i + 1 < loop.size(); ++i)
      os << (i ? " " : "") << shortest(8 + (loop[i].x - b.xlo) * k) << ',' << shortest(504 - (loop[i].y - b.ylo) * k);
    os << "\"/>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace wdc
