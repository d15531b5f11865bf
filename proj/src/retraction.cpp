#include "wdc/retraction.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "wdc/errors.hpp"
#include "wdc/numfmt.hpp"
#include "wdc/polytope.hpp"

namespace wdc {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// First s > 0 where another piece of p overtakes the upper envelope along
// x - s d. Pieces within the activity tolerance count as already tied.
double next_break(const MaxAffine& p, std::span<const double> x, std::span<const double> d) {
  const double top = p(x);
  const double tol = kActivityTol * (1.0 + std::abs(top));
  double lead = -kInf;
  for (const auto& q : p.pieces())
    if (q(x) >= top - tol) lead = std::max(lead, -dot(q.a, d));
  double s = kInf;
  for (const auto& q : p.pieces()) {
    const double v = q(x), slope = -dot(q.a, d);
    if (v >= top - tol || slope <= lead) continue;
    s = std::min(s, (top - v) / (slope - lead));
  }
  return s;
}

double rounding(const DCFunction& f, std::span<const double> x) {
  return 1e-13 * (1.0 + std::abs(f.g(x)) + std::abs(f.h(x)));
}

}  // namespace

void validate(const RetractionConfig& cfg) {
  if (!(cfg.eps_reg > 0.0) || !std::isfinite(cfg.eps_reg)) fail(ErrorKind::Validation, "eps_reg must be positive");
  if (!(cfg.step > 0.0) || !std::isfinite(cfg.step)) fail(ErrorKind::Validation, "step must be positive");
  if (cfg.tol_level && !(*cfg.tol_level > 0.0)) fail(ErrorKind::Validation, "tol_level must be positive");
  if (cfg.max_iter == 0) fail(ErrorKind::Validation, "max_iter must be positive");
}

double level_tolerance(const RetractionConfig& cfg, double fx0) {
  return cfg.tol_level ? *cfg.tol_level : 1e-9 * (1.0 + std::abs(fx0));
}

Vec descent_direction(const DCFunction& f, std::span<const double> x, double eps_min) {
  const auto mode = f.dim() <= 3 ? SubdiffMode::Clarke : SubdiffMode::Outer;
  const Vec p = min_norm_point(subdiff(f, x, mode).hull);
  const double n = norm(p);
  if (!(n >= eps_min) || n == 0.0)
    fail(ErrorKind::Regularity, "min-norm subgradient " + shortest(n) + " below " + shortest(eps_min) + " at " +
                                    fmt_point(x));
  return scaled(p, 1.0 / n);
}

RetractionTrace retract(const DCFunction& f, std::span<const double> x0, const RetractionConfig& cfg) {
  validate(cfg);
  if (x0.size() != f.dim()) fail(ErrorKind::Dimension, "start point dimension mismatch");
  RetractionTrace tr;
  tr.lip_f = f.lipschitz_bound();
  Vec x(x0.begin(), x0.end());
  double fx = f(x), t = 0.0;
  if (fx < -rounding(f, x)) fail(ErrorKind::Validation, "retract needs f(x0) >= 0");
  const double level = level_tolerance(cfg, fx);
  tr.samples.push_back({0.0, x, fx});
  // Rounding of the computed hull can dip just below an exact margin.
  const double eps_min = cfg.eps_reg * (1.0 - 1e-9);

  for (std::size_t it = 0; fx > level; ++it) {
    if (it >= cfg.max_iter) fail(ErrorKind::Limit, "retract exceeded max_iter at " + fmt_point(x));
    const Vec d = descent_direction(f, x, eps_min);
    double len = std::min({2.0 * cfg.step, next_break(f.g, x, d), next_break(f.h, x, d)});
    const double floor_len = 1e-15 * (1.0 + norm(x));
    Vec y;
    double fy = 0.0;
    for (;;) {
      if (len < floor_len) fail(ErrorKind::Regularity, "descent stalled at " + fmt_point(x));
      y = axpy(x, -len, d);
      fy = f(y);
      const double need = (1.0 - kTraceSlack) * cfg.eps_reg * len - rounding(f, x);
      if (fx - fy >= need) break;
      len *= 0.5;
      ++tr.halvings;
    }
    if (fy <= level) {
      double lo = 0.0, hi = len;
      while (hi - lo > 1e-12 * (1.0 + len)) {
        const double mid = 0.5 * (lo + hi);
        (f(axpy(x, -mid, d)) <= level ? hi : lo) = mid;
      }
      len = hi;
      y = axpy(x, -len, d);
      fy = f(y);
    }
    t += 0.5 * len;
    x = std::move(y);
    fx = fy;
    tr.samples.push_back({t, x, fx});
  }
  return tr;
}

TraceReport verify_trace(const DCFunction& f, const RetractionTrace& trace, const RetractionConfig& cfg,
                         std::size_t probe_rays) {
  validate(cfg);
  TraceReport r;
  r.worst_iv = r.worst_v_left = r.worst_v_right = kInf;
  if (trace.samples.empty()) {
    r.ok = false;
    r.failures.push_back("empty trace");
    return r;
  }
  const auto& s0 = trace.start();
  const auto& se = trace.end();
  const double level = level_tolerance(cfg, s0.fx);
  const double eps = cfg.eps_reg;
  auto flag = [&](std::string m) {
    r.ok = false;
    r.failures.push_back(std::move(m));
  };

  if (se.fx > level) flag("endpoint above the level tolerance");
  if (se.fx < -1e-12 * (1.0 + s0.fx)) flag("endpoint has negative value");
  for (std::size_t k = 0; k + 1 < trace.samples.size(); ++k) {
    const auto& a = trace.samples[k];
    const auto& b = trace.samples[k + 1];
    if (!(b.fx < a.fx)) flag("value not strictly decreasing at sample " + std::to_string(k + 1));
    const double dt = b.t - a.t;
    const double dx = dist(a.x, b.x);
    if (dt > 0) r.max_speed = std::max(r.max_speed, dx / dt);
    if (dx > 2.0 * dt * (1.0 + 1e-12) + 1e-15) flag("speed bound violated at sample " + std::to_string(k + 1));
  }

  for (const auto& s : trace.samples) {
    const double e = dist(s.x, se.x);
    if (e <= 0.0) continue;
    const double ratio = s.fx / (0.5 * eps * e);
    r.worst_iv = std::min(r.worst_iv, ratio);
  }
  if (r.worst_iv < 1.0 - kTraceSlack) flag("(iv) ratio " + shortest(r.worst_iv));

  r.time_ratio = s0.fx > 0 ? se.t / (s0.fx / eps) : 0.0;
  if (r.time_ratio > 1.1) flag("pseudo-time ratio " + shortest(r.time_ratio));

  r.dist_endpoint = dist(s0.x, se.x);
  r.dist_probe = r.dist_endpoint;
  if (r.dist_endpoint > 0.0) {
    // Rays out of x0; the first sampled hit of {f <= level} is refined by bisection.
    const std::size_t d = s0.x.size();
    std::vector<Vec> dirs;
    if (d == 2) {
      for (std::size_t k = 0; k < probe_rays; ++k) {
        const double a = 2.0 * kPi * static_cast<double>(k) / static_cast<double>(probe_rays);
        dirs.push_back({std::cos(a), std::sin(a)});
      }
    } else {
      for (std::size_t i = 0; i < d; ++i)
        for (double sgn : {1.0, -1.0}) {
          Vec u(d, 0.0);
          u[i] = sgn;
          dirs.push_back(u);
        }
    }
    const std::size_t steps = 64;
    for (const auto& u : dirs) {
      double prev = 0.0;
      for (std::size_t k = 1; k <= steps; ++k) {
        const double s = r.dist_probe * static_cast<double>(k) / static_cast<double>(steps);
        if (s >= r.dist_probe) break;
        if (f(axpy(s0.x, s, u)) <= level) {
          double lo = prev, hi = s;
          while (hi - lo > 1e-12 * (1.0 + hi)) {
            const double mid = 0.5 * (lo + hi);
            (f(axpy(s0.x, mid, u)) <= level ? hi : lo) = mid;
          }
          r.dist_probe = std::min(r.dist_probe, hi);
          break;
        }
        prev = s;
      }
    }
    r.dist_lower = trace.lip_f > 0 ? s0.fx / trace.lip_f : 0.0;
    r.worst_v_left = s0.fx / (0.5 * eps * r.dist_probe);
    r.worst_v_right = trace.lip_f * r.dist_probe / s0.fx;
    if (r.worst_v_left < 1.0 - kTraceSlack) flag("(v) lower inequality ratio " + shortest(r.worst_v_left));
    if (r.worst_v_right < 1.0 - kTraceSlack) flag("(v) upper inequality ratio " + shortest(r.worst_v_right));
  }
  return r;
}

BoundaryPathReport boundary_path(const DCFunction& f, const std::vector<Vec>& curve, const RetractionConfig& cfg,
                                 double slack) {
  validate(cfg);
  if (curve.size() < 2) fail(ErrorKind::Validation, "curve needs at least two points");
  for (const auto& p : curve)
    if (p.size() != f.dim()) fail(ErrorKind::Dimension, "curve point dimension mismatch");
  const double end_tol = level_tolerance(cfg, 0.0);
  if (f(curve.front()) > end_tol || f(curve.back()) > end_tol)
    fail(ErrorKind::Validation, "curve endpoints must lie on the zero set");
  BoundaryPathReport r;
  r.points.reserve(curve.size());
  for (const auto& p : curve) r.points.push_back(retract(f, p, cfg).end().x);
  r.input_diameter = diameter(VPolytope{curve});
  r.output_diameter = diameter(VPolytope{r.points});
  r.bound = 6.0 / cfg.eps_reg * r.input_diameter + slack;
  r.lip_bound = 2.0 * r.input_diameter * (1.0 + 2.0 * f.lipschitz_bound() / cfg.eps_reg) + slack;
  r.ok = r.output_diameter <= r.bound;
  return r;
}

std::string trace_csv(const RetractionTrace& trace) {
  std::ostringstream os;
  const std::size_t d = trace.samples.empty() ? 0 : trace.start().x.size();
  os << "t";
  for (std::size_t i = 0; i < d; ++i) os << ",x" << i;
  os << ",f\n";
  for (const auto& s : trace.samples) {
    os << shortest(s.t);
    for (double v : s.x) os << ',' << shortest(v);
    os << ',' << shortest(s.fx) << '\n';
  }
  return os.str();
}

std::string trace_svg(const std::vector<RetractionTrace>& traces) {
  double xlo = kInf, xhi = -kInf, ylo = kInf, yhi = -kInf;
  for (const auto& tr : traces)
    for (const auto& s : tr.samples) {
      if (s.x.size() != 2) fail(ErrorKind::Dimension, "svg export needs planar traces");
      xlo = std::min(xlo, s.x[0]), xhi = std::max(xhi, s.x[0]);
      ylo = std::min(ylo, s.x[1]), yhi = std::max(yhi, s.x[1]);
    }
  if (!(xlo <= xhi)) xlo = ylo = -1, xhi = yhi = 1;
  const double span = std::max({xhi - xlo, yhi - ylo, 1e-9});
  const double px = 512.0, pad = 8.0, k = (px - 2 * pad) / span;
  auto sx = [&](double v) { return shortest(pad + (v - xlo) * k); };
  auto sy = [&](double v) { return shortest(px - pad - (v - ylo) * k); };
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"512\" height=\"512\" viewBox=\"0 0 512 512\">\n";
  for (const auto& tr : traces) {
    if (tr.samples.empty()) continue;
    os << "<polyline fill=\"none\" stroke=\"#1f5fa8\" stroke-width=\"1\" points=\"";
    for (std::size_t i = 0; i < tr.samples.size(); ++i)
      os << (i ? " " : "") << sx(tr.samples[i].x[0]) << ',' << sy(tr.samples[i].x[1]);
    os << "\"/>\n";
    os << "<circle r=\"2\" fill=\"#c0392b\" cx=\"" << sx(tr.end().x[0]) << "\" cy=\"" << sy(tr.end().x[1])
       << "\"/>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace wdc
