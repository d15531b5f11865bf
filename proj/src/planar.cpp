#include "wdc/planar.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "wdc/errors.hpp"
#include "wdc/numfmt.hpp"

namespace wdc {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kAngleTol = 1e-9;

double angle_of(P2 p) { return std::atan2(p.y, p.x); }

// Polyline of one half (sigma = +1: t >= 0, -1: t <= 0) of the graph of p,
// rotated by `rot`: vertices from the origin through the knots, then a ray.
struct Walk {
  std::vector<P2> verts;
  P2 ray;
  double limit = kInf;  // gauge (and, if asked, X) monotone up to this radius
  int xsign = 0;
};

Walk walk_half(const Pwa1d& p, double rot, int sigma, bool need_graph) {
  Walk w;
  w.verts.push_back(rotate(P2{0.0, p(0.0)}, rot));
  std::vector<double> ts;
  for (double k : p.knots)
    if (sigma * k > 0) ts.push_back(k);
  if (sigma < 0) std::reverse(ts.begin(), ts.end());
  for (double t : ts) w.verts.push_back(rotate(P2{t, p(t)}, rot));
  const double outer = sigma > 0 ? p.right_slope : p.left_slope;
  w.ray = rotate(P2{double(sigma), sigma * outer}, rot);
  const P2 d0 = w.verts.size() > 1 ? w.verts[1] - w.verts[0] : w.ray;
  w.xsign = d0.x > 1e-12 * norm(d0) ? 1 : (d0.x < -1e-12 * norm(d0) ? -1 : 0);
  if (need_graph && w.xsign == 0) fail(ErrorKind::Validation, "vertical tangent at the apex");
  for (std::size_t k = 0; k < w.verts.size(); ++k) {
    const P2 a = w.verts[k];
    const P2 d = k + 1 < w.verts.size() ? w.verts[k + 1] - a : w.ray;
    if (k > 0 && dot(a, d) <= 0.0) {
      w.limit = norm(a);
      break;
    }
    if (need_graph && d.x * w.xsign <= 0.0) {
      w.limit = norm(a);
      break;
    }
  }
  return w;
}

// Walk cut at radius rho (rho below the walk limit): vertices up to the crossing.
std::vector<P2> cut_walk(const Walk& w, double rho) {
  std::vector<P2> out{w.verts.front()};
  for (std::size_t k = 0; k < w.verts.size(); ++k) {
    const P2 a = w.verts[k];
    const bool last = k + 1 == w.verts.size();
    const P2 d = last ? w.ray : w.verts[k + 1] - a;
    if (last || norm(w.verts[k + 1]) >= rho) {
      const double ad = dot(a, d), dd = dot(d, d);
      const double lam = (-ad + std::sqrt(std::max(0.0, ad * ad - dd * (dot(a, a) - rho * rho)))) / dd;
      out.push_back(a + lam * d);
      return out;
    }
    out.push_back(w.verts[k + 1]);
  }
  return out;
}

Pwa1d pwa_of(const DCFunction& p) {
  if (p.dim() != 1) fail(ErrorKind::Dimension, "boundary function must be one-dimensional");
  return Pwa1d::from_dc(p);
}

LocalGraph localize(const Pwa1d& p, double src, double dst, double rho, GraphHalf half) {
  if (!(rho > 0.0)) fail(ErrorKind::Validation, "radius must be positive");
  if (std::abs(p(0.0)) > 1e-12) fail(ErrorKind::Validation, "curve must pass through the apex");
  const double rot = src - dst;
  std::vector<P2> pts;
  LocalGraph g;
  g.max_radius = kInf;
  int signs[2] = {0, 0};
  int n = 0;
  for (int sigma : {1, -1}) {
    if ((sigma > 0 && half == GraphHalf::Negative) || (sigma < 0 && half == GraphHalf::Positive)) continue;
    const Walk w = walk_half(p, rot, sigma, true);
    g.max_radius = std::min(g.max_radius, w.limit);
    if (w.limit < rho * (1.0 + 1e-12))
      fail(ErrorKind::Validation, "radius " + shortest(rho) + " beyond the monotone range " + shortest(w.limit));
    signs[n++] = w.xsign;
    for (const P2 q : cut_walk(w, rho)) pts.push_back(q);
  }
  if (n == 2 && signs[0] == signs[1]) fail(ErrorKind::Validation, "curve folds back over the frame axis");
  std::sort(pts.begin(), pts.end(), [](P2 a, P2 b) { return a.x < b.x; });
  Pwa1d f;
  for (const P2 q : pts) {
    if (!f.knots.empty() && q.x - f.knots.back() <= 1e-15 * (1.0 + std::abs(q.x))) continue;
    f.knots.push_back(q.x);
    f.values.push_back(q.y);
  }
  // Origin is exact; rounding of the rotation is dropped there.
  for (std::size_t k = 0; k < f.knots.size(); ++k)
    if (std::abs(f.knots[k]) <= 1e-15) f.knots[k] = 0.0, f.values[k] = 0.0;
  const std::size_t m = f.knots.size();
  if (m >= 2) {
    f.left_slope = (f.values[1] - f.values[0]) / (f.knots[1] - f.knots[0]);
    f.right_slope = (f.values[m - 1] - f.values[m - 2]) / (f.knots[m - 1] - f.knots[m - 2]);
  }
  g.alpha = f.knots.front();
  g.beta = f.knots.back();
  g.f = f.simplified();
  return g;
}

}  // namespace

const char* to_string(GermSide s) {
  switch (s) {
    case GermSide::Below: return "below";
    case GermSide::Above: return "above";
    case GermSide::On: return "on";
  }
  return "?";
}

const char* to_string(LocalCondition c) {
  switch (c) {
    case LocalCondition::IsolatedPoint: return "isolated-point";
    case LocalCondition::Degenerate: return "degenerate";
    case LocalCondition::Complement: return "complement";
  }
  return "?";
}

const char* to_string(PlanarType t) {
  static const char* names[] = {"T1", "T2", "T3", "T4", "T5"};
  return names[static_cast<int>(t) - 1];
}

bool RawGerm::contains(P2 p, double tol) const {
  const P2 d = p - x;
  for (const auto& c : curves) {
    const P2 q = to_frame(d, c.angle);
    const double y = c.phi(Vec{q.x});
    switch (c.side) {
      case GermSide::Below:
        if (q.y > y + tol) return false;
        break;
      case GermSide::Above:
        if (q.y < y - tol) return false;
        break;
      case GermSide::On:
        if (std::abs(q.y - y) > tol) return false;
        break;
    }
  }
  return true;
}

bool PlanarLocalModel::contains(P2 p, double tol) const {
  const P2 d = p - x;
  if (norm(d) >= rho) return false;
  switch (condition) {
    case LocalCondition::IsolatedPoint: return norm(d) <= tol;
    case LocalCondition::Degenerate: return in_degenerate_sector(degenerate, d, tol);
    case LocalCondition::Complement:
      for (const auto& s : sectors) {
        if (norm(d) >= s.radius) continue;
        const P2 q = to_frame(d, s.angle);
        if (q.y > s.phi(Vec{q.x}) + tol) return false;
      }
      return true;
  }
  return false;
}

void validate(const PlanarLocalModel& m) {
  if (!(m.rho > 0.0)) fail(ErrorKind::Validation, "model radius must be positive");
  if (m.condition == LocalCondition::Degenerate) {
    const auto c = validate_sector(m.degenerate);
    if (!c.ok) fail(ErrorKind::Validation, "degenerate sector: " + c.reason);
  } else if (m.condition == LocalCondition::Complement) {
    if (m.sectors.empty()) fail(ErrorKind::Validation, "complement model needs at least one sector");
    for (std::size_t i = 0; i < m.sectors.size(); ++i) {
      const auto c = validate_sector(m.sectors[i]);
      if (!c.ok) fail(ErrorKind::Validation, "sector " + std::to_string(i) + ": " + c.reason);
    }
  }
}

LocalGraph graph_localize(const DCFunction& p, double src_angle, double dst_angle, double rho, GraphHalf half) {
  return localize(pwa_of(p), src_angle, dst_angle, rho, half);
}

double graph_localize_limit(const DCFunction& p, double src_angle, double dst_angle, double cap, GraphHalf half) {
  const Pwa1d q = pwa_of(p);
  double lim = cap;
  for (int sigma : {1, -1}) {
    if ((sigma > 0 && half == GraphHalf::Negative) || (sigma < 0 && half == GraphHalf::Positive)) continue;
    lim = std::min(lim, walk_half(q, src_angle - dst_angle, sigma, true).limit);
  }
  return lim;
}

namespace {

struct Branch {
  Pwa1d p;
  double angle = 0.0;  // frame of p
  int sigma = 1;
  P2 dir;              // unit tangent at the apex
  double limit = kInf;
  std::size_t group = 0;
  int sector = -1;     // complement models: owning sector
};

GraphHalf half_of(int sigma) { return sigma > 0 ? GraphHalf::Positive : GraphHalf::Negative; }

Branch make_branch(const Pwa1d& p, double angle, int sigma) {
  Branch b;
  b.p = p;
  b.angle = angle;
  b.sigma = sigma;
  const P2 t = sigma > 0 ? P2{1.0, p.slope(0.0, Side::Right)} : P2{-1.0, -p.slope(0.0, Side::Left)};
  b.dir = (1.0 / norm(t)) * rotate(t, angle);
  b.limit = walk_half(p, angle, sigma, false).limit;
  return b;
}

// World polyline of a branch cut at radius rho.
std::vector<P2> branch_poly(const Branch& b, double frame, double rho) {
  const Walk w = walk_half(b.p, b.angle - frame, b.sigma, false);
  return cut_walk(w, std::min(rho, w.limit));
}

P2 branch_point(const Branch& b, double s) { return cut_walk(walk_half(b.p, b.angle, b.sigma, false), s).back(); }

// Smallest norm of a common point of segments [a0,a1] and [b0,b1] (inf if none).
double seg_meet(P2 a0, P2 a1, P2 b0, P2 b1) {
  const P2 r = a1 - a0, s = b1 - b0;
  const double den = cross(r, s);
  if (std::abs(den) > 1e-14 * norm(r) * norm(s)) {
    const double t = cross(b0 - a0, s) / den, u = cross(b0 - a0, r) / den;
    if (t < -1e-12 || t > 1 + 1e-12 || u < -1e-12 || u > 1 + 1e-12) return kInf;
    return norm(a0 + t * r);
  }
  if (std::abs(cross(b0 - a0, r)) > 1e-14 * norm(r) * (norm(r) + norm(b0 - a0))) return kInf;
  // Collinear: overlap endpoints.
  const double rr = dot(r, r);
  if (rr == 0.0) return kInf;
  double t0 = dot(b0 - a0, r) / rr, t1 = dot(b1 - a0, r) / rr;
  if (t0 > t1) std::swap(t0, t1);
  t0 = std::max(t0, 0.0);
  t1 = std::min(t1, 1.0);
  if (t0 > t1) return kInf;
  return std::min(norm(a0 + t0 * r), norm(a0 + t1 * r));
}

std::vector<Branch> model_branches(const PlanarLocalModel& m) {
  std::vector<Branch> out;
  if (m.condition == LocalCondition::Degenerate) {
    out.push_back(make_branch(Pwa1d::from_dc(m.degenerate.lo), m.degenerate.angle, 1));
    out.push_back(make_branch(Pwa1d::from_dc(m.degenerate.hi), m.degenerate.angle, 1));
  } else if (m.condition == LocalCondition::Complement) {
    for (std::size_t i = 0; i < m.sectors.size(); ++i)
      for (int sigma : {1, -1}) {
        out.push_back(make_branch(Pwa1d::from_dc(m.sectors[i].phi), m.sectors[i].angle, sigma));
        out.back().sector = static_cast<int>(i);
      }
  }
  return out;
}

// Min X over the parts of the polyline inside |Y| <= 2uX, skipping the apex.
double wedge_entry(const std::vector<P2>& poly, double u) {
  double best = kInf;
  for (std::size_t k = 0; k + 1 < poly.size(); ++k) {
    const P2 a = poly[k], d = poly[k + 1] - a;
    double t0 = 0.0, t1 = 1.0;
    bool empty = false;
    for (double sy : {1.0, -1.0}) {
      // sy*Y - 2uX <= 0
      const double v0 = sy * a.y - 2 * u * a.x, dv = sy * d.y - 2 * u * d.x;
      if (dv == 0.0) {
        if (v0 > 0.0) empty = true;
      } else if (dv > 0.0) {
        t1 = std::min(t1, -v0 / dv);
      } else {
        t0 = std::max(t0, -v0 / dv);
      }
    }
    if (empty || t0 > t1 || (k == 0 && t1 - t0 <= 1e-12)) continue;
    best = std::min({best, a.x + t0 * d.x, a.x + t1 * d.x});
  }
  return best;
}

// First X > 0 with |W(X)| > uX, up to xmax.
double cone_exit(const Pwa1d& w, double u, double xmax) {
  Vec xs{0.0};
  for (double k : w.knots)
    if (k > 0.0 && k < xmax) xs.push_back(k);
  xs.push_back(xmax);
  for (std::size_t k = 0; k + 1 < xs.size(); ++k)
    for (double sy : {1.0, -1.0}) {
      const double a = xs[k], b = xs[k + 1];
      const double v0 = sy * w(a) - u * a, v1 = sy * w(b) - u * b;
      if (v1 > 0.0) return v0 >= 0.0 ? a : a + (b - a) * (-v0) / (v1 - v0);
    }
  return xmax;
}

}  // namespace

PlanarLocalModel characterize_local(const RawGerm& g) {
  if (!(g.rho_cap > 0.0)) fail(ErrorKind::Validation, "radius cap must be positive");
  if (g.curves.empty()) fail(ErrorKind::Validation, "germ has no boundary curves");
  std::vector<Branch> br;
  for (const auto& c : g.curves) {
    const Pwa1d p = pwa_of(c.phi);
    if (std::abs(p(0.0)) > 1e-12) fail(ErrorKind::Validation, "germ curve misses the point");
    for (int sigma : {1, -1}) br.push_back(make_branch(p, c.angle, sigma));
  }
  // Group branches by tangent direction.
  std::vector<std::vector<std::size_t>> groups;
  std::vector<double> gangle;
  for (std::size_t i = 0; i < br.size(); ++i) {
    const double a = angle_of(br[i].dir);
    std::size_t k = 0;
    while (k < groups.size() && std::abs(wrap_angle(a - gangle[k])) > kAngleTol) ++k;
    if (k == groups.size()) {
      groups.emplace_back();
      gangle.push_back(a);
    }
    groups[k].push_back(i);
    br[i].group = k;
  }
  double event = kInf;
  for (const auto& b : br) event = std::min(event, b.limit);
  for (const auto& grp : groups)
    if (grp.size() > 1)
      for (std::size_t i : grp) {
        const Walk w = walk_half(br[i].p, br[i].angle, br[i].sigma, false);
        if (w.verts.size() > 1) event = std::min(event, norm(w.verts[1]));
      }
  const double reach = 2.0 * g.rho_cap;
  std::vector<std::vector<P2>> polys;
  for (const auto& b : br) polys.push_back(branch_poly(b, 0.0, reach));
  const double apex_tol = 1e-12 * (1.0 + g.rho_cap);
  for (std::size_t i = 0; i < br.size(); ++i)
    for (std::size_t j = i + 1; j < br.size(); ++j) {
      if (br[i].group == br[j].group) continue;
      for (std::size_t a = 0; a + 1 < polys[i].size(); ++a)
        for (std::size_t b = 0; b + 1 < polys[j].size(); ++b) {
          const double d = seg_meet(polys[i][a], polys[i][a + 1], polys[j][b], polys[j][b + 1]);
          if (d > apex_tol) event = std::min(event, d);
        }
    }
  double rho = std::min(g.rho_cap, 0.5 * event);

  // Labels on the circle of radius rho/2, groups in CCW order.
  const double s = 0.5 * rho;
  std::vector<double> psi(groups.size());
  for (std::size_t k = 0; k < groups.size(); ++k) psi[k] = angle_of(branch_point(br[groups[k][0]], s));
  std::vector<std::size_t> order(groups.size());
  for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return wrap_positive(psi[a]) < wrap_positive(psi[b]); });
  const std::size_t n = order.size();
  const double tol = 1e-9 * (1.0 + s);
  // Cyclic sequence group, region, group, region, ...
  std::vector<bool> in(2 * n);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t ga = order[k], gb = order[(k + 1) % n];
    in[2 * k] = g.contains(g.x + branch_point(br[groups[ga][0]], s), tol);
    const double span = n == 1 ? 2 * kPi : wrap_positive(psi[gb] - psi[ga]);
    const double mid = psi[ga] + 0.5 * span;
    in[2 * k + 1] = g.contains(g.x + P2{s * std::cos(mid), s * std::sin(mid)}, tol);
  }
  for (std::size_t k = 0; k < n; ++k)
    if (in[2 * k + 1] && (!in[2 * k] || !in[(2 * k + 2) % (2 * n)]))
      fail(ErrorKind::Consistency, "germ is not closed near its boundary curves");

  PlanarLocalModel m;
  m.x = g.x;
  const std::size_t n_in = std::count(in.begin(), in.end(), true);
  if (n_in == 2 * n) fail(ErrorKind::Validation, "point is interior to the germ");
  if (n_in == 0) {
    m.condition = LocalCondition::IsolatedPoint;
    m.rho = rho;
    return m;
  }
  std::size_t n_in_groups = 0, n_in_regions = 0;
  for (std::size_t e = 0; e < 2 * n; ++e) (e % 2 ? n_in_regions : n_in_groups) += in[e];
  if (n_in_regions == 0 && n_in_groups == 1) {
    std::size_t e = 0;
    while (!in[e]) ++e;
    const Branch& b = br[groups[order[e / 2]][0]];
    const double theta = wrap_positive(angle_of(b.dir));
    const double lim = walk_half(b.p, b.angle - theta, b.sigma, true).limit;
    if (lim < rho * (1.0 + 1e-9)) rho = 0.5 * lim;
    const Pwa1d f = localize(b.p, b.angle, theta, rho, half_of(b.sigma)).f.zero_extended_left();
    m.condition = LocalCondition::Degenerate;
    m.rho = rho;
    m.degenerate = DegenerateSectorSpec{theta, rho, f.to_dc(), f.to_dc()};
    return m;
  }
  // Out runs between in-groups.
  struct Run {
    const Branch* a;
    const Branch* b;
    double theta;
  };
  std::vector<Run> runs;
  std::size_t start = 0;
  while (!(start % 2 == 0 && in[start] && !in[(start + 1) % (2 * n)])) ++start;
  for (std::size_t e = start, seen = 0; seen < 2 * n; ++seen, e = (e + 1) % (2 * n)) {
    if (!(e % 2 == 0 && in[e] && !in[(e + 1) % (2 * n)])) continue;
    std::size_t f = (e + 1) % (2 * n);
    while (!in[f]) f = (f + 1) % (2 * n);
    if (f == e) fail(ErrorKind::Consistency, "sector closes on its own boundary group");
    const Branch& ba = br[groups[order[e / 2]][0]];
    const Branch& bb = br[groups[order[f / 2]][0]];
    const double aa = angle_of(ba.dir), ab = angle_of(bb.dir);
    const double span = wrap_positive(ab - aa);
    runs.push_back(Run{&ba, &bb, wrap_angle(aa + 0.5 * span - 0.5 * kPi)});
  }
  for (const auto& r : runs)
    for (const Branch* b : {r.a, r.b}) {
      const double lim = walk_half(b->p, b->angle - r.theta, b->sigma, true).limit;
      if (lim < rho * (1.0 + 1e-9)) rho = std::min(rho, 0.5 * lim);
    }
  m.condition = LocalCondition::Complement;
  m.rho = rho;
  for (const auto& r : runs) {
    const Pwa1d pa = localize(r.a->p, r.a->angle, r.theta, rho, half_of(r.a->sigma)).f;
    const Pwa1d pb = localize(r.b->p, r.b->angle, r.theta, rho, half_of(r.b->sigma)).f;
    Pwa1d phi;
    for (double k : pb.knots)
      if (k < 0.0) phi.knots.push_back(k), phi.values.push_back(pb(k));
    phi.knots.push_back(0.0);
    phi.values.push_back(0.0);
    for (double k : pa.knots)
      if (k > 0.0) phi.knots.push_back(k), phi.values.push_back(pa(k));
    phi.left_slope = pb.left_slope;
    phi.right_slope = pa.right_slope;
    m.sectors.push_back(OpenSectorSpec{r.theta, rho, phi.simplified().to_dc()});
  }
  return m;
}

TypeTag classify_direction(const PlanarLocalModel& m, P2 v, int min_k) {
  if (!(norm(v) > 0.0)) fail(ErrorKind::Validation, "direction must be nonzero");
  if (min_k < 0) fail(ErrorKind::Validation, "min_k must be nonnegative");
  const double psi = angle_of(v);
  const auto br = model_branches(m);
  std::vector<const Branch*> match, foreign;
  for (const auto& b : br) (std::abs(wrap_angle(angle_of(b.dir) - psi)) <= kAngleTol ? match : foreign).push_back(&b);
  double dmin = kPi;
  for (const Branch* b : foreign) dmin = std::min(dmin, std::abs(wrap_angle(angle_of(b->dir) - psi)));
  TypeTag tag;
  tag.k = min_k;
  while (std::atan(2.0 * std::ldexp(1.0, -tag.k)) >= dmin - kAngleTol) {
    if (++tag.k > 60) fail(ErrorKind::Consistency, "foreign tangent too close to the direction");
  }
  tag.u = std::ldexp(1.0, -tag.k);
  auto witness = [&](const Branch* b) { return localize(b->p, b->angle, psi, m.rho, half_of(b->sigma)).f; };
  const Branch* bu = nullptr;
  const Branch* bl = nullptr;
  switch (m.condition) {
    case LocalCondition::IsolatedPoint: tag.type = PlanarType::T1; break;
    case LocalCondition::Degenerate:
      if (match.size() == 2) {
        tag.type = PlanarType::T5;
        bl = &br[0];
        bu = &br[1];
      } else {
        tag.type = PlanarType::T1;
      }
      break;
    case LocalCondition::Complement: {
      for (const Branch* b : match) (b->sigma > 0 ? bu : bl) = b;
      if (bu && bl) {
        tag.type = PlanarType::T5;
      } else if (bu) {
        tag.type = PlanarType::T3;
      } else if (bl) {
        tag.type = PlanarType::T4;
      } else {
        tag.type = PlanarType::T2;
        for (std::size_t i = 0; i < m.sectors.size(); ++i) {
          const double a = angle_of(br[2 * i].dir), b = angle_of(br[2 * i + 1].dir);
          const double off = wrap_positive(psi - a);
          if (off > 0.0 && off < wrap_positive(b - a)) tag.type = PlanarType::T1;
        }
      }
      break;
    }
  }
  double r = m.rho / std::sqrt(1.0 + 4.0 * tag.u * tag.u) * (1.0 - 1e-9);
  if (bu) tag.U = witness(bu);
  if (bl) tag.L = witness(bl);
  for (const auto& w : {tag.U, tag.L})
    if (w) r = std::min(r, cone_exit(*w, tag.u, r));
  for (const Branch* b : foreign) r = std::min(r, wedge_entry(branch_poly(*b, psi, m.rho), tag.u));
  for (const Branch* b : match)
    if (b != bu && b != bl) r = std::min(r, wedge_entry(branch_poly(*b, psi, m.rho), tag.u));
  if (!(r > 0.0)) fail(ErrorKind::Consistency, "no admissible cone radius");
  tag.r = r;
  return tag;
}

std::array<bool, 5> type_predicates(const PlanarLocalModel& m, P2 v, double r, double u, std::size_t probes) {
  if (probes < 2 || probes % 2) fail(ErrorKind::Validation, "probe count must be even and at least 2");
  if (!(r > 0.0) || !(u > 0.0)) fail(ErrorKind::Validation, "cone radius and slope must be positive");
  const double psi = angle_of(v);
  struct Probe {
    double X, Y;
    bool in;
  };
  std::vector<Probe> pr;
  auto add = [&](double X, double Y) { pr.push_back({X, Y, m.contains(m.x + rotate(P2{X, Y}, psi))}); };
  const auto n = static_cast<double>(probes);
  for (std::size_t i = 0; i < probes; ++i) {
    const double X = r * (i + 0.5) / n;
    for (std::size_t j = 0; j < probes; ++j) add(X, 2 * u * X * (-1.0 + (2.0 * j + 1.0) / n));
  }
  std::vector<Pwa1d> cands;
  for (const auto& b : model_branches(m)) {
    if (std::abs(wrap_angle(angle_of(b.dir) - psi)) > kAngleTol) continue;
    try {
      cands.push_back(localize(b.p, b.angle, psi, m.rho, half_of(b.sigma)).f);
    } catch (const Error&) {
    }
  }
  for (const auto& w : cands)
    for (std::size_t i = 0; i < probes; ++i) {
      const double X = r * (i + 0.5) / n;
      if (std::abs(w(X)) <= 2 * u * X) add(X, w(X));
    }
  auto in_cone = [&](const Pwa1d& w) { return cone_exit(w, u * (1.0 + 1e-9), r) >= r; };
  const double tol = 1e-12;
  std::array<bool, 5> out{};
  out[0] = std::none_of(pr.begin(), pr.end(), [](const Probe& p) { return p.in; });
  out[1] = std::all_of(pr.begin(), pr.end(), [](const Probe& p) { return p.in; });
  for (const auto& w : cands) {
    if (!in_cone(w)) continue;
    out[2] = out[2] || std::all_of(pr.begin(), pr.end(), [&](const Probe& p) { return p.in == (p.Y <= w(p.X) + tol); });
    out[3] = out[3] || std::all_of(pr.begin(), pr.end(), [&](const Probe& p) { return p.in == (p.Y >= w(p.X) - tol); });
    for (const auto& l : cands) {
      if (!in_cone(l)) continue;
      out[4] = out[4] || std::all_of(pr.begin(), pr.end(), [&](const Probe& p) {
                 return l(p.X) <= w(p.X) + tol && p.in == (p.Y >= l(p.X) - tol && p.Y <= w(p.X) + tol);
               });
    }
  }
  return out;
}

PlanarAura build_planar_aura(const PlanarLocalModel& m, std::size_t probes) {
  validate(m);
  const Vec shift{-m.x.x, -m.x.y};
  const std::vector<Vec> id{{1.0, 0.0}, {0.0, 1.0}};
  PlanarAura out;
  switch (m.condition) {
    case LocalCondition::IsolatedPoint: {
      std::vector<AffineMap> pieces;
      for (double sx : {1.0, -1.0})
        for (double sy : {1.0, -1.0}) pieces.push_back(AffineMap{{sx, sy}, -sx * m.x.x - sy * m.x.y});
      out.F = DCFunction::convex(MaxAffine(std::move(pieces)));
      break;
    }
    case LocalCondition::Degenerate:
      out.F = precompose(aura_degenerate_sector(m.degenerate.lo, m.degenerate.hi, m.degenerate.angle), id, shift);
      break;
    case LocalCondition::Complement: out.F = precompose(aura_sector_complement(m.sectors), id, shift); break;
  }
  const double h = m.rho / std::sqrt(2.0) * 0.999;
  SamplingPlan plan;
  plan.lo = {m.x.x - h, m.x.y - h};
  plan.hi = {m.x.x + h, m.x.y + h};
  plan.local = true;
  out.report = check_weak_regularity(out.F, 0.0, 0.25 * m.rho, plan);
  if (!(out.report.margin > 0.0))
    fail(ErrorKind::Consistency, "synthesized aura is not weakly regular near " + fmt_point(out.report.argmin));
  SamplingPlan pp;
  pp.lo = {m.x.x - m.rho, m.x.y - m.rho};
  pp.hi = {m.x.x + m.rho, m.x.y + m.rho};
  pp.samples = 2 * probes + 16;
  const double ftol = 1e-12 * (1.0 + m.rho);
  for (const Vec& q : plan_points(pp)) {
    if (out.probes == probes) break;
    const P2 p = to_p2(q);
    if (norm(p - m.x) >= m.rho) continue;
    ++out.probes;
    if ((out.F(q) <= ftol) != m.contains(p))
      fail(ErrorKind::Consistency, "aura zero set differs from the model at " + fmt_point(q));
  }
  return out;
}

std::string model_svg(const PlanarLocalModel& m) {
  const double px = 256.0, sc = px / (2.2 * m.rho);
  auto X = [&](P2 p) { return shortest(px / 2 + sc * (p.x - m.x.x)); };
  auto Y = [&](P2 p) { return shortest(px / 2 - sc * (p.y - m.x.y)); };
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"256\" height=\"256\">\n";
  os << "<circle cx=\"128\" cy=\"128\" r=\"" << shortest(sc * m.rho) << "\" fill=\"none\" stroke=\"#999\"/>\n";
  os << "<circle cx=\"128\" cy=\"128\" r=\"2\" fill=\"black\"/>\n";
  for (const auto& b : model_branches(m)) {
    os << "<polyline fill=\"none\" stroke=\"" << (b.sector >= 0 ? "red" : "blue") << "\" points=\"";
    for (const P2 q : branch_poly(b, 0.0, m.rho)) os << X(m.x + q) << ',' << Y(m.x + q) << ' ';
    os << "\"/>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace wdc
