#include "wdc/singular.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "wdc/errors.hpp"
#include "wdc/numfmt.hpp"
#include "wdc/topology.hpp"

namespace wdc {
namespace {

P2 grad2(const AffineMap& m) { return {m.a[0], m.a[1]}; }

double hull_diameter(const VPolytope& h) {
  double d = 0.0;
  for (std::size_t i = 0; i < h.vertices.size(); ++i)
    for (std::size_t j = i + 1; j < h.vertices.size(); ++j) d = std::max(d, dist(h.vertices[i], h.vertices[j]));
  return d;
}

double hull_max_norm(const VPolytope& h) {
  double d = 0.0;
  for (const auto& v : h.vertices) d = std::max(d, norm(v));
  return d;
}

bool on_box_edge(const Box2& b, P2 p, double tol) {
  return std::abs(p.x - b.xlo) <= tol || std::abs(p.x - b.xhi) <= tol || std::abs(p.y - b.ylo) <= tol ||
         std::abs(p.y - b.yhi) <= tol;
}

void finish(SegmentCover& c, double tol) {
  c.segments = merge_collinear(c.segments, tol);
  for (const auto& s : c.segments)
    if (on_box_edge(c.box, s.p, tol) || on_box_edge(c.box, s.q, tol)) c.clipped = true;
  if (c.clipped) c.note = "segments clipped to the box";
}

void check_box(const Box2& b) {
  if (!(b.xlo < b.xhi && b.ylo < b.yhi)) fail(ErrorKind::Validation, "box must have positive extent");
}

double seg_dist(const Seg2& s, P2 p) {
  const P2 d = s.q - s.p;
  const double dd = dot(d, d);
  const double t = dd > 0.0 ? std::clamp(dot(p - s.p, d) / dd, 0.0, 1.0) : 0.0;
  return norm(p - (s.p + t * d));
}

}  // namespace

SegmentCover singular_set_pwa_2d(const MaxAffine& g, double eps, const Box2& box) {
  if (g.dim() != 2) fail(ErrorKind::Dimension, "singular sets need d = 2");
  if (!(eps > 0.0)) fail(ErrorKind::Validation, "eps must be positive");
  check_box(box);
  SegmentCover c;
  c.box = box;
  c.threshold = eps;
  const double gap = eps * (1.0 + 1e-12);
  for (auto& s : seam_segments(g, box, SourceKind::GSeam)) {
    const auto& pv = s.prov.front();
    if (norm(grad2(g[pv.i]) - grad2(g[pv.j])) > gap) c.segments.push_back(std::move(s));
  }
  const double tol = 1e-12 * (1.0 + box.scale());
  finish(c, tol);
  const DCFunction f = DCFunction::convex(g);
  for (const auto& s : c.segments)
    for (const P2 p : {s.p, s.mid(), s.q}) {
      const auto h = subdiff(f, to_vec(p), SubdiffMode::ConvexPart);
      if (!(hull_diameter(h.hull) > eps))
        fail(ErrorKind::Consistency, "singular segment fails the diameter test at " + fmt_point(to_vec(p)));
      ++c.verified;
    }
  if (c.segments.empty()) c.note = "empty";
  return c;
}

SegmentCover zero_set_large_subdiff_2d(const DCFunction& f, double eps, const Box2& box) {
  if (f.dim() != 2) fail(ErrorKind::Dimension, "zero-set covers need d = 2");
  if (!(eps > 0.0)) fail(ErrorKind::Validation, "eps must be positive");
  check_box(box);
  SegmentCover c;
  c.box = box;
  c.threshold = eps;
  const Arrangement arr = dc_arrangement(f, box, {0.0});
  const double ztol = 1e-10 * (1.0 + box.scale());
  auto zero = [&](P2 p) { return std::abs(f(to_vec(p))) <= ztol; };
  auto large = [&](P2 p) { return hull_max_norm(subdiff(f, to_vec(p), SubdiffMode::Clarke).hull) > eps; };
  std::vector<bool> covered(arr.vertices.size(), false);
  for (const auto& e : arr.edges) {
    const P2 a = arr.vertices[e.a], b = arr.vertices[e.b];
    if (!zero(a) || !zero(b) || !zero(0.5 * (a + b))) continue;
    if (!large(0.5 * (a + b))) continue;
    c.segments.push_back(Seg2{a, b, arr.sources[e.source].prov});
    covered[e.a] = covered[e.b] = true;
  }
  for (std::size_t v = 0; v < arr.vertices.size(); ++v)
    if (!covered[v] && zero(arr.vertices[v]) && large(arr.vertices[v]))
      c.segments.push_back(Seg2{arr.vertices[v], arr.vertices[v], {}});
  const double tol = 1e-9 * (1.0 + box.scale());
  finish(c, tol);
  for (const auto& s : c.segments)
    for (const P2 p : {s.p, s.mid(), s.q}) {
      if (!zero(p) || !large(p))
        fail(ErrorKind::Consistency, "cover segment fails the zero-set test at " + fmt_point(to_vec(p)));
      ++c.verified;
    }
  if (c.segments.empty()) c.note = "empty";
  return c;
}

BoundaryCover boundary_cover_2d(const DCFunction& f, double eps, std::optional<Box2> box) {
  if (f.dim() != 2) fail(ErrorKind::Dimension, "boundary covers need d = 2");
  SamplingPlan plan;
  if (box) {
    check_box(*box);
    plan.lo = {box->xlo, box->ylo};
    plan.hi = {box->xhi, box->yhi};
  }
  BoundaryCover out;
  out.aura = check_weak_regularity(f, 0.0, eps, plan);
  const double margin = out.aura.margin;
  if (!(margin > 0.0))
    fail(ErrorKind::Regularity, "not an aura: margin " + shortest(margin) + " at " + fmt_point(out.aura.argmin));
  const double thr = std::isfinite(margin) ? 0.5 * margin : 0.5 * eps;
  const Box2 cbox{out.aura.box_lo[0], out.aura.box_hi[0], out.aura.box_lo[1], out.aura.box_hi[1]};
  out.cover = zero_set_large_subdiff_2d(f, thr, cbox);

  const double r = 1e-7 * eps;
  const double grid = std::max(cbox.xhi - cbox.xlo, cbox.yhi - cbox.ylo) / 200.0;
  out.trace_tol = r / (2.0 * thr) + kTraceTol;
  try {
    const auto loops = level_loops_2d(f, r, grid, cbox);
    out.traced = true;
    for (const auto& loop : loops.loops)
      for (const P2 p : loop) {
        ++out.trace_points;
        out.trace_distance = std::max(out.trace_distance, distance_to_cover(out.cover, p));
      }
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::Validation) throw;
    out.cover.note += out.cover.note.empty() ? "" : "; ";
    out.cover.note += "trace check skipped: level set reaches the box";
  }
  if (out.traced && out.trace_distance > 10.0 * out.trace_tol)
    fail(ErrorKind::Consistency, "traced boundary point at distance " + shortest(out.trace_distance) + " from the cover");
  return out;
}

double distance_to_cover(const SegmentCover& c, P2 p) {
  double d = std::numeric_limits<double>::infinity();
  for (const auto& s : c.segments) d = std::min(d, seg_dist(s, p));
  return d;
}

std::string cover_csv(const SegmentCover& c) {
  std::ostringstream os;
  os << "segment,x0,y0,x1,y1,provenance\n";
  for (std::size_t k = 0; k < c.segments.size(); ++k) {
    const auto& s = c.segments[k];
    os << k << ',' << shortest(s.p.x) << ',' << shortest(s.p.y) << ',' << shortest(s.q.x) << ',' << shortest(s.q.y) << ',';
    for (std::size_t i = 0; i < s.prov.size(); ++i)
      os << (i ? " " : "") << to_string(s.prov[i].kind) << ':' << s.prov[i].i << ':' << s.prov[i].j;
    os << '\n';
  }
  return os.str();
}

std::string cover_svg(const SegmentCover& c) {
  const double px = 512.0;
  const double w = c.box.xhi - c.box.xlo, h = c.box.yhi - c.box.ylo;
  const double sc = px / std::max(w, h);
  auto X = [&](P2 p) { return shortest(sc * (p.x - c.box.xlo)); };
  auto Y = [&](P2 p) { return shortest(sc * (c.box.yhi - p.y)); };
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << shortest(sc * w) << "\" height=\"" << shortest(sc * h)
     << "\">\n";
  for (const auto& s : c.segments) {
    if (s.degenerate(0.0))
      os << "<circle cx=\"" << X(s.p) << "\" cy=\"" << Y(s.p) << "\" r=\"3\" fill=\"red\"/>\n";
    else
      os << "<line x1=\"" << X(s.p) << "\" y1=\"" << Y(s.p) << "\" x2=\"" << X(s.q) << "\" y2=\"" << Y(s.q)
         << "\" stroke=\"red\"/>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace wdc
