#include "wdc/dc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>

#include "wdc/errors.hpp"
#include "wdc/lp.hpp"
#include "wdc/polytope.hpp"

namespace wdc {
namespace {

void check_dim(std::size_t expected, std::size_t got, const char* where) {
  if (expected != got)
    fail(ErrorKind::Dimension, std::string(where) + ": expected dimension " + std::to_string(expected) +
                                   ", got " + std::to_string(got));
}

MaxAffine concat(const MaxAffine& p, const MaxAffine& q) {
  std::vector<AffineMap> pieces = p.pieces();
  pieces.insert(pieces.end(), q.pieces().begin(), q.pieces().end());
  return prune_dominated(MaxAffine(std::move(pieces)));
}

}  // namespace

MaxAffine::MaxAffine(std::vector<AffineMap> pieces) {
  if (pieces.empty()) fail(ErrorKind::Validation, "max-affine function needs at least one piece");
  const std::size_t d = pieces.front().dim();
  // Same slope: only the largest offset can ever be maximal. Order of first
  // appearance is kept so piece indices stay meaningful.
  std::map<Vec, std::size_t> index;
  for (auto& p : pieces) {
    check_dim(d, p.dim(), "max-affine piece");
    if (!std::isfinite(p.b) || !std::all_of(p.a.begin(), p.a.end(), [](double v) { return std::isfinite(v); }))
      fail(ErrorKind::Validation, "max-affine piece has non-finite coefficients");
    auto it = index.find(p.a);
    if (it == index.end()) {
      index.emplace(p.a, pieces_.size());
      pieces_.push_back(std::move(p));
    } else {
      pieces_[it->second].b = std::max(pieces_[it->second].b, p.b);
    }
  }
}

MaxAffine MaxAffine::constant(std::size_t dim, double c) { return MaxAffine({AffineMap{Vec(dim, 0.0), c}}); }

double MaxAffine::operator()(std::span<const double> x) const {
  check_dim(dim(), x.size(), "max-affine evaluation");
  double m = -std::numeric_limits<double>::infinity();
  for (const auto& p : pieces_) m = std::max(m, p(x));
  return m;
}

std::vector<std::size_t> MaxAffine::active(std::span<const double> x, double tol) const {
  const double m = (*this)(x);
  const double thr = tol * (1.0 + std::abs(m));
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < pieces_.size(); ++i)
    if (pieces_[i](x) >= m - thr) out.push_back(i);
  return out;
}

MaxAffine operator+(const MaxAffine& p, const MaxAffine& q) {
  check_dim(p.dim(), q.dim(), "max-affine sum");
  std::vector<AffineMap> pieces;
  pieces.reserve(p.size() * q.size());
  for (const auto& u : p.pieces())
    for (const auto& w : q.pieces()) pieces.push_back(AffineMap{add(u.a, w.a), u.b + w.b});
  return prune_dominated(MaxAffine(std::move(pieces)));
}

MaxAffine scale(const MaxAffine& p, double s) {
  if (s < 0.0) fail(ErrorKind::Validation, "max-affine scale must be nonnegative");
  if (s == 0.0) return MaxAffine::constant(p.dim(), 0.0);
  std::vector<AffineMap> pieces;
  for (const auto& u : p.pieces()) pieces.push_back(AffineMap{scaled(u.a, s), s * u.b});
  return MaxAffine(std::move(pieces));
}

MaxAffine prune_dominated(const MaxAffine& p, std::size_t prune_threshold) {
  if (p.size() <= prune_threshold) return p;
  const std::size_t d = p.dim();
  constexpr double kBox = 1e6;
  std::vector<AffineMap> kept;
  for (std::size_t i = 0; i < p.size(); ++i) {
    // maximize s: (a_k - a_i).x + s <= b_i - b_k for all k != i
    std::vector<Vec> rows;
    Vec rhs;
    for (std::size_t k = 0; k < p.size(); ++k) {
      if (k == i) continue;
      Vec r = sub(p[k].a, p[i].a);
      r.push_back(1.0);
      rows.push_back(std::move(r));
      rhs.push_back(p[i].b - p[k].b);
    }
    Vec c(d + 1, 0.0);
    c[d] = 1.0;
    Vec lo(d + 1, -kBox), hi(d + 1, kBox);
    lo[d] = -1.0;
    hi[d] = 1.0;
    const auto res = lp::maximize(c, rows, rhs, lo, hi);
    if (res.status == lp::Status::Optimal && res.value > 1e-9) kept.push_back(p[i]);
  }
  if (kept.empty()) return p;
  return MaxAffine(std::move(kept));
}

DCFunction::DCFunction(MaxAffine g_, MaxAffine h_) : g(std::move(g_)), h(std::move(h_)) {
  check_dim(g.dim(), h.dim(), "dc function parts");
}

DCFunction DCFunction::affine(AffineMap map) {
  const std::size_t d = map.dim();
  return DCFunction(MaxAffine({std::move(map)}), MaxAffine::constant(d, 0.0));
}

DCFunction DCFunction::convex(MaxAffine g) {
  const std::size_t d = g.dim();
  return DCFunction(std::move(g), MaxAffine::constant(d, 0.0));
}

DCFunction DCFunction::concave(MaxAffine h) {
  const std::size_t d = h.dim();
  return DCFunction(MaxAffine::constant(d, 0.0), std::move(h));
}

DCFunction DCFunction::zero(std::size_t dim) {
  return DCFunction(MaxAffine::constant(dim, 0.0), MaxAffine::constant(dim, 0.0));
}

double DCFunction::operator()(std::span<const double> x) const { return g(x) - h(x); }

double DCFunction::lipschitz_bound() const {
  double l = 0.0;
  for (const auto& u : g.pieces())
    for (const auto& w : h.pieces()) l = std::max(l, dist(u.a, w.a));
  return l;
}

double eval_dc(const DCFunction& f, std::span<const double> x) { return f(x); }

DCFunction add(const DCFunction& f1, const DCFunction& f2) {
  check_dim(f1.dim(), f2.dim(), "dc add");
  return DCFunction(f1.g + f2.g, f1.h + f2.h);
}

DCFunction max(const DCFunction& f1, const DCFunction& f2) {
  check_dim(f1.dim(), f2.dim(), "dc max");
  return DCFunction(concat(f1.g + f2.h, f2.g + f1.h), f1.h + f2.h);
}

DCFunction min(const DCFunction& f1, const DCFunction& f2) {
  check_dim(f1.dim(), f2.dim(), "dc min");
  return DCFunction(f1.g + f2.g, concat(f1.g + f2.h, f2.g + f1.h));
}

DCFunction combine(CombineMode mode, std::span<const DCFunction> args) {
  if (args.empty()) fail(ErrorKind::Validation, "combine needs at least one argument");
  DCFunction acc = args.front();
  for (std::size_t i = 1; i < args.size(); ++i) {
    switch (mode) {
      case CombineMode::Add: acc = add(acc, args[i]); break;
      case CombineMode::Max: acc = max(acc, args[i]); break;
      case CombineMode::Min: acc = min(acc, args[i]); break;
    }
  }
  return acc;
}

DCFunction scale(const DCFunction& f, double s) {
  if (!std::isfinite(s)) fail(ErrorKind::Validation, "scale factor must be finite");
  if (s == 0.0) return DCFunction::zero(f.dim());
  if (s > 0.0) return DCFunction(scale(f.g, s), scale(f.h, s));
  return DCFunction(scale(f.h, -s), scale(f.g, -s));
}

DCFunction negate(const DCFunction& f) { return DCFunction(f.h, f.g); }

DCFunction add_constant(const DCFunction& f, double c) {
  std::vector<AffineMap> pieces = f.g.pieces();
  for (auto& p : pieces) p.b += c;
  return DCFunction(MaxAffine(std::move(pieces)), f.h);
}

namespace {

MaxAffine precompose(const MaxAffine& p, const std::vector<Vec>& m, const Vec& t) {
  const std::size_t n = m.front().size();
  std::vector<AffineMap> pieces;
  for (const auto& u : p.pieces()) {
    Vec a(n, 0.0);
    for (std::size_t r = 0; r < m.size(); ++r)
      for (std::size_t c = 0; c < n; ++c) a[c] += m[r][c] * u.a[r];
    pieces.push_back(AffineMap{std::move(a), dot(u.a, t) + u.b});
  }
  return MaxAffine(std::move(pieces));
}

MaxAffine lift(const MaxAffine& p, std::size_t new_dim, std::span<const std::size_t> coords) {
  std::vector<AffineMap> pieces;
  for (const auto& u : p.pieces()) {
    Vec a(new_dim, 0.0);
    for (std::size_t k = 0; k < coords.size(); ++k) a[coords[k]] = u.a[k];
    pieces.push_back(AffineMap{std::move(a), u.b});
  }
  return MaxAffine(std::move(pieces));
}

}  // namespace

DCFunction precompose(const DCFunction& f, const std::vector<Vec>& m, const Vec& t) {
  check_dim(f.dim(), m.size(), "precompose rows");
  check_dim(f.dim(), t.size(), "precompose offset");
  if (m.empty() || m.front().empty()) fail(ErrorKind::Dimension, "precompose: empty map");
  for (const auto& row : m) check_dim(m.front().size(), row.size(), "precompose columns");
  return DCFunction(precompose(f.g, m, t), precompose(f.h, m, t));
}

DCFunction lift(const DCFunction& f, std::size_t new_dim, std::span<const std::size_t> coords) {
  check_dim(f.dim(), coords.size(), "lift coordinates");
  for (std::size_t c : coords)
    if (c >= new_dim) fail(ErrorKind::Dimension, "lift: coordinate out of range");
  return DCFunction(lift(f.g, new_dim, coords), lift(f.h, new_dim, coords));
}

LatticeExpr LatticeExpr::affine(AffineMap m) {
  LatticeExpr e;
  e.leaf = std::move(m);
  return e;
}

LatticeExpr LatticeExpr::max(std::vector<LatticeExpr> c) {
  LatticeExpr e;
  e.op = Op::Max;
  e.children = std::move(c);
  return e;
}

LatticeExpr LatticeExpr::min(std::vector<LatticeExpr> c) {
  LatticeExpr e;
  e.op = Op::Min;
  e.children = std::move(c);
  return e;
}

double LatticeExpr::operator()(std::span<const double> x) const {
  if (op == Op::Leaf) return leaf(x);
  double v = op == Op::Max ? -std::numeric_limits<double>::infinity() : std::numeric_limits<double>::infinity();
  for (const auto& c : children) v = op == Op::Max ? std::max(v, c(x)) : std::min(v, c(x));
  return v;
}

std::size_t LatticeExpr::dim() const {
  if (op == Op::Leaf) {
    if (leaf.a.empty()) fail(ErrorKind::Validation, "lattice leaf has no coefficients");
    return leaf.dim();
  }
  if (children.empty()) fail(ErrorKind::Validation, "lattice node without children");
  const std::size_t d = children.front().dim();
  for (const auto& c : children) check_dim(d, c.dim(), "lattice child");
  return d;
}

DCFunction lattice_to_dc(const LatticeExpr& expr) {
  expr.dim();
  if (expr.op == LatticeExpr::Op::Leaf) return DCFunction::affine(expr.leaf);
  std::vector<DCFunction> parts;
  for (const auto& c : expr.children) parts.push_back(lattice_to_dc(c));
  return combine(expr.op == LatticeExpr::Op::Max ? CombineMode::Max : CombineMode::Min, parts);
}

const char* to_string(Exactness e) {
  switch (e) {
    case Exactness::ConvexExact: return "convex-exact";
    case Exactness::ClarkeExact: return "clarke-exact";
    case Exactness::OuterEstimate: return "outer-estimate";
  }
  return "unknown";
}

namespace {

VPolytope hull_of(const MaxAffine& p, const std::vector<std::size_t>& idx) {
  VPolytope out;
  for (std::size_t i : idx) out.vertices.push_back(p[i].a);
  return prune_vertices(out);
}

// Whether cell {g_i maximal among I, h_j maximal among J} has interior at x.
bool cell_has_interior(const DCFunction& f, const std::vector<std::size_t>& gi, std::size_t i,
                       const std::vector<std::size_t>& hj, std::size_t j, double neighborhood) {
  const std::size_t d = f.dim();
  std::vector<Vec> rows;
  Vec rhs;
  for (std::size_t k : gi) {
    if (k == i) continue;
    Vec r = sub(f.g[k].a, f.g[i].a);
    r.push_back(1.0);
    rows.push_back(std::move(r));
    rhs.push_back(0.0);
  }
  for (std::size_t l : hj) {
    if (l == j) continue;
    Vec r = sub(f.h[l].a, f.h[j].a);
    r.push_back(1.0);
    rows.push_back(std::move(r));
    rhs.push_back(0.0);
  }
  if (rows.empty()) return true;
  Vec c(d + 1, 0.0);
  c[d] = 1.0;
  Vec lo(d + 1, -neighborhood), hi(d + 1, neighborhood);
  lo[d] = -1e3;
  hi[d] = 1.0;
  const auto res = lp::maximize(c, rows, rhs, lo, hi);
  return res.status == lp::Status::Optimal && res.value > kCellTol;
}

}  // namespace

SubdiffResult subdiff(const DCFunction& f, std::span<const double> x, SubdiffMode mode, double tol,
                      double neighborhood) {
  check_dim(f.dim(), x.size(), "subdiff point");
  const auto gi = f.g.active(x, tol);
  const auto hj = f.h.active(x, tol);
  SubdiffResult out;
  switch (mode) {
    case SubdiffMode::ConvexPart:
      out.hull = hull_of(f.g, gi);
      out.exactness = Exactness::ConvexExact;
      return out;
    case SubdiffMode::Outer:
      out.hull = minkowski_difference(hull_of(f.g, gi), hull_of(f.h, hj));
      out.exactness = hj.size() == 1 ? Exactness::ClarkeExact : Exactness::OuterEstimate;
      return out;
    case SubdiffMode::Clarke: break;
  }
  if (gi.size() == 1 && hj.size() == 1) {
    out.hull.vertices.push_back(sub(f.g[gi[0]].a, f.h[hj[0]].a));
    out.exactness = Exactness::ClarkeExact;
    return out;
  }
  if (f.dim() > 3) fail(ErrorKind::Unsupported, "exact Clarke subdifferential is supported for d <= 3");
  VPolytope cells;
  for (std::size_t i : gi)
    for (std::size_t j : hj)
      if (cell_has_interior(f, gi, i, hj, j, neighborhood)) cells.vertices.push_back(sub(f.g[i].a, f.h[j].a));
  if (cells.vertices.empty()) fail(ErrorKind::Consistency, "no full-dimensional cell found near the point");
  out.hull = prune_vertices(cells);
  out.exactness = Exactness::ClarkeExact;
  return out;
}

double one_sided_slope_1d(const DCFunction& f, double x, Side side, double tol) {
  check_dim(1, f.dim(), "one-sided slope");
  const double pt[1] = {x};
  const auto gi = f.g.active(pt, tol);
  const auto hj = f.h.active(pt, tol);
  auto pick = [side](const MaxAffine& p, const std::vector<std::size_t>& idx) {
    double v = side == Side::Right ? -std::numeric_limits<double>::infinity()
                                   : std::numeric_limits<double>::infinity();
    for (std::size_t i : idx) v = side == Side::Right ? std::max(v, p[i].a[0]) : std::min(v, p[i].a[0]);
    return v;
  };
  return pick(f.g, gi) - pick(f.h, hj);
}

}  // namespace wdc
