#include "wdc/arrangement.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <unordered_map>

#include "wdc/errors.hpp"

namespace wdc {
namespace {

struct HalfPlane {
  P2 w;
  double o;  // w.x + o >= 0
};

P2 grad(const AffineMap& m) { return {m.a[0], m.a[1]}; }

// Part of the line n.x = r satisfying all half-planes, clipped to the box.
std::optional<Seg2> clipped_line(P2 n, double r, const std::vector<HalfPlane>& cons, const Box2& box) {
  const double nn = dot(n, n);
  if (nn == 0.0) return std::nullopt;
  const P2 p0 = (r / nn) * n;
  const double len = std::sqrt(nn);
  const P2 d{-n.y / len, n.x / len};
  double lo = -std::numeric_limits<double>::infinity(), hi = std::numeric_limits<double>::infinity();
  const double slack = 1e-10 * (1.0 + box.scale());
  auto bound = [&](double alpha, double beta) {
    // alpha + beta t >= 0
    if (std::abs(beta) <= 1e-14) {
      if (alpha < -slack) lo = std::numeric_limits<double>::infinity();
      return;
    }
    const double t = -alpha / beta;
    if (beta > 0) lo = std::max(lo, t);
    else hi = std::min(hi, t);
  };
  for (const auto& c : cons) bound(dot(c.w, p0) + c.o, dot(c.w, d));
  bound(p0.x - box.xlo, d.x);
  bound(box.xhi - p0.x, -d.x);
  bound(p0.y - box.ylo, d.y);
  bound(box.yhi - p0.y, -d.y);
  if (!(lo <= hi + slack)) return std::nullopt;
  if (lo > hi) lo = hi = 0.5 * (lo + hi);
  return Seg2{p0 + lo * d, p0 + hi * d, {}};
}

struct PointIndex {
  double cell;
  std::unordered_map<long long, std::vector<std::size_t>> buckets;
  std::vector<P2>* pts;
  double tol;

  static long long key(long long i, long long j) { return i * 1000003LL + j; }

  std::size_t insert(P2 p) {
    const long long ci = static_cast<long long>(std::floor(p.x / cell));
    const long long cj = static_cast<long long>(std::floor(p.y / cell));
    for (long long di = -1; di <= 1; ++di)
      for (long long dj = -1; dj <= 1; ++dj) {
        auto it = buckets.find(key(ci + di, cj + dj));
        if (it == buckets.end()) continue;
        for (std::size_t idx : it->second)
          if (norm((*pts)[idx] - p) <= tol) return idx;
      }
    pts->push_back(p);
    buckets[key(ci, cj)].push_back(pts->size() - 1);
    return pts->size() - 1;
  }
};

}  // namespace

double Box2::scale() const {
  return std::max({std::abs(xlo), std::abs(xhi), std::abs(ylo), std::abs(yhi)});
}

Box2 Box2::square(double half, P2 center) {
  return Box2{center.x - half, center.x + half, center.y - half, center.y + half};
}

const char* to_string(SourceKind k) {
  switch (k) {
    case SourceKind::GSeam: return "g-seam";
    case SourceKind::HSeam: return "h-seam";
    case SourceKind::Level: return "level";
    case SourceKind::Box: return "box";
  }
  return "unknown";
}

std::vector<Seg2> seam_segments(const MaxAffine& p, const Box2& box, SourceKind kind) {
  if (p.dim() != 2) fail(ErrorKind::Dimension, "seam segments need d = 2");
  std::vector<Seg2> out;
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t k = i + 1; k < p.size(); ++k) {
      std::vector<HalfPlane> cons;
      for (std::size_t l = 0; l < p.size(); ++l)
        if (l != i && l != k) cons.push_back({grad(p[i]) - grad(p[l]), p[i].b - p[l].b});
      auto s = clipped_line(grad(p[i]) - grad(p[k]), p[k].b - p[i].b, cons, box);
      if (!s) continue;
      s->prov.push_back({kind, i, k});
      out.push_back(*s);
    }
  return out;
}

std::vector<Seg2> level_segments(const DCFunction& f, double c, const Box2& box) {
  if (f.dim() != 2) fail(ErrorKind::Dimension, "level segments need d = 2");
  std::vector<Seg2> out;
  for (std::size_t i = 0; i < f.g.size(); ++i)
    for (std::size_t j = 0; j < f.h.size(); ++j) {
      std::vector<HalfPlane> cons;
      for (std::size_t l = 0; l < f.g.size(); ++l)
        if (l != i) cons.push_back({grad(f.g[i]) - grad(f.g[l]), f.g[i].b - f.g[l].b});
      for (std::size_t m = 0; m < f.h.size(); ++m)
        if (m != j) cons.push_back({grad(f.h[j]) - grad(f.h[m]), f.h[j].b - f.h[m].b});
      auto s = clipped_line(grad(f.g[i]) - grad(f.h[j]), c + f.h[j].b - f.g[i].b, cons, box);
      if (!s) continue;
      s->prov.push_back({SourceKind::Level, i, j});
      out.push_back(*s);
    }
  return out;
}

std::vector<Seg2> box_segments(const Box2& b) {
  const P2 c[4] = {{b.xlo, b.ylo}, {b.xhi, b.ylo}, {b.xhi, b.yhi}, {b.xlo, b.yhi}};
  std::vector<Seg2> out;
  for (std::size_t k = 0; k < 4; ++k) out.push_back(Seg2{c[k], c[(k + 1) % 4], {{SourceKind::Box, k, 0}}});
  return out;
}

Arrangement build_arrangement(std::vector<Seg2> segments, double tol) {
  Arrangement arr;
  arr.sources = std::move(segments);
  const auto& segs = arr.sources;
  PointIndex index{std::max(tol, 1e-300) * 4.0, {}, &arr.vertices, tol};
  std::map<std::pair<std::size_t, std::size_t>, bool> seen;
  for (std::size_t s = 0; s < segs.size(); ++s) {
    const P2 p = segs[s].p;
    const P2 u = segs[s].q - segs[s].p;
    const double len = norm(u);
    if (len <= tol) {
      index.insert(segs[s].mid());
      continue;
    }
    const P2 e = (1.0 / len) * u;
    Vec ts{0.0, len};
    for (std::size_t o = 0; o < segs.size(); ++o) {
      if (o == s) continue;
      const P2 p2 = segs[o].p;
      const P2 u2 = segs[o].q - segs[o].p;
      const double len2 = norm(u2);
      auto add_proj = [&](P2 pt) {
        const double t = dot(pt - p, e);
        if (t > -tol && t < len + tol && std::abs(cross(e, pt - p)) <= tol) ts.push_back(std::clamp(t, 0.0, len));
      };
      if (len2 <= tol) {
        add_proj(segs[o].mid());
        continue;
      }
      const P2 e2 = (1.0 / len2) * u2;
      const double den = cross(e, e2);
      if (std::abs(den) <= 1e-12) {
        add_proj(segs[o].p);
        add_proj(segs[o].q);
        continue;
      }
      const P2 w = p2 - p;
      const double t = cross(w, e2) / den;
      const double t2 = cross(w, e) / den;
      if (t > -tol && t < len + tol && t2 > -tol && t2 < len2 + tol) ts.push_back(std::clamp(t, 0.0, len));
    }
    std::sort(ts.begin(), ts.end());
    std::size_t prev = index.insert(p);
    for (std::size_t k = 1; k < ts.size(); ++k) {
      const P2 pt = k + 1 == ts.size() ? segs[s].q : p + ts[k] * e;
      const std::size_t cur = index.insert(pt);
      if (cur == prev) continue;
      const auto key = std::minmax(prev, cur);
      if (!seen.emplace(key, true).second) {
        prev = cur;
        continue;
      }
      arr.edges.push_back({prev, cur, s});
      prev = cur;
    }
  }
  return arr;
}

Arrangement dc_arrangement(const DCFunction& f, const Box2& box, const std::vector<double>& levels) {
  auto segs = seam_segments(f.g, box, SourceKind::GSeam);
  auto hs = seam_segments(f.h, box, SourceKind::HSeam);
  segs.insert(segs.end(), hs.begin(), hs.end());
  for (double c : levels) {
    auto ls = level_segments(f, c, box);
    segs.insert(segs.end(), ls.begin(), ls.end());
  }
  auto bs = box_segments(box);
  segs.insert(segs.end(), bs.begin(), bs.end());
  return build_arrangement(std::move(segs), 1e-9 * (1.0 + box.scale()));
}

std::vector<Seg2> merge_collinear(const std::vector<Seg2>& segments, double tol) {
  std::vector<Seg2> points, lines;
  for (const auto& s : segments) (s.degenerate(tol) ? points : lines).push_back(s);
  std::vector<bool> used(lines.size(), false);
  std::vector<Seg2> out;
  for (std::size_t s = 0; s < lines.size(); ++s) {
    if (used[s]) continue;
    const P2 base = lines[s].p;
    const P2 e = (1.0 / norm(lines[s].q - lines[s].p)) * (lines[s].q - lines[s].p);
    struct Iv {
      double lo, hi;
      std::vector<Provenance> prov;
    };
    std::vector<Iv> ivs;
    for (std::size_t o = s; o < lines.size(); ++o) {
      if (used[o]) continue;
      const auto& l = lines[o];
      if (std::abs(cross(e, l.p - base)) > tol || std::abs(cross(e, l.q - base)) > tol) continue;
      used[o] = true;
      double a = dot(l.p - base, e), b = dot(l.q - base, e);
      if (a > b) std::swap(a, b);
      ivs.push_back({a, b, l.prov});
    }
    std::sort(ivs.begin(), ivs.end(), [](const Iv& x, const Iv& y) { return x.lo < y.lo; });
    Iv cur = ivs.front();
    auto flush = [&](const Iv& iv) { out.push_back(Seg2{base + iv.lo * e, base + iv.hi * e, iv.prov}); };
    for (std::size_t k = 1; k < ivs.size(); ++k) {
      if (ivs[k].lo <= cur.hi + tol) {
        cur.hi = std::max(cur.hi, ivs[k].hi);
        for (const auto& pv : ivs[k].prov)
          if (std::find(cur.prov.begin(), cur.prov.end(), pv) == cur.prov.end()) cur.prov.push_back(pv);
      } else {
        flush(cur);
        cur = ivs[k];
      }
    }
    flush(cur);
  }
  for (const auto& pt : points) {
    bool dup = false;
    for (auto& o : out)
      if (o.degenerate(tol) && norm(o.mid() - pt.mid()) <= tol) {
        dup = true;
        for (const auto& pv : pt.prov)
          if (std::find(o.prov.begin(), o.prov.end(), pv) == o.prov.end()) o.prov.push_back(pv);
      }
    if (!dup) out.push_back(Seg2{pt.mid(), pt.mid(), pt.prov});
  }
  return out;
}

}  // namespace wdc
