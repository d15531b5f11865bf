#include "wdc/polytope.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "wdc/errors.hpp"
#include "wdc/lp.hpp"

namespace wdc {
namespace {

// Minimizes |sum a_i s_i| subject to sum a_i = 1 over the points of S.
bool affine_minimizer(const std::vector<Vec>& s, Vec& alpha) {
  const std::size_t k = s.size();
  std::vector<Vec> m(k + 1, Vec(k + 1, 0.0));
  Vec rhs(k + 1, 0.0);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) m[i][j] = dot(s[i], s[j]);
    m[i][k] = 1.0;
    m[k][i] = 1.0;
  }
  rhs[k] = 1.0;
  if (!solve_linear(m, rhs, 1e-18)) return false;
  alpha.assign(rhs.begin(), rhs.begin() + static_cast<std::ptrdiff_t>(k));
  return true;
}

Vec combination(const std::vector<Vec>& s, const Vec& w) {
  Vec x(s.front().size(), 0.0);
  for (std::size_t i = 0; i < s.size(); ++i)
    for (std::size_t k = 0; k < x.size(); ++k) x[k] += w[i] * s[i][k];
  return x;
}

}  // namespace

MinNormResult wolfe_min_norm(const VPolytope& p, double tol) {
  if (p.vertices.empty()) fail(ErrorKind::Validation, "min_norm_point: empty polytope");
  const auto& v = p.vertices;
  MinNormResult out;
  std::size_t start = 0;
  for (std::size_t i = 1; i < v.size(); ++i)
    if (dot(v[i], v[i]) < dot(v[start], v[start])) start = i;
  std::vector<Vec> s{v[start]};
  std::vector<std::size_t> ids{start};
  Vec lambda{1.0};
  Vec x = v[start];
  constexpr double kWeightEps = 1e-14;
  for (int major = 0; major < 1000; ++major) {
    ++out.iterations;
    const double xx = dot(x, x);
    std::size_t j = 0;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < v.size(); ++i) {
      const double d = dot(x, v[i]);
      if (d < best) {
        best = d;
        j = i;
      }
    }
    if (best >= xx - tol) break;
    if (std::find(ids.begin(), ids.end(), j) != ids.end()) break;
    s.push_back(v[j]);
    ids.push_back(j);
    lambda.push_back(0.0);
    for (int minor = 0; minor < 1000; ++minor) {
      Vec alpha;
      if (!affine_minimizer(s, alpha)) {
        // Affinely dependent corral: drop the newest point and stop refining.
        s.pop_back();
        ids.pop_back();
        lambda.pop_back();
        goto done;
      }
      if (std::all_of(alpha.begin(), alpha.end(), [](double a) { return a > kWeightEps; })) {
        lambda = alpha;
        x = combination(s, lambda);
        break;
      }
      double theta = 1.0;
      for (std::size_t i = 0; i < s.size(); ++i)
        if (alpha[i] <= kWeightEps && lambda[i] - alpha[i] > 0.0)
          theta = std::min(theta, lambda[i] / (lambda[i] - alpha[i]));
      for (std::size_t i = 0; i < s.size(); ++i) lambda[i] = (1.0 - theta) * lambda[i] + theta * alpha[i];
      std::vector<Vec> s2;
      std::vector<std::size_t> ids2;
      Vec l2;
      for (std::size_t i = 0; i < s.size(); ++i) {
        if (lambda[i] > kWeightEps) {
          s2.push_back(s[i]);
          ids2.push_back(ids[i]);
          l2.push_back(lambda[i]);
        }
      }
      const double total = std::accumulate(l2.begin(), l2.end(), 0.0);
      for (double& l : l2) l /= total;
      s = std::move(s2);
      ids = std::move(ids2);
      lambda = std::move(l2);
      x = combination(s, lambda);
    }
  }
done:
  out.point = x;
  double gap = std::numeric_limits<double>::infinity();
  const double xx = dot(x, x);
  for (const auto& vi : v) gap = std::min(gap, dot(x, vi) - xx);
  out.certificate_gap = gap;
  out.certified = gap >= -tol;
  return out;
}

Vec min_norm_point(const VPolytope& p, double tol) { return wolfe_min_norm(p, tol).point; }

Vec project_onto_hull(const VPolytope& p, std::span<const double> x) {
  VPolytope shifted;
  shifted.vertices.reserve(p.vertices.size());
  for (const auto& v : p.vertices) shifted.vertices.push_back(sub(v, x));
  return add(min_norm_point(shifted, 1e-14), x);
}

VPolytope prune_vertices(const VPolytope& p, double tol) {
  if (p.vertices.empty()) return p;
  const std::size_t d = p.dim();
  std::vector<Vec> pts;
  for (const auto& v : p.vertices) {
    bool dup = false;
    for (const auto& q : pts)
      if (dist(v, q) <= tol * (1.0 + norm_inf(v))) {
        dup = true;
        break;
      }
    if (!dup) pts.push_back(v);
  }
  if (pts.size() <= 1) return VPolytope{pts};
  if (d == 1) {
    auto [lo, hi] = std::minmax_element(pts.begin(), pts.end(),
                                        [](const Vec& a, const Vec& b) { return a[0] < b[0]; });
    if ((*hi)[0] - (*lo)[0] <= tol) return VPolytope{{*lo}};
    return VPolytope{{*lo, *hi}};
  }
  if (d == 2) {
    std::sort(pts.begin(), pts.end(),
              [](const Vec& a, const Vec& b) { return a[0] < b[0] || (a[0] == b[0] && a[1] < b[1]); });
    auto turn = [](const Vec& o, const Vec& a, const Vec& b) {
      return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
    };
    double scale = 0.0;
    for (const auto& q : pts) scale = std::max(scale, norm_inf(q));
    const double eps = tol * (1.0 + scale) * (1.0 + scale);
    std::vector<Vec> hull(2 * pts.size());
    std::size_t k = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      while (k >= 2 && turn(hull[k - 2], hull[k - 1], pts[i]) <= eps) --k;
      hull[k++] = pts[i];
    }
    for (std::size_t i = pts.size() - 1, t = k + 1; i > 0; --i) {
      while (k >= t && turn(hull[k - 2], hull[k - 1], pts[i - 1]) <= eps) --k;
      hull[k++] = pts[i - 1];
    }
    hull.resize(k > 1 ? k - 1 : k);
    // Collinear inputs collapse to the two extreme points.
    return VPolytope{hull};
  }
  // d >= 3: remove vertices expressible as convex combinations of the others.
  std::vector<Vec> keep = pts;
  for (std::size_t idx = 0; idx < keep.size() && keep.size() > 1;) {
    const Vec target = keep[idx];
    std::vector<Vec> others;
    for (std::size_t j = 0; j < keep.size(); ++j)
      if (j != idx) others.push_back(keep[j]);
    const std::size_t m = others.size();
    std::vector<Vec> rows;
    Vec rhs;
    const double eps = 1e-12 * (1.0 + norm_inf(target));
    for (std::size_t k = 0; k < d; ++k) {
      Vec r(m), rn(m);
      for (std::size_t j = 0; j < m; ++j) {
        r[j] = others[j][k];
        rn[j] = -others[j][k];
      }
      rows.push_back(r);
      rhs.push_back(target[k] + eps);
      rows.push_back(rn);
      rhs.push_back(-target[k] + eps);
    }
    rows.push_back(Vec(m, 1.0));
    rhs.push_back(1.0 + 1e-12);
    rows.push_back(Vec(m, -1.0));
    rhs.push_back(-1.0 + 1e-12);
    const auto res = lp::maximize(Vec(m, 0.0), rows, rhs, Vec(m, 0.0), Vec(m, 1.0));
    if (res.status == lp::Status::Optimal)
      keep.erase(keep.begin() + static_cast<std::ptrdiff_t>(idx));
    else
      ++idx;
  }
  return VPolytope{keep};
}

VPolytope minkowski_difference(const VPolytope& a, const VPolytope& c) {
  VPolytope out;
  for (const auto& u : a.vertices)
    for (const auto& w : c.vertices) out.vertices.push_back(sub(u, w));
  return prune_vertices(out);
}

double hull_excess(const VPolytope& a, const VPolytope& b) {
  double worst = 0.0;
  for (const auto& v : a.vertices) worst = std::max(worst, dist(v, project_onto_hull(b, v)));
  return worst;
}

double diameter(const VPolytope& p) {
  double d = 0.0;
  for (std::size_t i = 0; i < p.vertices.size(); ++i)
    for (std::size_t j = i + 1; j < p.vertices.size(); ++j) d = std::max(d, dist(p.vertices[i], p.vertices[j]));
  return d;
}

}  // namespace wdc
