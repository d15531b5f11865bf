#include "wdc/pwa1d.hpp"

#include <algorithm>
#include <cmath>

#include "wdc/errors.hpp"

namespace wdc {
namespace {

void tie_points(const MaxAffine& p, Vec& out) {
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t j = i + 1; j < p.size(); ++j) {
      const double da = p[i].a[0] - p[j].a[0];
      if (da == 0.0) continue;
      const double x = (p[j].b - p[i].b) / da;
      if (std::isfinite(x)) out.push_back(x);
    }
}

// max of lines s_k x + c_k built from a base line and nonnegative slope jumps.
MaxAffine hinge_sum(double s0, double c0, const Vec& at, const Vec& jumps) {
  std::vector<AffineMap> pieces{AffineMap{{s0}, c0}};
  double s = s0, c = c0;
  for (std::size_t k = 0; k < at.size(); ++k) {
    s += jumps[k];
    c -= jumps[k] * at[k];
    pieces.push_back(AffineMap{{s}, c});
  }
  return MaxAffine(std::move(pieces));
}

}  // namespace

Pwa1d Pwa1d::from_dc(const DCFunction& f) {
  if (f.dim() != 1) fail(ErrorKind::Dimension, "piecewise-affine 1-d form needs d = 1");
  Vec xs;
  tie_points(f.g, xs);
  tie_points(f.h, xs);
  if (xs.empty()) xs.push_back(0.0);
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  Pwa1d p;
  p.knots = xs;
  for (double x : xs) p.values.push_back(f(Vec{x}));
  // Outer slopes are read from the active pieces far outside the knot span.
  const double span = 1.0 + xs.back() - xs.front();
  const double lo = xs.front() - span, hi = xs.back() + span;
  p.left_slope = one_sided_slope_1d(f, lo, Side::Left, 0.0);
  p.right_slope = one_sided_slope_1d(f, hi, Side::Right, 0.0);
  return p.simplified();
}

Pwa1d Pwa1d::linear(double slope, double value_at_zero) {
  Pwa1d p;
  p.knots = {0.0};
  p.values = {value_at_zero};
  p.left_slope = p.right_slope = slope;
  return p;
}

double Pwa1d::piece_slope(std::size_t k) const {
  if (k == 0) return left_slope;
  if (k >= knots.size()) return right_slope;
  return (values[k] - values[k - 1]) / (knots[k] - knots[k - 1]);
}

double Pwa1d::operator()(double x) const {
  if (x <= knots.front()) return values.front() + left_slope * (x - knots.front());
  if (x >= knots.back()) return values.back() + right_slope * (x - knots.back());
  const auto it = std::upper_bound(knots.begin(), knots.end(), x);
  const std::size_t k = static_cast<std::size_t>(it - knots.begin());
  const double t = (x - knots[k - 1]) / (knots[k] - knots[k - 1]);
  return values[k - 1] + t * (values[k] - values[k - 1]);
}

double Pwa1d::slope(double x, Side side) const {
  // index of the piece containing (x, x+) or (x-, x)
  std::size_t k;
  if (side == Side::Right)
    k = static_cast<std::size_t>(std::upper_bound(knots.begin(), knots.end(), x) - knots.begin());
  else
    k = static_cast<std::size_t>(std::lower_bound(knots.begin(), knots.end(), x) - knots.begin());
  return piece_slope(k);
}

Pwa1d Pwa1d::simplified(double tol) const {
  Pwa1d out;
  out.left_slope = left_slope;
  out.right_slope = right_slope;
  for (std::size_t k = 0; k < knots.size(); ++k) {
    const double sl = piece_slope(k), sr = piece_slope(k + 1);
    if (std::abs(sr - sl) > tol * (1.0 + std::abs(sl) + std::abs(sr))) {
      out.knots.push_back(knots[k]);
      out.values.push_back(values[k]);
    }
  }
  if (out.knots.empty()) {
    out.knots.push_back(knots.front());
    out.values.push_back(values.front());
  }
  return out;
}

Pwa1d Pwa1d::with_knot(double x) const {
  if (std::binary_search(knots.begin(), knots.end(), x)) return *this;
  Pwa1d out = *this;
  const auto it = std::lower_bound(out.knots.begin(), out.knots.end(), x);
  const auto pos = it - out.knots.begin();
  const double v = (*this)(x);
  out.knots.insert(it, x);
  out.values.insert(out.values.begin() + pos, v);
  return out;
}

Pwa1d Pwa1d::zero_extended_left() const {
  const Pwa1d p = with_knot(0.0);
  Pwa1d out;
  out.left_slope = 0.0;
  out.right_slope = p.right_slope;
  for (std::size_t k = 0; k < p.knots.size(); ++k) {
    if (p.knots[k] < 0.0) continue;
    out.knots.push_back(p.knots[k]);
    out.values.push_back(p.knots[k] == 0.0 ? 0.0 : p.values[k]);
  }
  return out;
}

DCFunction Pwa1d::to_dc() const {
  Vec pos_at, pos_j, neg_at, neg_j;
  for (std::size_t k = 0; k < knots.size(); ++k) {
    const double jump = piece_slope(k + 1) - piece_slope(k);
    if (jump > 0.0) {
      pos_at.push_back(knots[k]);
      pos_j.push_back(jump);
    } else if (jump < 0.0) {
      neg_at.push_back(knots[k]);
      neg_j.push_back(-jump);
    }
  }
  // Left of the first knot, g = f and h = 0.
  const double c0 = values.front() - left_slope * knots.front();
  return DCFunction(hinge_sum(left_slope, c0, pos_at, pos_j), hinge_sum(0.0, 0.0, neg_at, neg_j));
}

}  // namespace wdc
