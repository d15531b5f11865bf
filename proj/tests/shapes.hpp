#pragma once

#include <string>
#include <vector>

#include "wdc/dc.hpp"

namespace shapes {

using wdc::AffineMap;
using wdc::DCFunction;
using wdc::MaxAffine;
using wdc::P2;
using wdc::Vec;

inline AffineMap A(Vec a, double b = 0.0) { return AffineMap{std::move(a), b}; }

// |x - c|_inf - half
inline DCFunction sup_dist(double half, P2 c = {}) {
  return DCFunction::convex(MaxAffine(
      {A({1, 0}, -c.x - half), A({-1, 0}, c.x - half), A({0, 1}, -c.y - half), A({0, -1}, c.y - half)}));
}

inline DCFunction l1(double shift = 0.0) {
  return DCFunction::convex(MaxAffine({A({1, 1}, shift), A({1, -1}, shift), A({-1, 1}, shift), A({-1, -1}, shift)}));
}

inline DCFunction square(double half = 1.0, P2 c = {}) { return wdc::max(sup_dist(half, c), DCFunction::zero(2)); }

inline DCFunction annulus() {
  return wdc::max(wdc::max(wdc::negate(l1(-1.0)), l1(-2.0)), DCFunction::zero(2));
}

inline DCFunction two_squares() { return wdc::min(square(1.0, {-3, 0}), square(1.0, {3, 0})); }

inline DCFunction three_squares() {
  return wdc::min(wdc::min(square(1.0, {-4, 0}), square(1.0, {0, 0})), square(1.0, {4, 0}));
}

inline DCFunction two_holes() {
  auto f = wdc::max(sup_dist(3.0), wdc::negate(sup_dist(1.0, {-1.5, 0})));
  f = wdc::max(f, wdc::negate(sup_dist(1.0, {1.5, 0})));
  return wdc::max(f, DCFunction::zero(2));
}

inline DCFunction point_germ() { return l1(); }

struct Shape {
  std::string name;
  DCFunction f;
  int chi;
  std::vector<double> levels;
};

inline std::vector<Shape> euler_suite() {
  const std::vector<double> lv{0.1, 0.25, 0.4};
  return {{"square", square(), 1, lv},          {"annulus", annulus(), 0, lv},
          {"two squares", two_squares(), 2, lv}, {"three squares", three_squares(), 3, lv},
          {"two holes", two_holes(), -1, lv},    {"point germ", point_germ(), 1, lv}};
}

}  // namespace shapes
