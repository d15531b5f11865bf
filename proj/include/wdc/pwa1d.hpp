#pragma once

// Continuous piecewise-affine functions of one variable in breakpoint form.

#include <vector>

#include "wdc/dc.hpp"

namespace wdc {

struct Pwa1d {
  Vec knots;   // strictly increasing, at least one
  Vec values;  // f(knots[k])
  double left_slope = 0.0;   // slope on (-inf, knots.front())
  double right_slope = 0.0;  // slope on (knots.back(), inf)

  static Pwa1d from_dc(const DCFunction& f);
  static Pwa1d linear(double slope, double value_at_zero);

  double operator()(double x) const;
  // Slope of the piece on (knots[k-1], knots[k]); k = 0 is the left ray,
  // k = knots.size() the right ray.
  double piece_slope(std::size_t k) const;
  double slope(double x, Side side) const;
  std::size_t pieces() const { return knots.size() + 1; }

  // Removes knots where the slope does not change.
  Pwa1d simplified(double tol = 1e-12) const;
  // Same function restricted to [0, inf) and extended by zero on (-inf, 0].
  // Requires f(0) = 0.
  Pwa1d zero_extended_left() const;
  Pwa1d with_knot(double x) const;

  // Exact DC split: linear part plus convex and concave hinge sums.
  DCFunction to_dc() const;
};

}  // namespace wdc
