#pragma once

// Self-similar set K = phi-(K) ∪ phi+(K) over the triangle H and a numerical
// check of the regularity of its distance function on a shell.

#include <optional>
#include <string>
#include <vector>

#include "wdc/arrangement.hpp"
#include "wdc/linalg.hpp"

namespace wdc {

struct IfsSpec {
  double alpha = kPi / 10;

  double ratio() const { return 1.0 / (2.0 * std::cos(alpha)); }
  double gamma() const { return kPi - 4.0 * alpha; }
  P2 v_minus() const { return {-0.5, 0.0}; }
  P2 v_plus() const { return {0.5, 0.0}; }
  P2 apex() const { return {0.0, 0.5 * std::tan(alpha)}; }
  P2 b_plus() const { return {0.5 - 1.0 / (4.0 * std::cos(alpha) * std::cos(alpha)), 0.0}; }
  P2 b_minus() const { return {-b_plus().x, 0.0}; }
  double diam_h() const { return 1.0; }
};

// Throws Validation unless alpha is in (0, pi/8).
void validate(const IfsSpec& s);

P2 phi_plus(const IfsSpec& s, P2 p);
P2 phi_minus(const IfsSpec& s, P2 p);

struct FractalApprox {
  IfsSpec spec;
  int depth = 0;
  std::vector<Seg2> segments;  // chained from V- to V+
  double hausdorff_bound = 0.0;  // a^n diam(H)
};

inline constexpr int kMaxDepth = 20;

FractalApprox ifs_generate(const IfsSpec& s, int depth);

double hausdorff_dim(const IfsSpec& s);

double dist_to_approx(const FractalApprox& k, P2 p);

struct FractalCheck {
  double min_norm = 1.0;
  P2 argmin;
  std::size_t grid_points = 0;
  std::size_t shell_points = 0;
  std::size_t singleton = 0;  // shell points with a one-segment fan
  double bound = 0.0;         // -cos(gamma)
  double tol = 0.0;
  double fan_tol = 0.0;
  // Worst-case angle error from replacing K by the depth-n segments.
  double discretization = 0.0;
  bool pass = false;
};

struct FractalCheckOptions {
  double grid = 0.005;
  double shell_lo = 0.02;
  double shell_hi = 0.2;
  std::optional<double> fan_tol;  // default grid / 10
  double tol = 0.02;
  int threads = 1;
};

FractalCheck fractal_regularity_check(const FractalApprox& k, const FractalCheckOptions& opt = {});

std::string fractal_svg(const FractalApprox& k);

}  // namespace wdc
