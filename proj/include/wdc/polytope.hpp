#pragma once

#include <vector>

#include "wdc/dc.hpp"

namespace wdc {

inline constexpr double kWolfeTol = 1e-10;

struct MinNormResult {
  Vec point;
  // Wolfe certificate: <p, v> >= |p|^2 - tol for every vertex v.
  bool certified = false;
  double certificate_gap = 0.0;  // min_v <p, v> - |p|^2
  int iterations = 0;
};

// Wolfe's minimum-norm-point algorithm on conv(P). Vertices are scanned in
// input order; ties go to the lowest index.
MinNormResult wolfe_min_norm(const VPolytope& p, double tol = kWolfeTol);
Vec min_norm_point(const VPolytope& p, double tol = kWolfeTol);

// Projection of an arbitrary point onto conv(P).
Vec project_onto_hull(const VPolytope& p, std::span<const double> x);

// Drops duplicate and redundant vertices (exact hull in d <= 2, LP test above).
VPolytope prune_vertices(const VPolytope& p, double tol = 1e-12);

// Hull of all pairwise differences a - c.
VPolytope minkowski_difference(const VPolytope& a, const VPolytope& c);

// max over vertices v of A of dist(v, conv B): the one-sided Hausdorff excess.
double hull_excess(const VPolytope& a, const VPolytope& b);

double diameter(const VPolytope& p);

}  // namespace wdc
