#pragma once

#include <vector>

#include "wdc/linalg.hpp"

namespace wdc::lp {

enum class Status { Optimal, Infeasible };

struct Result {
  Status status = Status::Infeasible;
  double value = 0.0;
  Vec x;
};

// Maximizes c.x subject to rows[i].x <= rhs[i] and lower <= x <= upper.
// Every variable must have finite bounds, so the problem is never unbounded.
// Dense two-phase simplex with Bland's rule; intended for the small systems
// (a handful of variables, up to a few hundred rows) that occur here.
Result maximize(const Vec& c, const std::vector<Vec>& rows, const Vec& rhs, const Vec& lower,
                const Vec& upper);

}  // namespace wdc::lp
