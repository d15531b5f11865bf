#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "wdc/dc.hpp"

namespace wdc {

struct RetractionConfig {
  double eps_reg = 0.0;  // margin from check_weak_regularity
  double step = 0.05;    // pseudo-time step, displacement is 2*step
  std::optional<double> tol_level;  // default 1e-9 (1 + |f(x0)|)
  std::size_t max_iter = 1000000;
};

void validate(const RetractionConfig& cfg);
double level_tolerance(const RetractionConfig& cfg, double fx0);

struct TraceSample {
  double t = 0.0;
  Vec x;
  double fx = 0.0;
};

struct RetractionTrace {
  std::vector<TraceSample> samples;
  double lip_f = 0.0;
  std::size_t halvings = 0;
  const TraceSample& start() const { return samples.front(); }
  const TraceSample& end() const { return samples.back(); }
};

// Normalized min-norm point of the Clarke hull (outer hull when d > 3).
// Throws Regularity when the min-norm is below eps_min.
Vec descent_direction(const DCFunction& f, std::span<const double> x, double eps_min);

RetractionTrace retract(const DCFunction& f, std::span<const double> x0, const RetractionConfig& cfg);

struct TraceReport {
  bool ok = true;
  std::vector<std::string> failures;
  // Smallest f(x_k) / ((eps/2) |x_k - x_end|) over samples; +inf when vacuous.
  double worst_iv = 0.0;
  // dist(x0, M) brackets: endpoint distance and nearest probe hit are both
  // upper bounds, f(x0)/Lip is the lower bound.
  double dist_endpoint = 0.0;
  double dist_probe = 0.0;
  double dist_lower = 0.0;
  double worst_v_left = 0.0;   // f(x0) / ((eps/2) dist upper)
  double worst_v_right = 0.0;  // Lip dist upper / f(x0)
  double time_ratio = 0.0;     // t_end / (f(x0) / eps)
  double max_speed = 0.0;      // max |dx| / dt over steps
};

inline constexpr double kTraceSlack = 1e-6;

// Needs f to run membership probes for the upper bound on dist(x0, M).
TraceReport verify_trace(const DCFunction& f, const RetractionTrace& trace, const RetractionConfig& cfg,
                         std::size_t probe_rays = 64);

struct BoundaryPathReport {
  std::vector<Vec> points;
  double input_diameter = 0.0;
  double output_diameter = 0.0;
  double bound = 0.0;      // (6 / eps) diam(curve) + slack
  double lip_bound = 0.0;  // 2 diam(curve) (1 + 2 Lip / eps) + slack
  bool ok = false;
};

BoundaryPathReport boundary_path(const DCFunction& f, const std::vector<Vec>& curve, const RetractionConfig& cfg,
                                 double slack = 1e-6);

std::string trace_csv(const RetractionTrace& trace);
// Polyline overlay for d = 2.
std::string trace_svg(const std::vector<RetractionTrace>& traces);

}  // namespace wdc
