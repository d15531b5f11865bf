#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "wdc/arrangement.hpp"
#include "wdc/dc.hpp"
#include "wdc/sector.hpp"

namespace wdc {

// Deterministic probe plan over a declared box. An empty box means "derive
// one" (bounded sublevel sets only). `local` marks auras defined only inside
// the box: boundedness is not checked and probes never leave the box.
struct SamplingPlan {
  Vec lo;
  Vec hi;
  std::uint64_t seed = 1;
  std::size_t samples = 4096;
  bool low_discrepancy = true;
  bool local = false;
  double threshold = 1e-12;  // min-norm values below this are violations
  int threads = 1;
};

// Halton points (skipping the first `seed` indices) or seeded uniform points.
std::vector<Vec> plan_points(const SamplingPlan& plan);

enum class AuraMode { ExactPwa2d, Sampled };
const char* to_string(AuraMode m);

struct AuraReport {
  double level = 0.0;
  double shell_width = 0.0;
  std::size_t samples = 0;  // strata (exact) or probe points (sampled) inside the shell
  double margin = 0.0;      // +inf when the shell is empty
  AuraMode mode = AuraMode::ExactPwa2d;
  bool empty_shell = false;
  Vec argmin;
  std::vector<Vec> violations;
  Vec box_lo;
  Vec box_hi;
};

struct WeakTouchReport {
  bool touched = false;
  Vec x;
  Vec v;
  std::size_t candidates = 0;
};

enum class PolyNorm { Linf, L1 };

// dist(x, P) in the chosen polyhedral norm, as a convex max-affine function.
DCFunction aura_distance_polytope(const VPolytope& p, PolyNorm norm = PolyNorm::Linf);
// max(y - phi(x), 0); zero set is the closed hypograph of phi.
DCFunction aura_hypograph(const DCFunction& phi);
// Zero set {x >= 0, lo(x) <= y <= hi(x)} in the frame, rotated to world.
DCFunction aura_degenerate_sector(const DCFunction& lo, const DCFunction& hi, double angle,
                                  bool check_tangent = true);
DCFunction aura_sector_complement(const std::vector<OpenSectorSpec>& sectors);

// Smallest sigma(u) = max a_i.u - max c_j.u over unit u; the sublevel sets are
// bounded iff it is positive. Exact in d = 2.
double recession_min_2d(const DCFunction& f);
// Half-width of a centered square that contains {f <= c}. Throws Unbounded.
double sublevel_radius_2d(const DCFunction& f, double c);

AuraReport check_weak_regularity(const DCFunction& f, double c, double eps, const SamplingPlan& plan = {});

inline constexpr double kTouchAngle = 1e-6;
WeakTouchReport weak_touch(const DCFunction& f, const DCFunction& g, const SamplingPlan& plan = {});
// Refuses (Consistency error naming the witness) when f and g touch weakly.
DCFunction aura_sum(const DCFunction& f, const DCFunction& g, const SamplingPlan& plan = {},
                    WeakTouchReport* report = nullptr);

// Probe box used by the plan, derived when empty.
Box2 plan_box_2d(const DCFunction& f, double c, double eps, const SamplingPlan& plan);

}  // namespace wdc
