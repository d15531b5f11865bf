#pragma once

// Local structure of closed planar sets at a boundary point: sector models,
// direction types T1..T5, characterization of raw germs and aura synthesis.

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "wdc/aura.hpp"
#include "wdc/dc.hpp"
#include "wdc/pwa1d.hpp"
#include "wdc/sector.hpp"

namespace wdc {

// Raw germ at x: the intersection of closed constraints, one per curve
// through x. Each curve is the graph of phi (phi(0) = 0) in the frame
// rotated by `angle`, and the set lies below it, above it, or on it.
enum class GermSide { Below, Above, On };
const char* to_string(GermSide s);

struct GermCurve {
  double angle = 0.0;
  DCFunction phi;
  GermSide side = GermSide::Below;
};

struct RawGerm {
  P2 x;
  double rho_cap = 1.0;
  std::vector<GermCurve> curves;
  bool contains(P2 p, double tol = 1e-12) const;
};

enum class LocalCondition { IsolatedPoint = 1, Degenerate = 2, Complement = 3 };
const char* to_string(LocalCondition c);

// Exact local model on B(x, rho). Sector specs are relative to the apex x.
struct PlanarLocalModel {
  LocalCondition condition = LocalCondition::IsolatedPoint;
  P2 x;
  double rho = 1.0;
  DegenerateSectorSpec degenerate;
  std::vector<OpenSectorSpec> sectors;
  bool contains(P2 p, double tol = 1e-12) const;
};

// Throws Validation with the failing sector and reason.
void validate(const PlanarLocalModel& m);

enum class GraphHalf { Both, Positive, Negative };

struct LocalGraph {
  Pwa1d f;
  double alpha = 0.0;
  double beta = 0.0;
  // Radius up to which the curve stays a graph with monotone gauge.
  double max_radius = 0.0;
  DCFunction dc() const { return f.to_dc(); }
};

// Graph of p in the frame `src_angle`, re-expressed in the frame `dst_angle`
// and cut to the disk of radius rho. `half` picks t >= 0, t <= 0 or both.
LocalGraph graph_localize(const DCFunction& p, double src_angle, double dst_angle, double rho,
                          GraphHalf half = GraphHalf::Both);
double graph_localize_limit(const DCFunction& p, double src_angle, double dst_angle, double cap,
                            GraphHalf half = GraphHalf::Both);

enum class PlanarType { T1 = 1, T2, T3, T4, T5 };
const char* to_string(PlanarType t);

struct TypeTag {
  PlanarType type = PlanarType::T1;
  std::optional<Pwa1d> U;
  std::optional<Pwa1d> L;
  double r = 0.0;
  double u = 0.0;
  int k = 0;  // u = 2^-k
};

// Type of the model at its apex in direction v. Cone half-slopes follow
// u = 2^-k starting at k = min_k.
TypeTag classify_direction(const PlanarLocalModel& m, P2 v, int min_k = 1);

// The five type predicates evaluated on an even probe grid of A_r^{2u}(x, v).
// Witness candidates are the model boundaries tangent to v.
std::array<bool, 5> type_predicates(const PlanarLocalModel& m, P2 v, double r, double u, std::size_t probes = 48);

PlanarLocalModel characterize_local(const RawGerm& g);

struct PlanarAura {
  DCFunction F;
  AuraReport report;
  std::size_t probes = 0;
};

// Aura on B(x, rho) with zero set the model set; the zero set is checked
// against the model on `probes` points and the margin must be positive.
PlanarAura build_planar_aura(const PlanarLocalModel& m, std::size_t probes = 10000);

std::string model_svg(const PlanarLocalModel& m);

}  // namespace wdc
