#pragma once

// Planar singular sets and boundary covers as finite lists of segments.

#include <optional>
#include <string>
#include <vector>

#include "wdc/arrangement.hpp"
#include "wdc/aura.hpp"
#include "wdc/dc.hpp"

namespace wdc {

// Isolated points are zero-length segments.
struct SegmentCover {
  std::vector<Seg2> segments;
  Box2 box;
  double threshold = 0.0;
  bool clipped = false;  // some segment ends on the box boundary
  std::size_t verified = 0;  // points re-checked with subdiff
  std::string note;
};

// Points of the box where the active gradients of g span a set of diameter > eps.
SegmentCover singular_set_pwa_2d(const MaxAffine& g, double eps, const Box2& box);

// Points of {f = 0} in the box whose Clarke hull has a vertex of norm > eps.
SegmentCover zero_set_large_subdiff_2d(const DCFunction& f, double eps, const Box2& box);

struct BoundaryCover {
  SegmentCover cover;
  AuraReport aura;
  std::size_t trace_points = 0;
  double trace_distance = 0.0;  // worst distance of a traced boundary point to the cover
  double trace_tol = 0.0;
  bool traced = false;
};

// Cover of the boundary of {f <= 0} for an aura f, threshold margin/2.
// Traced points of {f = r} for small r must lie within 10 * trace_tol.
BoundaryCover boundary_cover_2d(const DCFunction& f, double eps, std::optional<Box2> box = std::nullopt);

double distance_to_cover(const SegmentCover& c, P2 p);

std::string cover_csv(const SegmentCover& c);
std::string cover_svg(const SegmentCover& c);

}  // namespace wdc
