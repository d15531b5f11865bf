#pragma once

// Planar DC sectors: a basic open sector is B(0,r) ∩ {y > phi(x)} in a
// rotated frame; a degenerate closed sector is {x >= 0, lo(x) <= y <= hi(x)}.
// Frame convention: world = Rot(angle) * frame.

#include <optional>
#include <string>

#include "wdc/dc.hpp"
#include "wdc/pwa1d.hpp"

namespace wdc {

struct OpenSectorSpec {
  double angle = 0.0;
  double radius = 1.0;
  DCFunction phi;
};

struct DegenerateSectorSpec {
  double angle = 0.0;
  double radius = 1.0;
  DCFunction lo;
  DCFunction hi;
};

struct SectorCheck {
  bool ok = true;
  std::string reason;
  std::optional<double> abscissa;
};

// Radial gauge sqrt(x^2 + phi(x)^2) strictly increasing on [0, w) and
// strictly decreasing on (-w, 0] for some w beyond the radius, decided per
// affine piece from the sign of the derivative of the squared gauge.
SectorCheck validate_sector(const OpenSectorSpec& spec);
SectorCheck validate_sector(const DegenerateSectorSpec& spec, bool check_tangent = true);

// Checks only the right half [0, limit] (or the left half [-limit, 0]).
SectorCheck check_gauge(const Pwa1d& phi, double limit, bool right);

P2 to_frame(P2 world, double angle);
P2 to_world(P2 frame, double angle);

// Membership of a world point (relative to the apex at the origin).
bool in_open_sector(const OpenSectorSpec& s, P2 p);
bool in_degenerate_sector(const DegenerateSectorSpec& s, P2 p, double tol = 0.0);

}  // namespace wdc
