#pragma once

// Planar arrangement of the seam and level segments of a polyhedral DC
// function, restricted to an axis-parallel box.

#include <vector>

#include "wdc/dc.hpp"

namespace wdc {

struct Box2 {
  double xlo = -1.0, xhi = 1.0, ylo = -1.0, yhi = 1.0;

  bool contains(P2 p, double tol = 0.0) const {
    return p.x >= xlo - tol && p.x <= xhi + tol && p.y >= ylo - tol && p.y <= yhi + tol;
  }
  double scale() const;
  static Box2 square(double half, P2 center = {});
};

enum class SourceKind { GSeam, HSeam, Level, Box };
const char* to_string(SourceKind k);

struct Provenance {
  SourceKind kind = SourceKind::Box;
  std::size_t i = 0;
  std::size_t j = 0;
  friend bool operator==(const Provenance&, const Provenance&) = default;
};

struct Seg2 {
  P2 p;
  P2 q;
  std::vector<Provenance> prov;

  bool degenerate(double tol) const { return norm(q - p) <= tol; }
  P2 mid() const { return 0.5 * (p + q); }
};

// Where pieces i and k tie and are both maximal, for every pair, clipped to box.
// Point-like ties come back as zero-length segments.
std::vector<Seg2> seam_segments(const MaxAffine& p, const Box2& box, SourceKind kind);
// {g_i - h_j = c} inside the cell where g_i and h_j are both maximal.
std::vector<Seg2> level_segments(const DCFunction& f, double c, const Box2& box);
std::vector<Seg2> box_segments(const Box2& box);

struct Arrangement {
  struct Edge {
    std::size_t a = 0;
    std::size_t b = 0;
    std::size_t source = 0;
  };
  std::vector<P2> vertices;
  std::vector<Edge> edges;
  std::vector<Seg2> sources;

  P2 midpoint(const Edge& e) const { return 0.5 * (vertices[e.a] + vertices[e.b]); }
};

// Splits all segments at their mutual intersections (and collinear overlap
// endpoints). Vertices closer than tol are merged.
Arrangement build_arrangement(std::vector<Seg2> segments, double tol);

// Seams of g and h plus the box boundary, optionally with the level lines f = c.
Arrangement dc_arrangement(const DCFunction& f, const Box2& box, const std::vector<double>& levels = {});

// Unions collinear overlapping or touching segments; zero-length segments
// are deduplicated but kept.
std::vector<Seg2> merge_collinear(const std::vector<Seg2>& segments, double tol);

}  // namespace wdc
