#pragma once

#include <optional>
#include <string>
#include <vector>

#include "wdc/arrangement.hpp"
#include "wdc/dc.hpp"

namespace wdc {

// Closed polylines of {f = r}, first point repeated last. Outer boundaries
// run counterclockwise, holes clockwise (sublevel set on the left).
struct LevelLoops {
  std::vector<std::vector<P2>> loops;
  double level = 0.0;
  double grid = 0.0;
  Box2 box;
  std::string note;
};

inline constexpr double kTraceTol = 1e-10;

// Grid box for {f <= r}, padded by two cells. Throws Unbounded.
Box2 level_box_2d(const DCFunction& f, double r, double grid);

LevelLoops level_loops_2d(const DCFunction& f, double r, double grid, std::optional<Box2> box = std::nullopt);

enum class EulerMethod { Degree, Cubical };
const char* to_string(EulerMethod m);

struct EulerResult {
  int chi = 0;
  EulerMethod method = EulerMethod::Degree;
  std::vector<int> per_loop;     // winding per loop, or {V, E, F}
  std::vector<double> residual;  // |winding - round| per loop
};

// Winding of the normalized min-norm Clarke subgradient along one loop, in turns.
double loop_winding(const DCFunction& f, const std::vector<P2>& loop, double refine = kPi / 2);

EulerResult euler_degree_2d(const DCFunction& f, double r, double grid, double refine = kPi / 2,
                            std::optional<Box2> box = std::nullopt);
EulerResult euler_cubical(const DCFunction& f, double r, double grid, std::optional<Box2> box = std::nullopt);

std::string loops_csv(const LevelLoops& l);
std::string loops_svg(const LevelLoops& l);

}  // namespace wdc
