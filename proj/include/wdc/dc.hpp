#pragma once

// Polyhedral difference-of-convex functions f = g - h where g and h are
// maxima of finitely many affine maps, their calculus, and exact Clarke
// subdifferentials.

#include <cstddef>
#include <span>
#include <vector>

#include "wdc/linalg.hpp"

namespace wdc {

struct AffineMap {
  Vec a;
  double b = 0.0;

  std::size_t dim() const { return a.size(); }
  double operator()(std::span<const double> x) const { return dot(a, x) + b; }
  friend bool operator==(const AffineMap&, const AffineMap&) = default;
};

// Convex piecewise-affine function max_i (a_i . x + b_i).
// Pieces are nonempty, finite, share one dimension and contain no exact duplicates.
class MaxAffine {
 public:
  MaxAffine() = default;
  explicit MaxAffine(std::vector<AffineMap> pieces);

  static MaxAffine constant(std::size_t dim, double c);

  std::size_t dim() const { return pieces_.front().dim(); }
  std::size_t size() const { return pieces_.size(); }
  const std::vector<AffineMap>& pieces() const { return pieces_; }
  const AffineMap& operator[](std::size_t i) const { return pieces_[i]; }

  double operator()(std::span<const double> x) const;
  // Indices of pieces within tol * (1 + |max|) of the maximum at x.
  std::vector<std::size_t> active(std::span<const double> x, double tol) const;

 private:
  std::vector<AffineMap> pieces_;
};

// Pointwise sum; |P1| * |P2| pieces before pruning.
MaxAffine operator+(const MaxAffine& p, const MaxAffine& q);
MaxAffine scale(const MaxAffine& p, double s);  // s >= 0

// Removes pieces that are nowhere strictly maximal (LP test). Pieces are
// only tested when the count exceeds prune_threshold.
MaxAffine prune_dominated(const MaxAffine& p, std::size_t prune_threshold = 64);

struct DCFunction {
  MaxAffine g;
  MaxAffine h;

  DCFunction() = default;
  DCFunction(MaxAffine g_, MaxAffine h_);

  static DCFunction affine(AffineMap map);
  static DCFunction convex(MaxAffine g);
  static DCFunction concave(MaxAffine h);
  static DCFunction zero(std::size_t dim);

  std::size_t dim() const { return g.dim(); }
  double operator()(std::span<const double> x) const;
  // Lipschitz bound max |a_i - c_j| over all cell gradients.
  double lipschitz_bound() const;
};

double eval_dc(const DCFunction& f, std::span<const double> x);

enum class CombineMode { Add, Max, Min };

DCFunction combine(CombineMode mode, std::span<const DCFunction> args);
DCFunction add(const DCFunction& f1, const DCFunction& f2);
DCFunction max(const DCFunction& f1, const DCFunction& f2);
DCFunction min(const DCFunction& f1, const DCFunction& f2);
// Negative factors swap g and h; zero yields g = h = {0}.
DCFunction scale(const DCFunction& f, double s);
DCFunction negate(const DCFunction& f);
DCFunction add_constant(const DCFunction& f, double c);
// Returns x -> f(M x + t), where M has dim(f) rows and t has dim(f) entries.
DCFunction precompose(const DCFunction& f, const std::vector<Vec>& m, const Vec& t);
// Adds a trailing unused coordinate dimension: (x, y) -> f(x).
DCFunction lift(const DCFunction& f, std::size_t new_dim, std::span<const std::size_t> coords);

// Lattice (max/min) expression over affine leaves.
struct LatticeExpr {
  enum class Op { Leaf, Max, Min };
  Op op = Op::Leaf;
  AffineMap leaf;
  std::vector<LatticeExpr> children;

  static LatticeExpr affine(AffineMap m);
  static LatticeExpr max(std::vector<LatticeExpr> c);
  static LatticeExpr min(std::vector<LatticeExpr> c);

  double operator()(std::span<const double> x) const;
  std::size_t dim() const;  // throws on malformed trees
};

// min(a, b) = a + b - max(a, b) recursion; piece counts can grow
// combinatorially with nesting depth.
DCFunction lattice_to_dc(const LatticeExpr& expr);

struct VPolytope {
  std::vector<Vec> vertices;
  std::size_t dim() const { return vertices.empty() ? 0 : vertices.front().size(); }
};

enum class Exactness { ConvexExact, ClarkeExact, OuterEstimate };
const char* to_string(Exactness e);

struct SubdiffResult {
  VPolytope hull;
  Exactness exactness = Exactness::OuterEstimate;
};

enum class SubdiffMode { ConvexPart, Outer, Clarke };

inline constexpr double kActivityTol = 1e-9;
inline constexpr double kCellTol = 1e-8;

// Clarke mode certifies each jointly active (g_i, h_j) pair by a small LP
// maximizing the minimum slack of the strict activity system; supported for
// d <= 3. `neighborhood` bounds the LP box around x.
SubdiffResult subdiff(const DCFunction& f, std::span<const double> x, SubdiffMode mode,
                      double tol = kActivityTol, double neighborhood = 1.0);

enum class Side { Left, Right };
double one_sided_slope_1d(const DCFunction& f, double x, Side side, double tol = kActivityTol);

}  // namespace wdc
