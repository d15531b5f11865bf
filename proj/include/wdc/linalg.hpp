#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace wdc {

using Vec = std::vector<double>;

inline double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

inline Vec sub(std::span<const double> a, std::span<const double> b) {
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

inline Vec add(std::span<const double> a, std::span<const double> b) {
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

inline Vec scaled(std::span<const double> a, double s) {
  Vec r(a.begin(), a.end());
  for (double& v : r) v *= s;
  return r;
}

// a + s * b
inline Vec axpy(std::span<const double> a, double s, std::span<const double> b) {
  Vec r(a.begin(), a.end());
  for (std::size_t i = 0; i < r.size(); ++i) r[i] += s * b[i];
  return r;
}

inline double dist(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

inline double norm_inf(std::span<const double> a) {
  double m = 0.0;
  for (double v : a) m = std::max(m, std::abs(v));
  return m;
}

// Solves the square system m * x = rhs in place by partial pivoting.
// Returns false when the matrix is numerically singular.
bool solve_linear(std::vector<Vec>& m, Vec& rhs, double pivot_tol = 1e-14);

// Plain 2-d point used by the planar machinery.
struct P2 {
  double x = 0.0;
  double y = 0.0;
};

inline P2 operator+(P2 a, P2 b) { return {a.x + b.x, a.y + b.y}; }
inline P2 operator-(P2 a, P2 b) { return {a.x - b.x, a.y - b.y}; }
inline P2 operator*(double s, P2 a) { return {s * a.x, s * a.y}; }
inline double dot(P2 a, P2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(P2 a, P2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(P2 a) { return std::hypot(a.x, a.y); }
inline P2 rotate(P2 p, double angle) {
  const double c = std::cos(angle), s = std::sin(angle);
  return {c * p.x - s * p.y, s * p.x + c * p.y};
}
inline Vec to_vec(P2 p) { return {p.x, p.y}; }
inline P2 to_p2(std::span<const double> v) { return {v[0], v[1]}; }

constexpr double kPi = 3.14159265358979323846;

// Wraps an angle into (-pi, pi].
inline double wrap_angle(double a) {
  a = std::fmod(a, 2.0 * kPi);
  if (a <= -kPi) a += 2.0 * kPi;
  if (a > kPi) a -= 2.0 * kPi;
  return a;
}

// Wraps an angle into [0, 2 pi).
inline double wrap_positive(double a) {
  a = std::fmod(a, 2.0 * kPi);
  if (a < 0) a += 2.0 * kPi;
  if (a >= 2.0 * kPi) a -= 2.0 * kPi;
  return a;
}

}  // namespace wdc
