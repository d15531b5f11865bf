#include "wdc/sector.hpp"

#include <algorithm>
#include <cmath>

#include "wdc/errors.hpp"

namespace wdc {
namespace {

SectorCheck failure(std::string reason, std::optional<double> x = std::nullopt) {
  SectorCheck c;
  c.ok = false;
  c.reason = std::move(reason);
  c.abscissa = x;
  return c;
}

// Knot just beyond the radius so the checked range reaches past it.
double reach(const Pwa1d& p, double r, bool right) {
  double w = r * (1.0 + 1e-6) + 1e-12;
  for (double k : p.knots) {
    const double kk = right ? k : -k;
    if (kk > r && kk < w) w = kk;
  }
  return w;
}

}  // namespace

SectorCheck check_gauge(const Pwa1d& phi0, double limit, bool right) {
  const Pwa1d phi = phi0.with_knot(0.0);
  // Work on the right half; the left half is mirrored through x -> -x.
  Vec xs{0.0};
  for (double k : phi.knots) {
    const double kk = right ? k : -k;
    if (kk > 0.0 && kk < limit) xs.push_back(kk);
  }
  xs.push_back(limit);
  std::sort(xs.begin(), xs.end());
  auto f = [&](double t) { return phi(right ? t : -t); };
  for (std::size_t k = 0; k + 1 < xs.size(); ++k) {
    const double l = xs[k], u = xs[k + 1];
    if (u <= l) continue;
    const double s = (f(u) - f(l)) / (u - l);
    const double c = f(l) - s * l;
    // d/dt (t^2 + (s t + c)^2) = 2((1 + s^2) t + s c)
    auto deriv = [&](double t) { return 2.0 * ((1.0 + s * s) * t + s * c); };
    const double dl = deriv(l), du = deriv(u);
    const double tol = 1e-12 * (1.0 + std::abs(dl) + std::abs(du));
    if (dl < -tol) return failure("radial gauge not increasing", right ? l : -l);
    if (du < -tol) {
      const double root = -s * c / (1.0 + s * s);
      return failure("radial gauge not increasing", right ? root : -root);
    }
    if (std::abs(dl) <= tol && std::abs(du) <= tol) return failure("radial gauge constant", right ? l : -l);
  }
  return {};
}

SectorCheck validate_sector(const OpenSectorSpec& spec) {
  if (spec.phi.dim() != 1) return failure("sector boundary must be one-dimensional");
  if (!(spec.radius > 0.0)) return failure("sector radius must be positive");
  if (std::abs(spec.phi(Vec{0.0})) > 1e-12) return failure("sector boundary must pass through the apex", 0.0);
  const Pwa1d p = Pwa1d::from_dc(spec.phi);
  auto r = check_gauge(p, reach(p, spec.radius, true), true);
  if (!r.ok) return r;
  return check_gauge(p, reach(p, spec.radius, false), false);
}

SectorCheck validate_sector(const DegenerateSectorSpec& spec, bool check_tangent) {
  if (spec.lo.dim() != 1 || spec.hi.dim() != 1) return failure("sector boundaries must be one-dimensional");
  if (!(spec.radius > 0.0)) return failure("sector radius must be positive");
  if (std::abs(spec.lo(Vec{0.0})) > 1e-12 || std::abs(spec.hi(Vec{0.0})) > 1e-12)
    return failure("sector boundaries must pass through the apex", 0.0);
  if (check_tangent) {
    if (std::abs(one_sided_slope_1d(spec.lo, 0.0, Side::Right)) > 1e-12)
      return failure("lower boundary has nonzero right slope at the apex", 0.0);
    if (std::abs(one_sided_slope_1d(spec.hi, 0.0, Side::Right)) > 1e-12)
      return failure("upper boundary has nonzero right slope at the apex", 0.0);
  }
  const Pwa1d lo = Pwa1d::from_dc(spec.lo), hi = Pwa1d::from_dc(spec.hi);
  Vec xs{0.0, spec.radius};
  for (double k : lo.knots)
    if (k > 0 && k < spec.radius) xs.push_back(k);
  for (double k : hi.knots)
    if (k > 0 && k < spec.radius) xs.push_back(k);
  std::sort(xs.begin(), xs.end());
  for (double x : xs)
    if (lo(x) > hi(x) + 1e-12 * (1.0 + std::abs(hi(x)))) return failure("lower boundary above upper boundary", x);
  auto a = check_gauge(lo, reach(lo, spec.radius, true), true);
  if (!a.ok) return a;
  return check_gauge(hi, reach(hi, spec.radius, true), true);
}

P2 to_frame(P2 world, double angle) { return rotate(world, -angle); }
P2 to_world(P2 frame, double angle) { return rotate(frame, angle); }

bool in_open_sector(const OpenSectorSpec& s, P2 p) {
  if (norm(p) >= s.radius) return false;
  const P2 f = to_frame(p, s.angle);
  return f.y > s.phi(Vec{f.x});
}

bool in_degenerate_sector(const DegenerateSectorSpec& s, P2 p, double tol) {
  if (norm(p) >= s.radius) return false;
  const P2 f = to_frame(p, s.angle);
  if (f.x < -tol) return false;
  const double x = std::max(f.x, 0.0);
  return s.lo(Vec{x}) - tol <= f.y && f.y <= s.hi(Vec{x}) + tol;
}

}  // namespace wdc
