#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "wdc/planar.hpp"

namespace germs {

using wdc::DCFunction;
using wdc::GermCurve;
using wdc::GermSide;
using wdc::kPi;
using wdc::LocalCondition;
using wdc::P2;
using wdc::Pwa1d;
using wdc::RawGerm;
using wdc::Vec;

inline DCFunction pwa(Vec knots, Vec values, double left, double right) {
  return Pwa1d{std::move(knots), std::move(values), left, right}.to_dc();
}
inline DCFunction line(double slope) { return Pwa1d::linear(slope, 0.0).to_dc(); }
inline DCFunction vee(double k) { return pwa({0.0}, {0.0}, -k, k); }

struct Germ {
  std::string name;
  RawGerm g;
  LocalCondition condition;
  std::size_t sectors;
};

inline std::vector<Germ> suite() {
  std::vector<Germ> out;
  out.push_back({"point", {{0, 0}, 1.0, {{0.0, vee(-1), GermSide::Below}, {0.0, vee(1), GermSide::Above}}},
                 LocalCondition::IsolatedPoint, 0});
  out.push_back({"tilted point",
                 {{1, 2}, 0.5, {{0.4, vee(-0.5), GermSide::Below}, {0.4, pwa({0.0, 0.2}, {0.0, 0.6}, -2, 1), GermSide::Above}}},
                 LocalCondition::IsolatedPoint, 0});
  out.push_back({"ray", {{0, 0}, 1.0, {{0.0, line(0), GermSide::On}, {-kPi / 2, line(0), GermSide::Above}}},
                 LocalCondition::Degenerate, 0});
  out.push_back({"bent ray",
                 {{-0.5, 0.25},
                  1.0,
                  {{0.7, pwa({0.0, 0.3}, {0.0, 0.0}, 0.0, 0.5), GermSide::On}, {0.7 - kPi / 2, line(0), GermSide::Above}}},
                 LocalCondition::Degenerate, 0});
  out.push_back({"half-plane", {{0, 0}, 1.0, {{0.0, line(0), GermSide::Below}}}, LocalCondition::Complement, 1});
  out.push_back({"quadrants I and III",
                 {{0, 0}, 1.0, {{kPi / 4, vee(1), GermSide::Below}, {5 * kPi / 4, vee(1), GermSide::Below}}},
                 LocalCondition::Complement, 2});
  out.push_back({"line", {{0, 0}, 1.0, {{0.0, line(0), GermSide::On}}}, LocalCondition::Complement, 2});
  out.push_back({"wedge", {{0.3, 0.3}, 1.0, {{0.0, vee(2), GermSide::Above}}}, LocalCondition::Complement, 1});
  out.push_back({"kinked boundary",
                 {{0.5, -0.25}, 0.8, {{0.3, pwa({-0.4, 0.0, 0.3}, {-0.1, 0.0, 0.15}, 1, -0.5), GermSide::Below}}},
                 LocalCondition::Complement, 1});
  const double k = std::sqrt(3.0);
  out.push_back({"three notches",
                 {{0, 0},
                  1.0,
                  {{0.0, vee(k), GermSide::Below}, {2 * kPi / 3, vee(k), GermSide::Below},
                   {4 * kPi / 3, vee(k), GermSide::Below}}},
                 LocalCondition::Complement, 3});
  return out;
}

}  // namespace germs
