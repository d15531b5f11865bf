#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstring>
#include <limits>
#include <random>

#include "germs.hpp"
#include "shapes.hpp"
#include "wdc/errors.hpp"
#include "wdc/io.hpp"

using namespace wdc;
using wdc::io::json;

namespace {

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

bool same_parts(const MaxAffine& p, const MaxAffine& q) {
  if (p.size() != q.size()) return false;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (!same_bits(p[i].b, q[i].b) || p[i].a.size() != q[i].a.size()) return false;
    for (std::size_t k = 0; k < p[i].a.size(); ++k)
      if (!same_bits(p[i].a[k], q[i].a[k])) return false;
  }
  return true;
}

DCFunction reparse(const DCFunction& f) { return io::dc_from_json(json::parse(io::dump(io::to_json(f)))); }

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  return static_cast<ErrorKind>(-1);
}

}  // namespace

TEST_CASE("dc functions round trip bit for bit") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_int_distribution<int> ex(-300, 300);
  for (int t = 0; t < 200; ++t) {
    const std::size_t d = 1 + t % 4;
    auto piece = [&] {
      AffineMap m;
      for (std::size_t k = 0; k < d; ++k) m.a.push_back(std::ldexp(u(rng), ex(rng) / 10));
      m.b = std::ldexp(u(rng), ex(rng));
      return m;
    };
    std::vector<AffineMap> g, h;
    for (int i = 0; i < 1 + t % 5; ++i) g.push_back(piece());
    for (int i = 0; i < 1 + t % 3; ++i) h.push_back(piece());
    const DCFunction f{MaxAffine(g), MaxAffine(h)};
    const DCFunction r = reparse(f);
    CHECK(same_parts(f.g, r.g));
    CHECK(same_parts(f.h, r.h));
  }
}

TEST_CASE("numbers") {
  const double inf = std::numeric_limits<double>::infinity();
  CHECK(io::num(inf) == "inf");
  CHECK(io::num(-inf) == "-inf");
  CHECK(io::num(std::nan("")) == "nan");
  CHECK(io::get_num(json("inf")) == inf);
  CHECK(io::get_num(json("-inf")) == -inf);
  CHECK(std::isnan(io::get_num(json("nan"))));
  CHECK(io::get_num(json(3)) == 3.0);
  CHECK(kind_of([] { io::get_num(json("three")); }) == ErrorKind::Validation);
  for (double x : {0.1, 1.0 / 3.0, 5e-324, 1.7976931348623157e308, -0.0})
    CHECK(same_bits(io::get_num(json::parse(io::num(x).dump())), x));
}

TEST_CASE("function documents") {
  const auto sq = shapes::square();
  CHECK(io::to_json(sq)["schema"] == io::kSchema);
  CHECK(io::to_json(sq)["kind"] == "dc");

  auto p = json::parse(R"({"schema":"wdc/1","kind":"pwa1d","knots":[0,1],"values":[0,2],"left_slope":-1,"right_slope":0})");
  const auto f = io::dc_from_json(p);
  for (double x : {-2.0, 0.0, 0.5, 1.0, 3.0}) {
    const double want = x < 0 ? -x : x < 1 ? 2 * x : 2.0;
    CHECK(f(Vec{x}) == doctest::Approx(want));
  }
  const auto pw = io::pwa_from_json(p);
  CHECK(io::to_json(pw)["values"][1] == 2.0);

  auto l = json::parse(R"({"kind":"lattice","expr":{"max":[{"a":[1,0],"b":0},{"min":[{"a":[0,1],"b":0},{"affine":{"a":[0,0],"b":1}}]}]}})");
  const auto g = io::dc_from_json(l);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int i = 0; i < 200; ++i) {
    const double x = u(rng), y = u(rng);
    CHECK(g(Vec{x, y}) == doctest::Approx(std::max(x, std::min(y, 1.0))).epsilon(1e-12));
  }

  auto convex = json::parse(R"({"kind":"dc","dim":1,"g":{"pieces":[{"a":[1],"b":0},{"a":[-1],"b":0}]}})");
  CHECK(io::dc_from_json(convex)(Vec{-2.5}) == 2.5);

  CHECK(kind_of([] { io::dc_from_json(json::parse(R"({"schema":"wdc/9","kind":"dc"})")); }) == ErrorKind::Validation);
  CHECK(kind_of([] { io::dc_from_json(json::parse(R"({"kind":"model"})")); }) == ErrorKind::Validation);
  CHECK(kind_of([] { io::dc_from_json(json::parse(R"({"kind":"dc","dim":2})")); }) == ErrorKind::Validation);
  CHECK(kind_of([] {
          io::dc_from_json(json::parse(R"({"kind":"dc","dim":2,"g":{"pieces":[{"a":[1],"b":0}]}})"));
        }) == ErrorKind::Dimension);
  CHECK(kind_of([] {
          io::dc_from_json(json::parse(R"({"kind":"pwa1d","knots":[1,0],"values":[0,0],"left_slope":0,"right_slope":0})"));
        }) == ErrorKind::Validation);
  CHECK(kind_of([] { io::dc_from_json(json::parse(R"({"kind":"lattice","expr":{"max":[]}})")); }) == ErrorKind::Validation);
}

TEST_CASE("models and germs round trip") {
  for (const auto& gm : germs::suite()) {
    CAPTURE(gm.name);
    const auto m = characterize_local(gm.g);
    const auto j = io::to_json(m);
    const auto back = io::model_from_json(json::parse(io::dump(j)));
    CHECK(io::to_json(back) == j);
    CHECK(back.condition == m.condition);
    for (int i = 0; i < 40; ++i)
      for (int k = 1; k <= 4; ++k) {
        const double t = 2 * kPi * i / 40, r = m.rho * k / 5;
        const P2 p{m.x.x + r * std::cos(t), m.x.y + r * std::sin(t)};
        CHECK(back.contains(p) == m.contains(p));
      }
    const auto gj = io::to_json(gm.g);
    const auto g2 = io::germ_from_json(json::parse(io::dump(gj)));
    CHECK(io::to_json(g2) == gj);
    CHECK(characterize_local(g2).condition == gm.condition);
  }
  CHECK(kind_of([] { io::model_from_json(json::parse(R"({"kind":"germ"})")); }) == ErrorKind::Validation);
  CHECK(kind_of([] {
          io::model_from_json(json::parse(R"({"kind":"model","condition":"sideways","x":[0,0],"rho":1})"));
        }) == ErrorKind::Validation);
}

TEST_CASE("report payloads") {
  AuraReport a;
  a.margin = std::numeric_limits<double>::infinity();
  a.empty_shell = true;
  const auto aj = io::to_json(a);
  CHECK(aj["kind"] == "aura-report");
  CHECK(aj["margin"] == "inf");

  EulerResult e;
  e.chi = -1;
  e.per_loop = {1, -1, -1};
  CHECK(io::to_json(e)["chi"] == -1);
  CHECK(io::to_json(e)["method"] == std::string(to_string(EulerMethod::Degree)));

  const auto k = ifs_generate(IfsSpec{}, 2);
  const auto kj = io::to_json(k);
  CHECK(kj["segments"].size() == 4);
  CHECK(kj["depth"] == 2);

  SegmentCover c;
  c.segments.push_back(Seg2{{0, 0}, {1, 1}, {{SourceKind::GSeam, 0, 2}}});
  const auto cj = io::to_json(c);
  CHECK(cj["segments"][0]["provenance"][0]["j"] == 2);
  CHECK(cj["segments"][0]["q"][1] == 1.0);
  CHECK(io::dump(cj).back() == '\n');
}
