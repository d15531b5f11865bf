#include "wdc/io.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "wdc/errors.hpp"

namespace wdc::io {
namespace {

json vec(std::span<const double> v) {
  json a = json::array();
  for (double x : v) a.push_back(num(x));
  return a;
}

json pt(P2 p) { return json::array({num(p.x), num(p.y)}); }

Vec get_vec(const json& j) {
  if (!j.is_array()) fail(ErrorKind::Validation, "expected an array of numbers");
  Vec v;
  for (const auto& x : j) v.push_back(get_num(x));
  return v;
}

P2 get_pt(const json& j) {
  const Vec v = get_vec(j);
  if (v.size() != 2) fail(ErrorKind::Dimension, "expected a planar point");
  return {v[0], v[1]};
}

const json& field(const json& j, const char* name) {
  if (!j.is_object() || !j.contains(name)) fail(ErrorKind::Validation, std::string("missing field \"") + name + "\"");
  return j.at(name);
}

double num_or(const json& j, const char* name, double dflt) { return j.contains(name) ? get_num(j.at(name)) : dflt; }

AffineMap affine_from(const json& j) { return AffineMap{get_vec(field(j, "a")), get_num(field(j, "b"))}; }

MaxAffine max_affine_from(const json& j, std::size_t dim) {
  std::vector<AffineMap> ps;
  for (const auto& p : field(j, "pieces")) {
    ps.push_back(affine_from(p));
    if (ps.back().dim() != dim) fail(ErrorKind::Dimension, "piece has the wrong dimension");
  }
  if (ps.empty()) fail(ErrorKind::Validation, "max-affine part needs at least one piece");
  return MaxAffine(std::move(ps));
}

LatticeExpr lattice_from(const json& j) {
  if (j.contains("max") || j.contains("min")) {
    const bool is_max = j.contains("max");
    std::vector<LatticeExpr> cs;
    for (const auto& c : j.at(is_max ? "max" : "min")) cs.push_back(lattice_from(c));
    if (cs.empty()) fail(ErrorKind::Validation, "empty lattice node");
    return is_max ? LatticeExpr::max(std::move(cs)) : LatticeExpr::min(std::move(cs));
  }
  return LatticeExpr::affine(affine_from(j.contains("affine") ? j.at("affine") : j));
}

std::string kind_of(const json& j) { return j.is_object() && j.contains("kind") ? j.at("kind").get<std::string>() : ""; }

void check_schema(const json& j) {
  if (j.is_object() && j.contains("schema") && j.at("schema") != kSchema)
    fail(ErrorKind::Validation, "unsupported schema " + j.at("schema").dump());
}

LocalCondition condition_from(const std::string& s) {
  for (auto c : {LocalCondition::IsolatedPoint, LocalCondition::Degenerate, LocalCondition::Complement})
    if (s == to_string(c)) return c;
  fail(ErrorKind::Validation, "unknown condition " + s);
}

GermSide side_from(const std::string& s) {
  for (auto c : {GermSide::Below, GermSide::Above, GermSide::On})
    if (s == to_string(c)) return c;
  fail(ErrorKind::Validation, "unknown side " + s);
}

json points(const std::vector<P2>& ps) {
  json a = json::array();
  for (const P2 p : ps) a.push_back(pt(p));
  return a;
}

}  // namespace

json num(double x) {
  if (std::isfinite(x)) return x;
  if (std::isnan(x)) return "nan";
  return x > 0 ? "inf" : "-inf";
}

double get_num(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  }
  fail(ErrorKind::Validation, "expected a number, got " + j.dump());
}

json document(const std::string& kind, json payload) {
  json d;
  d["schema"] = kSchema;
  d["kind"] = kind;
  for (auto it = payload.begin(); it != payload.end(); ++it) d[it.key()] = it.value();
  return d;
}

void expect_kind(const json& doc, const std::string& kind) {
  check_schema(doc);
  if (kind_of(doc) != kind) fail(ErrorKind::Validation, "expected a \"" + kind + "\" document, got \"" + kind_of(doc) + "\"");
}

json to_json(const AffineMap& m) { return json{{"a", vec(m.a)}, {"b", num(m.b)}}; }

json to_json(const MaxAffine& p) {
  json a = json::array();
  for (const auto& m : p.pieces()) a.push_back(to_json(m));
  return json{{"pieces", a}};
}

json to_json(const DCFunction& f) {
  return document("dc", json{{"dim", f.dim()}, {"g", to_json(f.g)}, {"h", to_json(f.h)}});
}

json to_json(const Pwa1d& p) {
  return document("pwa1d", json{{"knots", vec(p.knots)}, {"values", vec(p.values)}, {"left_slope", num(p.left_slope)},
                                {"right_slope", num(p.right_slope)}});
}

Pwa1d pwa_from_json(const json& j) {
  check_schema(j);
  Pwa1d p;
  p.knots = get_vec(field(j, "knots"));
  p.values = get_vec(field(j, "values"));
  p.left_slope = get_num(field(j, "left_slope"));
  p.right_slope = get_num(field(j, "right_slope"));
  if (p.knots.empty() || p.knots.size() != p.values.size())
    fail(ErrorKind::Validation, "pwa1d needs matching, nonempty knots and values");
  for (std::size_t k = 1; k < p.knots.size(); ++k)
    if (!(p.knots[k] > p.knots[k - 1])) fail(ErrorKind::Validation, "pwa1d knots must increase strictly");
  return p;
}

DCFunction dc_from_json(const json& j) {
  check_schema(j);
  const std::string k = kind_of(j);
  if (k == "pwa1d" || (k.empty() && j.contains("knots"))) return pwa_from_json(j).to_dc();
  if (k == "lattice") return lattice_to_dc(lattice_from(field(j, "expr")));
  if (!k.empty() && k != "dc") fail(ErrorKind::Validation, "expected a function document, got \"" + k + "\"");
  const auto dim = field(j, "dim").get<std::size_t>();
  if (dim == 0) fail(ErrorKind::Dimension, "dimension must be positive");
  MaxAffine g = max_affine_from(field(j, "g"), dim);
  MaxAffine h = j.contains("h") ? max_affine_from(j.at("h"), dim) : MaxAffine::constant(dim, 0.0);
  return DCFunction(std::move(g), std::move(h));
}

json to_json(const OpenSectorSpec& s) {
  return json{{"angle", num(s.angle)}, {"radius", num(s.radius)}, {"phi", to_json(s.phi)}};
}

json to_json(const DegenerateSectorSpec& s) {
  return json{{"angle", num(s.angle)}, {"radius", num(s.radius)}, {"lo", to_json(s.lo)}, {"hi", to_json(s.hi)}};
}

json to_json(const PlanarLocalModel& m) {
  json p{{"condition", to_string(m.condition)}, {"x", pt(m.x)}, {"rho", num(m.rho)}};
  if (m.condition == LocalCondition::Degenerate) p["degenerate"] = to_json(m.degenerate);
  if (m.condition == LocalCondition::Complement) {
    json a = json::array();
    for (const auto& s : m.sectors) a.push_back(to_json(s));
    p["sectors"] = a;
  }
  return document("model", p);
}

PlanarLocalModel model_from_json(const json& j) {
  expect_kind(j, "model");
  PlanarLocalModel m;
  m.condition = condition_from(field(j, "condition").get<std::string>());
  m.x = get_pt(field(j, "x"));
  m.rho = get_num(field(j, "rho"));
  if (m.condition == LocalCondition::Degenerate) {
    const auto& d = field(j, "degenerate");
    m.degenerate = DegenerateSectorSpec{get_num(field(d, "angle")), num_or(d, "radius", m.rho), dc_from_json(field(d, "lo")),
                                        dc_from_json(field(d, "hi"))};
  }
  if (m.condition == LocalCondition::Complement)
    for (const auto& s : field(j, "sectors"))
      m.sectors.push_back(OpenSectorSpec{get_num(field(s, "angle")), num_or(s, "radius", m.rho), dc_from_json(field(s, "phi"))});
  validate(m);
  return m;
}

json to_json(const RawGerm& g) {
  json cs = json::array();
  for (const auto& c : g.curves) cs.push_back(json{{"angle", num(c.angle)}, {"side", to_string(c.side)}, {"phi", to_json(c.phi)}});
  return document("germ", json{{"x", pt(g.x)}, {"rho_cap", num(g.rho_cap)}, {"curves", cs}});
}

RawGerm germ_from_json(const json& j) {
  expect_kind(j, "germ");
  RawGerm g;
  g.x = get_pt(field(j, "x"));
  g.rho_cap = num_or(j, "rho_cap", 1.0);
  for (const auto& c : field(j, "curves"))
    g.curves.push_back(GermCurve{get_num(field(c, "angle")), dc_from_json(field(c, "phi")), side_from(field(c, "side").get<std::string>())});
  return g;
}

json to_json(const VPolytope& p) {
  json a = json::array();
  for (const auto& v : p.vertices) a.push_back(vec(v));
  return json{{"vertices", a}};
}

json to_json(const SubdiffResult& r) {
  return document("subdiff", json{{"exactness", to_string(r.exactness)}, {"hull", to_json(r.hull)}});
}

json to_json(const AuraReport& r) {
  json v = json::array();
  for (const auto& x : r.violations) v.push_back(vec(x));
  return document("aura-report", json{{"level", num(r.level)},
                                      {"shell_width", num(r.shell_width)},
                                      {"mode", to_string(r.mode)},
                                      {"samples", r.samples},
                                      {"margin", num(r.margin)},
                                      {"empty_shell", r.empty_shell},
                                      {"argmin", vec(r.argmin)},
                                      {"violations", v},
                                      {"box_lo", vec(r.box_lo)},
                                      {"box_hi", vec(r.box_hi)}});
}

json to_json(const WeakTouchReport& r) {
  return document("touch-report",
                  json{{"touched", r.touched}, {"x", vec(r.x)}, {"v", vec(r.v)}, {"candidates", r.candidates}});
}

json to_json(const RetractionTrace& t) {
  json s = json::array();
  for (const auto& x : t.samples) s.push_back(json{{"t", num(x.t)}, {"x", vec(x.x)}, {"f", num(x.fx)}});
  return document("trace", json{{"lip_f", num(t.lip_f)}, {"halvings", t.halvings}, {"samples", s}});
}

json to_json(const TraceReport& r) {
  return document("trace-report", json{{"ok", r.ok},
                                       {"failures", r.failures},
                                       {"worst_iv", num(r.worst_iv)},
                                       {"dist_endpoint", num(r.dist_endpoint)},
                                       {"dist_probe", num(r.dist_probe)},
                                       {"dist_lower", num(r.dist_lower)},
                                       {"worst_v_left", num(r.worst_v_left)},
                                       {"worst_v_right", num(r.worst_v_right)},
                                       {"time_ratio", num(r.time_ratio)},
                                       {"max_speed", num(r.max_speed)}});
}

json to_json(const BoundaryPathReport& r) {
  json p = json::array();
  for (const auto& x : r.points) p.push_back(vec(x));
  return document("boundary-path", json{{"ok", r.ok},
                                        {"input_diameter", num(r.input_diameter)},
                                        {"output_diameter", num(r.output_diameter)},
                                        {"bound", num(r.bound)},
                                        {"lip_bound", num(r.lip_bound)},
                                        {"points", p}});
}

json to_json(const LevelLoops& l) {
  json loops = json::array();
  for (const auto& loop : l.loops) loops.push_back(points(loop));
  return document("level-loops", json{{"level", num(l.level)},
                                      {"grid", num(l.grid)},
                                      {"box", json::array({num(l.box.xlo), num(l.box.xhi), num(l.box.ylo), num(l.box.yhi)})},
                                      {"note", l.note},
                                      {"loops", loops}});
}

json to_json(const EulerResult& r) {
  json res = json::array();
  for (double x : r.residual) res.push_back(num(x));
  return document("euler", json{{"chi", r.chi}, {"method", to_string(r.method)}, {"per_loop", r.per_loop}, {"residual", res}});
}

json to_json(const TypeTag& t) {
  json p{{"type", to_string(t.type)}, {"r", num(t.r)}, {"u", num(t.u)}, {"k", t.k}};
  if (t.U) p["U"] = to_json(*t.U);
  if (t.L) p["L"] = to_json(*t.L);
  return document("type-tag", p);
}

json to_json(const Seg2& s) {
  json pv = json::array();
  for (const auto& p : s.prov) pv.push_back(json{{"kind", to_string(p.kind)}, {"i", p.i}, {"j", p.j}});
  return json{{"p", pt(s.p)}, {"q", pt(s.q)}, {"provenance", pv}};
}

json to_json(const SegmentCover& c) {
  json segs = json::array();
  for (const auto& s : c.segments) segs.push_back(to_json(s));
  return document("segment-cover", json{{"threshold", num(c.threshold)},
                                        {"box", json::array({num(c.box.xlo), num(c.box.xhi), num(c.box.ylo), num(c.box.yhi)})},
                                        {"clipped", c.clipped},
                                        {"verified", c.verified},
                                        {"note", c.note},
                                        {"segments", segs}});
}

json to_json(const BoundaryCover& c) {
  return document("boundary-cover", json{{"cover", to_json(c.cover)},
                                         {"aura", to_json(c.aura)},
                                         {"traced", c.traced},
                                         {"trace_points", c.trace_points},
                                         {"trace_distance", num(c.trace_distance)},
                                         {"trace_tol", num(c.trace_tol)}});
}

json to_json(const FractalApprox& k) {
  json segs = json::array();
  for (const auto& s : k.segments) segs.push_back(json::array({pt(s.p), pt(s.q)}));
  return document("fractal", json{{"alpha", num(k.spec.alpha)},
                                  {"depth", k.depth},
                                  {"hausdorff_bound", num(k.hausdorff_bound)},
                                  {"segments", segs}});
}

json to_json(const FractalCheck& r) {
  return document("fractal-check", json{{"pass", r.pass},
                                        {"min_norm", num(r.min_norm)},
                                        {"argmin", pt(r.argmin)},
                                        {"bound", num(r.bound)},
                                        {"tol", num(r.tol)},
                                        {"fan_tol", num(r.fan_tol)},
                                        {"discretization", num(r.discretization)},
                                        {"grid_points", r.grid_points},
                                        {"shell_points", r.shell_points},
                                        {"singleton", r.singleton}});
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::Validation, "cannot read " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::Validation, "cannot write " + path);
  out << text;
}

json read_json(const std::string& path) {
  try {
    return json::parse(read_text(path));
  } catch (const json::exception& e) {
    fail(ErrorKind::Validation, path + ": " + e.what());
  }
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace wdc::io
