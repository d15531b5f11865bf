#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "wdc/errors.hpp"
#include "wdc/io.hpp"
#include "wdc/numfmt.hpp"
#include "wdc/polytope.hpp"

using namespace wdc;
using io::json;

namespace {

std::string fx(double v, int prec = 9) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::abs(v) < 0.5 * std::pow(10.0, -prec)) v = 0.0;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", prec, v);
  return buf;
}

std::string fx(std::span<const double> x) {
  std::string s = "(";
  for (std::size_t i = 0; i < x.size(); ++i) s += (i ? ", " : "") + fx(x[i]);
  return s + ")";
}

std::string fx(P2 p) { return fx(Vec{p.x, p.y}); }

void put(const std::string& key, const std::string& val) { std::cout << key << '=' << val << '\n'; }
void put(const std::string& key, double v) { put(key, fx(v)); }
void put_count(const std::string& key, std::size_t n) { put(key, std::to_string(n)); }

int exit_code(ErrorKind k) {
  return k == ErrorKind::Regularity || k == ErrorKind::Consistency ? 3 : 2;
}

struct Common {
  std::string out;
  int threads = 1;
  std::uint64_t seed = 1;
};

struct State {
  Common c;
  std::function<int()> run;
};

void sidecar(const Common& c, const json& doc) {
  if (!c.out.empty()) io::write_text(c.out, io::dump(doc));
}

DCFunction load_fn(const std::string& path) { return io::dc_from_json(io::read_json(path)); }

void need_dim(const DCFunction& f, std::size_t d, const char* what) {
  if (f.dim() != d) fail(ErrorKind::Dimension, std::string(what) + " needs a function of " + std::to_string(d) + " variables");
}

Box2 to_box(const std::vector<double>& b) {
  if (b.size() != 4) fail(ErrorKind::Validation, "--box takes xlo,xhi,ylo,yhi");
  if (!(b[0] < b[1] && b[2] < b[3])) fail(ErrorKind::Validation, "--box must have xlo < xhi and ylo < yhi");
  return Box2{b[0], b[1], b[2], b[3]};
}

std::vector<Vec> read_curve(const std::string& path) {
  std::istringstream in(io::read_text(path));
  std::vector<Vec> pts;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    for (auto& ch : line)
      if (ch == ',') ch = ' ';
    std::istringstream ls(line);
    Vec p;
    double v;
    while (ls >> v) p.push_back(v);
    if (p.empty()) continue;
    if (!ls.eof()) fail(ErrorKind::Validation, path + ": bad curve line \"" + line + "\"");
    pts.push_back(std::move(p));
  }
  if (pts.size() < 2) fail(ErrorKind::Validation, path + ": a curve needs at least two points");
  return pts;
}

// Margin of {0 < f < shell}; throws Regularity when it is not positive.
double shell_margin(const DCFunction& f, double shell, const Common& c) {
  SamplingPlan plan;
  plan.seed = c.seed;
  plan.threads = c.threads;
  const auto rep = check_weak_regularity(f, 0.0, shell, plan);
  if (!(rep.margin > 0.0)) fail(ErrorKind::Regularity, "no positive margin on the shell (0, " + fx(shell) + ")");
  return std::isinf(rep.margin) ? 1.0 : rep.margin;
}

void add_common(CLI::App* s, Common& c, bool threads = false, bool seed = false) {
  s->add_option("--out", c.out, "machine-readable report (JSON)");
  if (threads) s->add_option("--threads", c.threads, "worker cap")->capture_default_str()->check(CLI::PositiveNumber);
  if (seed) s->add_option("--seed", c.seed, "probe seed")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Polyhedral DC functions and WDC sets"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");
  State st;
  Common& c = st.c;

  std::string fn, fn2, model, germ, save, svg, csv, curve, method = "degree", mode = "clarke";
  std::vector<double> at, dir, box;
  double level = 0.0, eps = 1.0, grid = 0.05, shell = 1.0, step = 0.05, alpha_deg = 18.0, refine = kPi / 2;
  std::optional<double> margin, fan_tol;
  std::size_t samples = 4096, probes = 10000;
  int depth = 8, min_k = 1;
  FractalCheckOptions fopt;

  {
    auto* s = app.add_subcommand("eval", "evaluate f at a point");
    s->add_option("--fn", fn, "function file")->required();
    s->add_option("--at", at, "point x1,x2,...")->required()->delimiter(',');
    add_common(s, c);
    s->callback([&] {
      st.run = [&] {
        const auto f = load_fn(fn);
        if (at.size() != f.dim()) fail(ErrorKind::Dimension, "point dimension mismatch");
        const double v = f(at);
        put("x", fx(at));
        put("f", v);
        sidecar(c, io::document("eval", json{{"x", at}, {"f", io::num(v)}}));
        return 0;
      };
    });
  }
  {
    auto* s = app.add_subcommand("subdiff", "subdifferential hull at a point");
    s->add_option("--fn", fn, "function file")->required();
    s->add_option("--at", at, "point x1,x2,...")->required()->delimiter(',');
    s->add_option("--mode", mode, "convex | outer | clarke")->capture_default_str()->check(CLI::IsMember({"convex", "outer", "clarke"}));
    add_common(s, c);
    s->callback([&] {
      st.run = [&] {
        const auto f = load_fn(fn);
        if (at.size() != f.dim()) fail(ErrorKind::Dimension, "point dimension mismatch");
        const auto m = mode == "convex" ? SubdiffMode::ConvexPart : mode == "outer" ? SubdiffMode::Outer : SubdiffMode::Clarke;
        const auto r = subdiff(f, at, m);
        put("exactness", to_string(r.exactness));
        put_count("vertices", r.hull.vertices.size());
        for (const auto& v : r.hull.vertices) put("vertex", fx(v));
        const Vec p = min_norm_point(r.hull);
        put("min_norm_point", fx(p));
        put("min_norm", norm(p));
        sidecar(c, io::to_json(r));
        return 0;
      };
    });
  }
  {
    auto* s = app.add_subcommand("check-aura", "weak-regularity margin on the shell c < f < c + eps");
    s->add_option("--fn", fn, "function file")->required();
    s->add_option("--level", level, "level c")->capture_default_str();
    s->add_option("--eps", eps, "shell width")->capture_default_str();
    s->add_option("--samples", samples, "probe points when sampled")->capture_default_str();
    s->add_option("--box", box, "probe box xlo,xhi,ylo,yhi")->delimiter(',');
    add_common(s, c, true, true);
    s->callback([&] {
      st.run = [&] {
        const auto f = load_fn(fn);
        SamplingPlan plan;
        plan.seed = c.seed;
        plan.threads = c.threads;
        plan.samples = samples;
        if (!box.empty()) {
          const Box2 b = to_box(box);
          plan.lo = {b.xlo, b.ylo};
          plan.hi = {b.xhi, b.yhi};
        }
        const auto r = check_weak_regularity(f, level, eps, plan);
        put("mode", to_string(r.mode));
        put("level", r.level);
        put("shell_width", r.shell_width);
        put_count("samples", r.samples);
        put("empty_shell", r.empty_shell ? "yes" : "no");
        put("margin", r.margin);
        if (!r.argmin.empty()) put("witness", fx(r.argmin));
        put_count("violations", r.violations.size());
        sidecar(c, io::to_json(r));
        const bool ok = r.margin > 0.0 && r.violations.empty();
        put("regular", ok ? "yes" : "no");
        return ok ? 0 : 3;
      };
    });
  }
  {
    auto* s = app.add_subcommand("sum-aura", "aura of the union of two zero sets");
    s->add_option("--fn", fn, "first aura")->required();
    s->add_option("--fn2", fn2, "second aura")->required();
    s->add_option("--save", save, "write the sum as a function file");
    s->add_option("--samples", samples, "touch probes when sampled")->capture_default_str();
    add_common(s, c, true, true);
    s->callback([&] {
      st.run = [&] {
        const auto f = load_fn(fn), g = load_fn(fn2);
        SamplingPlan plan;
        plan.seed = c.seed;
        plan.threads = c.threads;
        plan.samples = samples;
        WeakTouchReport tr;
        const auto h = aura_sum(f, g, plan, &tr);
        put("touched", tr.touched ? "yes" : "no");
        put_count("candidates", tr.candidates);
        put_count("g_pieces", h.g.size());
        put_count("h_pieces", h.h.size());
        if (!save.empty()) io::write_text(save, io::dump(io::to_json(h)));
        sidecar(c, io::document("sum-aura", json{{"touch", io::to_json(tr)}, {"sum", io::to_json(h)}}));
        return 0;
      };
    });
  }
  {
    auto* s = app.add_subcommand("retract", "gradient-flow retraction from a point onto f <= 0");
    s->add_option("--fn", fn, "function file")->required();
    s->add_option("--at", at, "start point")->required()->delimiter(',');
    s->add_option("--eps", margin, "regularity margin (default: computed on the shell)");
    s->add_option("--shell", shell, "shell width for the computed margin")->capture_default_str();
    s->add_option("--step", step, "pseudo-time step")->capture_default_str();
    s->add_option("--csv", csv, "trace CSV");
    s->add_option("--svg", svg, "trace SVG (two variables)");
    add_common(s, c, true, true);
    s->callback([&] {
      st.run = [&] {
        const auto f = load_fn(fn);
        RetractionConfig cfg;
        cfg.eps_reg = margin ? *margin : shell_margin(f, shell, c);
        cfg.step = step;
        const auto t = retract(f, at, cfg);
        const auto v = verify_trace(f, t, cfg);
        put("margin", cfg.eps_reg);
        put("start", fx(t.start().x));
        put("f_start", t.start().fx);
        put("end", fx(t.end().x));
        put("f_end", t.end().fx);
        put("t_end", t.end().t);
        put_count("steps", t.samples.size() - 1);
        put_count("halvings", t.halvings);
        put("time_ratio", v.time_ratio);
        put("worst_iv", v.worst_iv);
        put("verified", v.ok ? "yes" : "no");
        for (const auto& m : v.failures) put("failure", m);
        if (!csv.empty()) io::write_text(csv, trace_csv(t));
        if (!svg.empty()) io::write_text(svg, trace_svg({t}));
        sidecar(c, io::document("retract", json{{"trace", io::to_json(t)}, {"verify", io::to_json(v)}}));
        return v.ok ? 0 : 3;
      };
    });
  }
  {
    auto* s = app.add_subcommand("boundary-path", "push an exterior curve onto the boundary");
    s->add_option("--fn", fn, "function file")->required();
    s->add_option("--curve", curve, "curve points, one x,y,... per line")->required();
    s->add_option("--eps", margin, "regularity margin (default: computed on the shell)");
    s->add_option("--shell", shell, "shell width for the computed margin")->capture_default_str();
    s->add_option("--step", step, "pseudo-time step")->capture_default_str();
    add_common(s, c, true, true);
    s->callback([&] {
      st.run = [&] {
        const auto f = load_fn(fn);
        RetractionConfig cfg;
        cfg.eps_reg = margin ? *margin : shell_margin(f, shell, c);
        cfg.step = step;
        const auto r = boundary_path(f, read_curve(curve), cfg);
        put("margin", cfg.eps_reg);
        put_count("points", r.points.size());
        put("input_diameter", r.input_diameter);
        put("output_diameter", r.output_diameter);
        put("bound", r.bound);
        put("lip_bound", r.lip_bound);
        put("within_bound", r.ok ? "yes" : "no");
        sidecar(c, io::to_json(r));
        return r.ok ? 0 : 3;
      };
    });
  }
  {
    auto* s = app.add_subcommand("euler", "Euler characteristic of f <= level");
    s->add_option("--fn", fn, "function file")->required();
    s->add_option("--level", level, "level r")->capture_default_str();
    s->add_option("--grid", grid, "grid spacing")->capture_default_str()->check(CLI::PositiveNumber);
    s->add_option("--method", method, "degree | cubical")->capture_default_str()->check(CLI::IsMember({"degree", "cubical"}));
    s->add_option("--box", box, "grid box xlo,xhi,ylo,yhi")->delimiter(',');
    add_common(s, c);
    s->callback([&] {
      st.run = [&] {
        const auto f = load_fn(fn);
        need_dim(f, 2, "euler");
        std::optional<Box2> b;
        if (!box.empty()) b = to_box(box);
        const auto r = method == "degree" ? euler_degree_2d(f, level, grid, refine, b) : euler_cubical(f, level, grid, b);
        put("chi", std::to_string(r.chi));
        put("method", to_string(r.method));
        std::string per;
        for (std::size_t i = 0; i < r.per_loop.size(); ++i) per += (i ? "," : "") + std::to_string(r.per_loop[i]);
        put(r.method == EulerMethod::Degree ? "windings" : "cells", per);
        sidecar(c, io::to_json(r));
        return 0;
      };
    });
  }
  {
    auto* s = app.add_subcommand("level", "closed level loops of f = level");
    s->add_option("--fn", fn, "function file")->required();
    s->add_option("--level", level, "level r")->capture_default_str();
    s->add_option("--grid", grid, "grid spacing")->capture_default_str()->check(CLI::PositiveNumber);
    s->add_option("--box", box, "grid box xlo,xhi,ylo,yhi")->delimiter(',');
    s->add_option("--csv", csv, "loop points CSV");
    s->add_option("--svg", svg, "loop SVG");
    add_common(s, c);
    s->callback([&] {
      st.run = [&] {
        const auto f = load_fn(fn);
        need_dim(f, 2, "level");
        std::optional<Box2> b;
        if (!box.empty()) b = to_box(box);
        const auto l = level_loops_2d(f, level, grid, b);
        put("level", l.level);
        put("box", fx(Vec{l.box.xlo, l.box.xhi, l.box.ylo, l.box.yhi}));
        put_count("loops", l.loops.size());
        for (const auto& lp : l.loops) put_count("loop_points", lp.size());
        if (!l.note.empty()) put("note", l.note);
        if (!csv.empty()) io::write_text(csv, loops_csv(l));
        if (!svg.empty()) io::write_text(svg, loops_svg(l));
        sidecar(c, io::to_json(l));
        return 0;
      };
    });
  }
  {
    auto* s = app.add_subcommand("classify", "type of a planar model at its apex in a direction");
    s->add_option("--model", model, "model file")->required();
    s->add_option("--dir", dir, "direction vx,vy")->required()->delimiter(',');
    s->add_option("--min-k", min_k, "first cone exponent, u = 2^-k")->capture_default_str();
    add_common(s, c);
    s->callback([&] {
      st.run = [&] {
        const auto m = io::model_from_json(io::read_json(model));
        if (dir.size() != 2) fail(ErrorKind::Dimension, "--dir takes vx,vy");
        const auto t = classify_direction(m, P2{dir[0], dir[1]}, min_k);
        put("type", to_string(t.type));
        put("r", t.r);
        put("u", t.u);
        put("k", std::to_string(t.k));
        put("upper", t.U ? "yes" : "no");
        put("lower", t.L ? "yes" : "no");
        sidecar(c, io::to_json(t));
        return 0;
      };
    });
  }
  {
    auto* s = app.add_subcommand("characterize", "local model of a planar germ");
    s->add_option("--germ", germ, "germ file")->required();
    s->add_option("--save", save, "write the model file");
    s->add_option("--svg", svg, "model SVG");
    add_common(s, c);
    s->callback([&] {
      st.run = [&] {
        const auto m = characterize_local(io::germ_from_json(io::read_json(germ)));
        put("condition", to_string(m.condition));
        put("x", fx(m.x));
        put("rho", m.rho);
        if (m.condition == LocalCondition::Degenerate) put("angle", m.degenerate.angle);
        put_count("sectors", m.sectors.size());
        for (const auto& sc : m.sectors) put("sector_angle", sc.angle);
        const auto j = io::to_json(m);
        if (!save.empty()) io::write_text(save, io::dump(j));
        if (!svg.empty()) io::write_text(svg, model_svg(m));
        sidecar(c, j);
        return 0;
      };
    });
  }
  {
    auto* s = app.add_subcommand("sector-aura", "aura of a planar model");
    s->add_option("--model", model, "model file")->required();
    s->add_option("--probes", probes, "zero-set probes")->capture_default_str();
    s->add_option("--save", save, "write the aura as a function file");
    add_common(s, c);
    s->callback([&] {
      st.run = [&] {
        const auto m = io::model_from_json(io::read_json(model));
        const auto a = build_planar_aura(m, probes);
        put("condition", to_string(m.condition));
        put_count("probes", a.probes);
        put("margin", a.report.margin);
        put_count("g_pieces", a.F.g.size());
        put_count("h_pieces", a.F.h.size());
        if (!save.empty()) io::write_text(save, io::dump(io::to_json(a.F)));
        sidecar(c, io::document("sector-aura", json{{"aura", io::to_json(a.F)}, {"report", io::to_json(a.report)},
                                                    {"probes", a.probes}}));
        return 0;
      };
    });
  }
  auto cover_cmd = [&](const char* name, const char* help, int which) {
    auto* s = app.add_subcommand(name, help);
    s->add_option("--fn", fn, "function file")->required();
    s->add_option("--eps", eps, which == 2 ? "shell width of the aura check" : "subgradient threshold")->capture_default_str();
    s->add_option("--box", box, "box xlo,xhi,ylo,yhi")->delimiter(',');
    s->add_option("--csv", csv, "segments CSV");
    s->add_option("--svg", svg, "cover SVG");
    add_common(s, c);
    s->callback([&, which] {
      st.run = [&, which] {
        const auto f = load_fn(fn);
        need_dim(f, 2, "segment covers");
        std::optional<Box2> b;
        if (!box.empty()) b = to_box(box);
        SegmentCover cov;
        json doc;
        if (which == 0) {
          if (f.h.size() != 1) fail(ErrorKind::Validation, "singular needs a convex function (one concave piece)");
          cov = singular_set_pwa_2d(f.g, eps, b.value_or(Box2{}));
          doc = io::to_json(cov);
        } else if (which == 1) {
          cov = zero_set_large_subdiff_2d(f, eps, b.value_or(Box2{}));
          doc = io::to_json(cov);
        } else {
          const auto bc = boundary_cover_2d(f, eps, b);
          cov = bc.cover;
          put("margin", bc.aura.margin);
          put("traced", bc.traced ? "yes" : "no");
          if (bc.traced) put("trace_distance", bc.trace_distance);
          doc = io::to_json(bc);
        }
        put("threshold", cov.threshold);
        put_count("segments", cov.segments.size());
        for (const auto& g : cov.segments) put("segment", fx(g.p) + " " + fx(g.q));
        put("clipped", cov.clipped ? "yes" : "no");
        put_count("verified", cov.verified);
        if (!cov.note.empty()) put("note", cov.note);
        if (!csv.empty()) io::write_text(csv, cover_csv(cov));
        if (!svg.empty()) io::write_text(svg, cover_svg(cov));
        sidecar(c, doc);
        return 0;
      };
    });
  };
  cover_cmd("singular", "points where the active gradients of a convex function spread more than eps", 0);
  cover_cmd("zero-cover", "points of f = 0 with a subgradient longer than eps", 1);
  cover_cmd("boundary-cover", "segment cover of the boundary of the zero set of an aura", 2);

  {
    auto* s = app.add_subcommand("fractal-gen", "depth-n approximation of the self-similar curve");
    s->add_option("--alpha-deg", alpha_deg, "angle alpha in degrees")->capture_default_str();
    s->add_option("--depth", depth, "depth n")->capture_default_str();
    s->add_option("--csv", csv, "segments CSV");
    s->add_option("--svg", svg, "polyline SVG");
    add_common(s, c);
    s->callback([&] {
      st.run = [&] {
        const auto k = ifs_generate(IfsSpec{alpha_deg * kPi / 180.0}, depth);
        put("alpha_deg", alpha_deg);
        put("depth", std::to_string(k.depth));
        put_count("segments", k.segments.size());
        put("ratio", k.spec.ratio());
        put("hausdorff_bound", k.hausdorff_bound);
        if (!csv.empty()) {
          std::string t = "segment,x0,y0,x1,y1\n";
          for (std::size_t i = 0; i < k.segments.size(); ++i) {
            const auto& g = k.segments[i];
            t += std::to_string(i) + ',' + shortest(g.p.x) + ',' + shortest(g.p.y) + ',' + shortest(g.q.x) + ',' +
                 shortest(g.q.y) + '\n';
          }
          io::write_text(csv, t);
        }
        if (!svg.empty()) io::write_text(svg, fractal_svg(k));
        sidecar(c, io::to_json(k));
        return 0;
      };
    });
  }
  {
    auto* s = app.add_subcommand("fractal-check", "min-norm Clarke bound for the distance to the curve on a shell");
    s->add_option("--alpha-deg", alpha_deg, "angle alpha in degrees")->capture_default_str();
    s->add_option("--depth", depth, "depth n")->capture_default_str();
    s->add_option("--grid", fopt.grid, "grid spacing")->capture_default_str()->check(CLI::PositiveNumber);
    s->add_option("--shell-lo", fopt.shell_lo, "inner shell radius")->capture_default_str();
    s->add_option("--shell-hi", fopt.shell_hi, "outer shell radius")->capture_default_str();
    s->add_option("--fan-tol", fan_tol, "near-foot tolerance (default grid/10)");
    s->add_option("--tol", fopt.tol, "allowed shortfall below -cos(gamma)")->capture_default_str();
    add_common(s, c, true);
    s->callback([&] {
      st.run = [&] {
        const auto k = ifs_generate(IfsSpec{alpha_deg * kPi / 180.0}, depth);
        auto o = fopt;
        o.fan_tol = fan_tol;
        o.threads = c.threads;
        const auto r = fractal_regularity_check(k, o);
        put("min", r.min_norm);
        put("argmin", fx(r.argmin));
        put("bound", r.bound);
        put("tol", r.tol);
        put_count("grid_points", r.grid_points);
        put_count("shell_points", r.shell_points);
        put_count("singleton", r.singleton);
        put("discretization", r.discretization);
        put("pass", r.pass ? "yes" : "no");
        sidecar(c, io::to_json(r));
        return r.pass ? 0 : 3;
      };
    });
  }
  {
    auto* s = app.add_subcommand("fractal-dim", "similarity dimension of the self-similar curve");
    s->add_option("--alpha-deg", alpha_deg, "angle alpha in degrees")->capture_default_str();
    add_common(s, c);
    s->callback([&] {
      st.run = [&] {
        const IfsSpec spec{alpha_deg * kPi / 180.0};
        const double d = hausdorff_dim(spec);
        put("alpha_deg", alpha_deg);
        put("ratio", spec.ratio());
        put("dim", fx(d, 12));
        sidecar(c, io::document("fractal-dim", json{{"alpha", io::num(spec.alpha)}, {"dim", io::num(d)}}));
        return 0;
      };
    });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }
  try {
    return st.run();
  } catch (const Error& e) {
    std::cerr << "error (" << to_string(e.kind()) << "): " << e.what() << '\n';
    try {
      sidecar(c, io::document("error", json{{"error", to_string(e.kind())}, {"message", e.what()}}));
    } catch (const Error&) {
    }
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
