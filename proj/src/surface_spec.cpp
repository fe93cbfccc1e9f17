#include "geodecomp/surface_spec.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "geodecomp/end_classify.hpp"
#include "geodecomp/errors.hpp"
#include "geodecomp/mesh_curves.hpp"
#include "geodecomp/numerics.hpp"

namespace geodecomp {

namespace {

[[noreturn]] void syntax(const std::string& origin, int line, const std::string& msg) {
  fail(ErrorCode::ParseError, origin + ":" + std::to_string(line) + ": " + msg);
}

[[noreturn]] void syntax_at(const std::string& origin, int line, int col, const std::string& msg) {
  fail(ErrorCode::ParseError,
       origin + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " + msg);
}

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

// Tokens with their 1-based starting columns.
std::vector<std::pair<std::string, int>> split_tokens(const std::string& s) {
  std::vector<std::pair<std::string, int>> out;
  size_t i = 0;
  while (i < s.size()) {
    if (s[i] == ' ' || s[i] == '\t' || s[i] == '\r') {
      ++i;
      continue;
    }
    size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t' && s[j] != '\r') ++j;
    out.push_back({s.substr(i, j - i), int(i) + 1});
    i = j;
  }
  return out;
}

double parse_real(const std::string& tok, const std::string& origin, int line, int col) {
  const char* s = tok.c_str();
  char* end = nullptr;
  const double v = std::strtod(s, &end);
  if (end == s || *end != '\0' || std::isnan(v))
    syntax_at(origin, line, col, "malformed number '" + tok + "'");
  return v;
}

int parse_int(const std::string& tok, const std::string& origin, int line, int col) {
  const char* s = tok.c_str();
  char* end = nullptr;
  const long v = std::strtol(s, &end, 10);
  if (end == s || *end != '\0' || v < -1000000000L || v > 1000000000L)
    syntax_at(origin, line, col, "malformed integer '" + tok + "'");
  return int(v);
}

// `a:b` with either endpoint optionally infinite.
std::pair<double, double> parse_range(const std::string& value, const std::string& origin,
                                      int line, int col) {
  const size_t sep = value.find(':');
  if (sep == std::string::npos)
    syntax_at(origin, line, col, "expected a range 'a:b', got '" + value + "'");
  const double lo = parse_real(trim(value.substr(0, sep)), origin, line, col);
  const double hi = parse_real(trim(value.substr(sep + 1)), origin, line, col + int(sep) + 1);
  if (!(lo < hi))
    syntax_at(origin, line, col, "range must satisfy a < b");
  return {lo, hi};
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

enum class Section { None, Surface, Funnel, End, Certificate };

struct PendingFunnel {
  int line = 0;
  std::string end_sel;
  bool end_set = false;
  int loop = -1;
  bool loop_set = false;
  double r_max = 5.0;
};

struct PendingEnd {
  int line = 0;
  int loop = -1;
  bool loop_set = false;
  std::string kind;
  bool kind_set = false;
  std::optional<Expr> warp;
  double r_max = 5.0;
};

}  // namespace

WarpedChart end_chart(const LoopEnd& end) {
  if (end.model == EndModel::Warped) {
    const Expr w = *end.warp;
    return WarpedChart::analytic(
        [w](double r, double t) {
          ExprEnv e;
          e.r = r;
          e.theta = t;
          return w.eval(e);
        },
        {}, 0.0, kInf, 2.0 * kPi);
  }
  if (!(end.seam_len > 0.0))
    fail(ErrorCode::InvalidBoundary, "end chart needs a positive seam length");
  const double g = end.seam_len / (2.0 * kPi);
  const bool cusp = end.model == EndModel::Cusp;
  return WarpedChart::analytic(
      [g, cusp](double r, double) { return g * (cusp ? std::exp(-r) : std::cosh(r)); },
      [](double, double) { return -1.0; }, 0.0, kInf, 2.0 * kPi);
}

std::string mesh_records(const PLSurface& mesh) {
  std::ostringstream out;
  for (int v = 0; v < mesh.vertex_count(); ++v) out << "v " << v << "\n";
  for (int t = 0; t < mesh.triangle_count(); ++t) {
    const MeshTriangle& tr = mesh.triangle(t);
    out << "t " << tr.v[0] << " " << tr.v[1] << " " << tr.v[2] << " " << fmt(tr.len[0]) << " "
        << fmt(tr.len[1]) << " " << fmt(tr.len[2]) << "\n";
  }
  return out.str();
}

SurfaceSpec parse_surface_spec_text(const std::string& text, const std::string& origin) {
  // ---- raw fields gathered during the scan ----
  bool surface_seen = false;
  std::optional<SurfaceKind> kind;
  std::set<std::string> seen_keys;
  std::optional<double> period;
  double r_lo = -kInf, r_hi = kInf;
  std::optional<Expr> warp, curvature, profile;
  double r0 = 0.0, g0 = 1.0, dg0 = 0.0, step = 1e-3;
  std::optional<std::pair<double, double>> x_range;
  std::set<int> vert_ids;
  int max_vert = -1;
  std::vector<MeshTriangle> tris;
  std::optional<double> cert_c;
  int cert_line = 0;

  SurfaceSpec spec;
  std::vector<PendingFunnel> funnels;
  std::vector<PendingEnd> ends;

  Section sec = Section::None;
  PendingFunnel* cur_funnel = nullptr;
  PendingEnd* cur_end = nullptr;

  const auto expr_vars = [&](SurfaceKind k) { return k == SurfaceKind::Revolution ? "x" : "rt"; };

  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    const size_t hash = raw.find('#');
    std::string body = hash == std::string::npos ? raw : raw.substr(0, hash);
    const std::string stripped = trim(body);
    if (stripped.empty()) continue;

    if (stripped.front() == '[') {
      if (stripped.back() != ']')
        syntax(origin, lineno, "unterminated section header '" + stripped + "'");
      const std::string name = trim(stripped.substr(1, stripped.size() - 2));
      cur_funnel = nullptr;
      cur_end = nullptr;
      if (name == "surface") {
        if (surface_seen) syntax(origin, lineno, "duplicate [surface] section");
        surface_seen = true;
        sec = Section::Surface;
      } else if (name == "funnel" || name == "end" || name == "certificate") {
        if (!surface_seen)
          syntax(origin, lineno, "the [surface] section must come before [" + name + "]");
        if (name == "funnel") {
          sec = Section::Funnel;
          funnels.push_back({});
          funnels.back().line = lineno;
          cur_funnel = &funnels.back();
        } else if (name == "end") {
          sec = Section::End;
          ends.push_back({});
          ends.back().line = lineno;
          cur_end = &ends.back();
        } else {
          if (cert_c) syntax(origin, lineno, "duplicate [certificate] section");
          sec = Section::Certificate;
        }
      } else {
        syntax(origin, lineno, "unknown section [" + name + "]");
      }
      continue;
    }

    const size_t eq = body.find('=');
    if (eq == std::string::npos) {
      // Only mesh surfaces have record lines.
      if (sec != Section::Surface || kind != SurfaceKind::Mesh)
        syntax(origin, lineno, "expected 'key = value', got '" + stripped + "'");
      const auto toks = split_tokens(body);
      if (toks[0].first == "v") {
        if (toks.size() != 2)
          syntax(origin, lineno, "vertex record is 'v <id>'");
        const int id = parse_int(toks[1].first, origin, lineno, toks[1].second);
        if (id < 0) syntax_at(origin, lineno, toks[1].second, "vertex id must be >= 0");
        if (!vert_ids.insert(id).second)
          syntax_at(origin, lineno, toks[1].second,
                    "vertex " + std::to_string(id) + " declared twice");
        max_vert = std::max(max_vert, id);
      } else if (toks[0].first == "t") {
        if (toks.size() != 7)
          syntax(origin, lineno, "triangle record is 't <v1> <v2> <v3> <l12> <l23> <l31>'");
        MeshTriangle tr;
        for (int k = 0; k < 3; ++k) {
          tr.v[k] = parse_int(toks[1 + k].first, origin, lineno, toks[1 + k].second);
          if (!vert_ids.count(tr.v[k]))
            syntax_at(origin, lineno, toks[1 + k].second,
                      "triangle " + std::to_string(tris.size()) + " references undeclared vertex " +
                          std::to_string(tr.v[k]));
        }
        if (tr.v[0] == tr.v[1] || tr.v[1] == tr.v[2] || tr.v[0] == tr.v[2])
          syntax(origin, lineno, "triangle " + std::to_string(tris.size()) + " repeats a vertex");
        for (int k = 0; k < 3; ++k) {
          tr.len[k] = parse_real(toks[4 + k].first, origin, lineno, toks[4 + k].second);
          if (!(tr.len[k] > 0.0))
            syntax_at(origin, lineno, toks[4 + k].second,
                      "triangle " + std::to_string(tris.size()) + " has a nonpositive edge");
        }
        for (int k = 0; k < 3; ++k)
          if (!(tr.len[k] < tr.len[(k + 1) % 3] + tr.len[(k + 2) % 3]))
            fail(ErrorCode::InvalidMesh,
                 origin + ":" + std::to_string(lineno) + ": triangle " +
                     std::to_string(tris.size()) + " violates the strict triangle inequality (" +
                     fmt(tr.len[0]) + ", " + fmt(tr.len[1]) + ", " + fmt(tr.len[2]) + ")");
        tris.push_back(tr);
      } else {
        syntax(origin, lineno, "expected a 'v' or 't' record, got '" + stripped + "'");
      }
      continue;
    }

    const std::string key = trim(body.substr(0, eq));
    const std::string value = trim(body.substr(eq + 1));
    const int vcol = int(body.find_first_not_of(" \t", eq + 1)) + 1;
    if (key.empty()) syntax(origin, lineno, "missing key before '='");
    if (value.empty()) syntax(origin, lineno, "key '" + key + "' has no value");

    switch (sec) {
      case Section::None:
        syntax(origin, lineno, "'" + key + "' appears outside any section");
      case Section::Surface: {
        if (!kind) {
          if (key != "kind")
            syntax(origin, lineno, "kind = warped|revolution|mesh must be the first key of [surface]");
          if (value == "warped")
            kind = SurfaceKind::Warped;
          else if (value == "revolution")
            kind = SurfaceKind::Revolution;
          else if (value == "mesh")
            kind = SurfaceKind::Mesh;
          else
            syntax_at(origin, lineno, vcol, "unknown surface kind '" + value + "'");
          break;
        }
        if (!seen_keys.insert(key).second)
          syntax(origin, lineno, "duplicate key '" + key + "'");
        const SurfaceKind k = *kind;
        if (k == SurfaceKind::Warped && key == "period") {
          period = parse_real(value, origin, lineno, vcol);
          if (!(*period > 0.0)) syntax_at(origin, lineno, vcol, "period must be positive");
        } else if (k == SurfaceKind::Warped && key == "r_range") {
          std::tie(r_lo, r_hi) = parse_range(value, origin, lineno, vcol);
        } else if (k == SurfaceKind::Warped && (key == "warp" || key == "curvature")) {
          Expr e = Expr::parse(value, expr_vars(k), lineno, vcol);
          (key == "warp" ? warp : curvature) = std::move(e);
        } else if (k == SurfaceKind::Warped &&
                   (key == "r0" || key == "g0" || key == "dg0")) {
          const double v = parse_real(value, origin, lineno, vcol);
          (key == "r0" ? r0 : key == "g0" ? g0 : dg0) = v;
        } else if ((k == SurfaceKind::Warped || k == SurfaceKind::Revolution) && key == "step") {
          step = parse_real(value, origin, lineno, vcol);
          if (!(step > 0.0)) syntax_at(origin, lineno, vcol, "step must be positive");
        } else if (k == SurfaceKind::Revolution && key == "profile") {
          profile = Expr::parse(value, expr_vars(k), lineno, vcol);
        } else if (k == SurfaceKind::Revolution && key == "x_range") {
          x_range = parse_range(value, origin, lineno, vcol);
        } else {
          syntax(origin, lineno, "unknown key '" + key + "' for this surface kind");
        }
        break;
      }
      case Section::Funnel: {
        PendingFunnel& f = *cur_funnel;
        if (key == "end") {
          if (value != "lo" && value != "hi" && value != "both")
            syntax_at(origin, lineno, vcol, "end must be lo, hi, or both");
          f.end_sel = value;
          f.end_set = true;
        } else if (key == "loop") {
          f.loop = parse_int(value, origin, lineno, vcol);
          f.loop_set = true;
        } else if (key == "r_max") {
          f.r_max = parse_real(value, origin, lineno, vcol);
          if (!(f.r_max > 0.0)) syntax_at(origin, lineno, vcol, "r_max must be positive");
        } else {
          syntax(origin, lineno, "unknown key '" + key + "' in [funnel]");
        }
        break;
      }
      case Section::End: {
        PendingEnd& e = *cur_end;
        if (key == "loop") {
          e.loop = parse_int(value, origin, lineno, vcol);
          e.loop_set = true;
        } else if (key == "kind") {
          if (value != "funnel" && value != "cusp" && value != "warped")
            syntax_at(origin, lineno, vcol, "end kind must be funnel, cusp, or warped");
          e.kind = value;
          e.kind_set = true;
        } else if (key == "warp") {
          e.warp = Expr::parse(value, "rt", lineno, vcol);
        } else if (key == "r_max") {
          e.r_max = parse_real(value, origin, lineno, vcol);
          if (!(e.r_max > 0.0)) syntax_at(origin, lineno, vcol, "r_max must be positive");
        } else {
          syntax(origin, lineno, "unknown key '" + key + "' in [end]");
        }
        break;
      }
      case Section::Certificate: {
        if (key != "c") syntax(origin, lineno, "unknown key '" + key + "' in [certificate]");
        cert_c = parse_real(value, origin, lineno, vcol);
        cert_line = lineno;
        if (!(*cert_c > 0.0)) syntax_at(origin, lineno, vcol, "c must be positive");
        break;
      }
    }
  }

  if (!surface_seen) syntax(origin, std::max(lineno, 1), "missing [surface] section");
  if (!kind) syntax(origin, std::max(lineno, 1), "[surface] never declared its kind");
  spec.kind = *kind;

  // ---- build the surface ----
  switch (*kind) {
    case SurfaceKind::Warped: {
      if (!period) syntax(origin, lineno, "warped surface needs period = <real>");
      if (warp.has_value() == curvature.has_value())
        syntax(origin, lineno, "warped surface needs exactly one of warp or curvature");
      if (warp) {
        const Expr w = *warp;
        spec.chart = WarpedChart::analytic(
            [w](double r, double t) {
              ExprEnv e;
              e.r = r;
              e.theta = t;
              return w.eval(e);
            },
            {}, r_lo, r_hi, *period);
      } else {
        if (!(g0 > 0.0)) syntax(origin, lineno, "g0 must be positive");
        if (!(r0 >= r_lo && r0 <= r_hi))
          syntax(origin, lineno, "r0 = " + fmt(r0) + " lies outside r_range");
        const Expr kexpr = *curvature;
        spec.chart = WarpedChart::from_curvature(
            [kexpr](double r, double t) {
              ExprEnv e;
              e.r = r;
              e.theta = t;
              return kexpr.eval(e);
            },
            kexpr.uses_theta(), r0, g0, dg0, r_lo, r_hi, *period, step);
      }
      break;
    }
    case SurfaceKind::Revolution: {
      if (!profile) syntax(origin, lineno, "revolution surface needs profile = <expr>");
      if (!x_range) syntax(origin, lineno, "revolution surface needs x_range = a:b");
      spec.profile = RevolutionProfile::from_expr(*profile, x_range->first, x_range->second);
      spec.chart = spec.profile->to_chart(step);
      break;
    }
    case SurfaceKind::Mesh: {
      if (tris.empty()) syntax(origin, lineno, "mesh surface has no triangle records");
      for (int id = 0; id <= max_vert; ++id)
        if (!vert_ids.count(id))
          syntax(origin, lineno,
                 "vertex ids must cover 0.." + std::to_string(max_vert) + "; missing " +
                     std::to_string(id));
      try {
        spec.mesh.emplace(max_vert + 1, tris);
      } catch (const Error& e) {
        fail(e.code(), origin + ": " + e.what());
      }
      break;
    }
  }

  // ---- funnel and end sections ----
  for (const PendingFunnel& f : funnels) {
    if (f.end_set && f.loop_set)
      syntax(origin, f.line, "[funnel] takes end = ... or loop = ..., not both");
    if (!f.end_set && !f.loop_set)
      syntax(origin, f.line, "[funnel] needs end = lo|hi|both (charts) or loop = <id> (meshes)");
    if (f.end_set) {
      if (spec.kind == SurfaceKind::Mesh)
        syntax(origin, f.line, "end = " + f.end_sel + " applies to chart surfaces; use loop = <id>");
      if (f.end_sel != "hi") spec.funnels.lo = true;
      if (f.end_sel != "lo") spec.funnels.hi = true;
      spec.funnels.r_max = f.r_max;
    } else {
      if (spec.kind != SurfaceKind::Mesh)
        syntax(origin, f.line, "loop = <id> applies to mesh surfaces; use end = lo|hi|both");
      LoopEnd le;
      le.loop = f.loop;
      le.model = EndModel::Funnel;
      le.r_max = f.r_max;
      le.line = f.line;
      spec.ends.push_back(std::move(le));
    }
  }
  for (PendingEnd& e : ends) {
    if (spec.kind != SurfaceKind::Mesh)
      syntax(origin, e.line, "[end] sections apply to mesh surfaces");
    if (!e.loop_set) syntax(origin, e.line, "[end] needs loop = <id>");
    if (!e.kind_set) syntax(origin, e.line, "[end] needs kind = funnel|cusp|warped");
    if ((e.kind == "warped") != e.warp.has_value())
      syntax(origin, e.line,
             e.kind == "warped" ? "kind = warped needs warp = <expr>"
                                : "warp only applies to kind = warped");
    LoopEnd le;
    le.loop = e.loop;
    le.model = e.kind == "funnel"  ? EndModel::Funnel
               : e.kind == "cusp" ? EndModel::Cusp
                                  : EndModel::Warped;
    le.warp = std::move(e.warp);
    le.r_max = e.r_max;
    le.line = e.line;
    spec.ends.push_back(std::move(le));
  }

  if (!spec.ends.empty()) {
    const auto& loops = spec.mesh->boundary_loops();
    std::set<int> used;
    for (LoopEnd& le : spec.ends) {
      if (le.loop < 0 || le.loop >= int(loops.size()))
        fail(ErrorCode::InvalidBoundary,
             origin + ":" + std::to_string(le.line) + ": loop " + std::to_string(le.loop) +
                 " does not name a boundary loop (surface has " + std::to_string(loops.size()) +
                 ")");
      if (!used.insert(le.loop).second)
        fail(ErrorCode::InvalidBoundary,
             origin + ":" + std::to_string(le.line) + ": loop " + std::to_string(le.loop) +
                 " has more than one end section");
      le.seam_len = loop_length(*spec.mesh, loops[le.loop]);
      if (le.model == EndModel::Warped) {
        // The glue circle of the declared chart must match the loop it meets.
        const Expr w = *le.warp;
        const double circ = simpson_periodic(
            [&](double t) {
              ExprEnv env;
              env.theta = t;
              return w.eval(env);
            },
            2.0 * kPi, 1024);
        if (std::abs(circ - le.seam_len) > 1e-6 * std::max(1.0, le.seam_len))
          fail(ErrorCode::InvalidBoundary,
               origin + ":" + std::to_string(le.line) + ": end at loop " +
                   std::to_string(le.loop) + ": warp circle length " + fmt(circ) +
                   " does not match the boundary length " + fmt(le.seam_len));
      }
    }
  }

  // ---- certificate audit ----
  if (cert_c) {
    const double c = *cert_c;
    if (spec.mesh) {
      if (!spec.mesh->deficit_certificate(c)) {
        int worst = -1;
        double worst_gap = -kInf;
        for (int v = 0; v < spec.mesh->vertex_count(); ++v) {
          if (spec.mesh->boundary_vertex(v)) continue;
          const double gap = spec.mesh->cone_deficit(v) + c * c * spec.mesh->vertex_area(v);
          if (gap > worst_gap) {
            worst_gap = gap;
            worst = v;
          }
        }
        fail(ErrorCode::RejectedWitness,
             origin + ":" + std::to_string(cert_line) + ": certificate c = " + fmt(c) +
                 " rejected: deficit at interior vertex " + std::to_string(worst) +
                 " exceeds -c^2 times its area by " + fmt(worst_gap));
      }
    } else {
      const auto window = spec.chart->current_window(8.0);
      const double bound = sampled_curvature_bound(*spec.chart, window.first, window.second);
      // Slack covers the sampler's finite differencing, nothing more.
      if (bound < c * (1.0 - 1e-6))
        fail(ErrorCode::RejectedWitness,
             origin + ":" + std::to_string(cert_line) + ": certificate c = " + fmt(c) +
                 " rejected: sampled curvature bound is only c = " + fmt(bound));
    }
    spec.certificate_c = c;
  }

  return spec;
}

SurfaceSpec parse_surface_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::IoError, "cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_surface_spec_text(buf.str(), path);
}

}  // namespace geodecomp
