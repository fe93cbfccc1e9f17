#include "geodecomp/mesh_curves.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>
#include <random>
#include <set>
#include <sstream>

#include "geodecomp/errors.hpp"
#include "geodecomp/numerics.hpp"

namespace geodecomp {

namespace {

constexpr double kClampS = 1e-7;

struct P2 {
  double x = 0.0, y = 0.0;
};

double dist(P2 a, P2 b) { return std::hypot(a.x - b.x, a.y - b.y); }

// Length between two vertices of triangle t.
double local_len(const PLSurface& m, int t, int va, int vb) {
  const MeshTriangle& tr = m.triangle(t);
  for (int k = 0; k < 3; ++k) {
    const int u = tr.v[k], v = tr.v[(k + 1) % 3];
    if ((u == va && v == vb) || (u == vb && v == va)) return tr.len[k];
  }
  fail(ErrorCode::InvalidCurve, "vertices do not span a triangle side");
}

// Planar layout of triangle t with edge e on the x axis: the edge's smaller
// vertex id at the origin, the larger at (len, 0), the third corner at
// sign * positive y.  Returns positions indexed like tr.v.
std::array<P2, 3> layout(const PLSurface& m, int t, int e, double sign) {
  const MeshTriangle& tr = m.triangle(t);
  const auto [ea, eb] = m.edge_vertices(e);
  int ia = -1, ib = -1, ic = -1;
  for (int k = 0; k < 3; ++k) {
    if (tr.v[k] == ea) ia = k;
    else if (tr.v[k] == eb) ib = k;
    else ic = k;
  }
  if (ia < 0 || ib < 0)
    fail(ErrorCode::InvalidCurve, "edge does not belong to the triangle");
  const double L = m.edge_length(e);
  const double da = local_len(m, t, ea, tr.v[ic]);
  const double db = local_len(m, t, eb, tr.v[ic]);
  const double x = (L * L + da * da - db * db) / (2.0 * L);
  const double y2 = da * da - x * x;
  std::array<P2, 3> p;
  p[ia] = {0.0, 0.0};
  p[ib] = {L, 0.0};
  p[ic] = {x, sign * std::sqrt(std::max(y2, 0.0))};
  return p;
}

P2 crossing_point(const PLSurface& m, int t, const std::array<P2, 3>& pos,
                  const MeshCrossing& c) {
  const auto [ea, eb] = m.edge_vertices(c.edge);
  const MeshTriangle& tr = m.triangle(t);
  int ia = -1, ib = -1;
  for (int k = 0; k < 3; ++k) {
    if (tr.v[k] == ea) ia = k;
    if (tr.v[k] == eb) ib = k;
  }
  if (ia < 0 || ib < 0)
    fail(ErrorCode::InvalidCurve, "crossing edge does not belong to the triangle");
  return {pos[ia].x + c.s * (pos[ib].x - pos[ia].x),
          pos[ia].y + c.s * (pos[ib].y - pos[ia].y)};
}

// Triangle containing both edges, or -1.
int shared_triangle(const PLSurface& m, int e1, int e2) {
  for (const auto& s1 : m.edge_sides(e1)) {
    if (s1.tri < 0) continue;
    for (const auto& s2 : m.edge_sides(e2))
      if (s2.tri == s1.tri) return s1.tri;
  }
  return -1;
}

double segment_length(const PLSurface& m, const MeshCrossing& a,
                      const MeshCrossing& b) {
  if (a.edge == b.edge)
    return std::abs(a.s - b.s) * m.edge_length(a.edge);
  const int t = shared_triangle(m, a.edge, b.edge);
  if (t < 0)
    fail(ErrorCode::InvalidCurve, "consecutive crossings do not share a triangle");
  const auto pos = layout(m, t, a.edge, 1.0);
  return dist(crossing_point(m, t, pos, a), crossing_point(m, t, pos, b));
}

// Fan of triangles at v on the left of the directed corner (vprev, v, vnext).
// interior lists the link vertices in splice order (vprev side first); angle
// is the corner angle sum.  complete is false when the walk exits through
// the boundary, in which case angle is infinite.
struct Fan {
  bool complete = false;
  double angle = kInf;
  std::vector<int> interior;
};

Fan left_fan(const PLSurface& m, int vprev, int v, int vnext) {
  Fan fan;
  const int e0 = m.edge_between(v, vnext);
  if (e0 < 0) fail(ErrorCode::InvalidCurve, "walk step is not a mesh edge");
  int cur = -1;
  for (const auto& s : m.edge_sides(e0))
    if (s.tri >= 0 && m.triangle(s.tri).v[s.side] == v) cur = s.tri;
  if (cur < 0) return fan; // (v, vnext) is boundary with nothing on the left

  std::vector<int> ws;
  double angle = 0.0;
  int guard = 0;
  while (true) {
    int corner = -1;
    for (int k = 0; k < 3; ++k)
      if (m.triangle(cur).v[k] == v) corner = k;
    angle += m.angle(cur, corner);
    const int entered_from = m.triangle(cur).v[(corner + 2) % 3];
    if (entered_from == vprev) break;
    ws.push_back(entered_from);
    const int e = m.edge_between(v, entered_from);
    int nxt = -1;
    for (const auto& s : m.edge_sides(e))
      if (s.tri >= 0 && s.tri != cur) nxt = s.tri;
    if (nxt < 0) return fan; // boundary before reaching vprev
    cur = nxt;
    if (++guard > m.triangle_count())
      fail(ErrorCode::InvalidCurve, "corner fan walk did not close");
  }
  fan.complete = true;
  fan.angle = angle;
  std::reverse(ws.begin(), ws.end());
  fan.interior = std::move(ws);
  return fan;
}

Fan right_fan(const PLSurface& m, int vprev, int v, int vnext) {
  Fan fan = left_fan(m, vnext, v, vprev);
  std::reverse(fan.interior.begin(), fan.interior.end());
  return fan;
}

// Removes immediate backtracks (a, b, a) and repeated vertices in place.
void normalize_walk(std::vector<int>& loop) {
  bool changed = true;
  while (changed && loop.size() >= 2) {
    changed = false;
    const int n = int(loop.size());
    for (int i = 0; i < n; ++i) {
      if (loop[i] == loop[(i + 1) % n]) {
        loop.erase(loop.begin() + i);
        changed = true;
        break;
      }
    }
    if (changed) continue;
    if (loop.size() < 3) break;
    const int n2 = int(loop.size());
    for (int i = 0; i < n2; ++i) {
      const int prev = loop[(i + n2 - 1) % n2];
      const int next = loop[(i + 1) % n2];
      if (prev == next) {
        // Drop the spur vertex and one copy of its neighbor.
        const int j1 = i, j2 = (i + 1) % n2;
        if (j2 > j1) {
          loop.erase(loop.begin() + j2);
          loop.erase(loop.begin() + j1);
        } else {
          loop.erase(loop.begin() + j1);
          loop.erase(loop.begin() + j2);
        }
        changed = true;
        break;
      }
    }
  }
}

bool bounds_single_face(const PLSurface& m, const std::vector<int>& loop) {
  if (loop.size() != 3) return false;
  const int e = m.edge_between(loop[0], loop[1]);
  if (e < 0) return false;
  for (const auto& s : m.edge_sides(e)) {
    if (s.tri < 0) continue;
    const auto& tr = m.triangle(s.tri);
    bool all = true;
    for (int v : loop) {
      if (tr.v[0] != v && tr.v[1] != v && tr.v[2] != v) all = false;
    }
    if (all) return true;
  }
  return false;
}

} // namespace

double path_length(const PLSurface& mesh, const MeshPath& path) {
  const int n = int(path.crossings.size());
  if (n == 0) return 0.0;
  if (n == 1)
    fail(ErrorCode::InvalidCurve, "a closed path needs at least two crossings");
  double sum = 0.0;
  for (int i = 0; i < n; ++i)
    sum += segment_length(mesh, path.crossings[i], path.crossings[(i + 1) % n]);
  return sum;
}

namespace {

// Strictly shortening re-route of one crossing run around a vertex.  Sliding
// crossings along their own edges cannot take a taut path past a vertex it
// presses against, so the sweep stalls above the true length.  For each
// maximal run of consecutive crossings on edges at a common vertex, unfold
// the fan on the far side of that vertex, drop the straight chord between
// the flanking crossing points, and splice in its spoke crossings when the
// chord is admissible and shorter.  Both sleeves bound a disk around the
// vertex, so the homotopy class is untouched.  Returns true after one flip.
bool flip_run_across_vertex(const PLSurface& mesh,
                            std::vector<MeshCrossing>& cs) {
  const int n = int(cs.size());
  if (n < 3) return false;
  const auto incident = [&](int e, int v) {
    const auto [p, q] = mesh.edge_vertices(e);
    return p == v || q == v;
  };
  const auto far_end = [&](int e, int v) {
    const auto [p, q] = mesh.edge_vertices(e);
    return p == v ? q : p;
  };
  const auto angle_at = [&](int tri, int v) {
    const MeshTriangle& tr = mesh.triangle(tri);
    for (int k = 0; k < 3; ++k)
      if (tr.v[k] == v) return mesh.angle(tri, k);
    fail(ErrorCode::InvalidCurve, "vertex does not belong to the triangle");
  };
  const auto other_spoke = [&](int tri, int v, int not_e) {
    const MeshTriangle& tr = mesh.triangle(tri);
    for (int k = 0; k < 3; ++k) {
      if (tr.v[k] == v) continue;
      const int e = mesh.edge_between(v, tr.v[k]);
      if (e >= 0 && e != not_e) return e;
    }
    return -1;
  };

  for (int i = 0; i < n; ++i) {
    const auto [ea, eb] = mesh.edge_vertices(cs[i].edge);
    for (const int v0 : {ea, eb}) {
      if (incident(cs[(i + n - 1) % n].edge, v0)) continue; // not a run start
      int b = i, run = 1;
      std::vector<int> run_edges = {cs[i].edge};
      while (run < n && incident(cs[(b + 1) % n].edge, v0)) {
        b = (b + 1) % n;
        run_edges.push_back(cs[b].edge);
        ++run;
      }
      if (run >= n) continue; // the path encircles the vertex, no flanks
      bool simple = true;
      for (std::size_t x = 0; x + 1 < run_edges.size() && simple; ++x)
        for (std::size_t y = x + 1; y < run_edges.size(); ++y)
          if (run_edges[x] == run_edges[y]) simple = false;
      if (!simple) continue; // let the spur pass clean this up first

      const MeshCrossing& before = cs[(i + n - 1) % n];
      const MeshCrossing& after = cs[(b + 1) % n];
      const int ta = shared_triangle(mesh, before.edge, cs[i].edge);
      const int tb = shared_triangle(mesh, cs[b].edge, after.edge);
      if (ta < 0 || tb < 0) continue;

      // Walk the complementary fan: spokes[k] separates tris[k] and
      // tris[k + 1]; aborts at the boundary or if it meets the run again.
      std::vector<int> spokes, tris = {ta};
      int cur_t = ta, cur_e = other_spoke(ta, v0, cs[i].edge);
      bool okw = cur_e >= 0;
      int guard = 0;
      while (okw) {
        if (std::find(run_edges.begin(), run_edges.end(), cur_e) !=
            run_edges.end()) {
          okw = false;
          break;
        }
        spokes.push_back(cur_e);
        int nxt = -1;
        for (const auto& s : mesh.edge_sides(cur_e))
          if (s.tri >= 0 && s.tri != cur_t) nxt = s.tri;
        if (nxt < 0) {
          okw = false; // pinned vertex sits on the boundary
          break;
        }
        tris.push_back(nxt);
        if (nxt == tb && spokes.size() >= 1 &&
            other_spoke(tb, v0, cs[b].edge) == cur_e)
          break;
        cur_t = nxt;
        cur_e = other_spoke(nxt, v0, cur_e);
        okw = cur_e >= 0 && ++guard <= mesh.triangle_count() + 3;
      }
      if (!okw || spokes.empty()) continue;
      const int m = int(spokes.size());

      // Unfold the complementary fan flat: the pinned vertex at the origin,
      // the first spoke along angle zero, later triangles clockwise.
      std::vector<double> phi(m);
      phi[0] = 0.0;
      for (int k = 1; k < m; ++k) phi[k] = phi[k - 1] - angle_at(tris[k], v0);
      const double phi_start = angle_at(ta, v0);
      const double phi_end = phi[m - 1] - angle_at(tb, v0);
      const auto ray = [](double a) { return P2{std::cos(a), std::sin(a)}; };
      const auto at = [](P2 d, double r) { return P2{d.x * r, d.y * r}; };

      const P2 sa = at(ray(phi_start), mesh.edge_length(cs[i].edge));
      const P2 w1 = at(ray(phi[0]), mesh.edge_length(spokes[0]));
      const P2 wm = at(ray(phi[m - 1]), mesh.edge_length(spokes[m - 1]));
      const P2 sb = at(ray(phi_end), mesh.edge_length(cs[b].edge));
      const auto lerp_on = [&](int e, double s, int id_a, P2 pa, P2 pb) {
        const P2 from = mesh.edge_vertices(e).first == id_a ? pa : pb;
        const P2 to = mesh.edge_vertices(e).first == id_a ? pb : pa;
        return P2{from.x + s * (to.x - from.x), from.y + s * (to.y - from.y)};
      };
      const P2 P =
          lerp_on(before.edge, before.s, far_end(cs[i].edge, v0), sa, w1);
      const P2 Q =
          lerp_on(after.edge, after.s, far_end(cs[b].edge, v0), sb, wm);

      // The chord P -> Q must cross every spoke ray in order.
      const P2 dq = {Q.x - P.x, Q.y - P.y};
      const auto cross2 = [](P2 a, P2 b) { return a.x * b.y - a.y * b.x; };
      std::vector<MeshCrossing> repl(m);
      std::vector<P2> pts(m);
      bool geo = true;
      double prev_u = 0.0;
      for (int k = 0; k < m && geo; ++k) {
        const P2 d = ray(phi[k]);
        const double den = cross2(d, dq);
        if (std::abs(den) < 1e-300) {
          geo = false;
          break;
        }
        const double u = -cross2(d, P) / den;
        const P2 hit = {P.x + u * dq.x, P.y + u * dq.y};
        const double t = hit.x * d.x + hit.y * d.y;
        if (u <= prev_u || u >= 1.0 || t <= 0.0) {
          geo = false;
          break;
        }
        prev_u = u;
        const double L = mesh.edge_length(spokes[k]);
        const double s = std::clamp(t / L, kClampS, 1.0 - kClampS);
        pts[k] = at(d, s * L);
        repl[k] = {spokes[k],
                   mesh.edge_vertices(spokes[k]).first == v0 ? s : 1.0 - s};
      }
      if (!geo) continue;

      double new_len = dist(P, pts[0]) + dist(pts[m - 1], Q);
      for (int k = 0; k + 1 < m; ++k) new_len += dist(pts[k], pts[k + 1]);
      double old_len = segment_length(mesh, before, cs[i]) +
                       segment_length(mesh, cs[b], after);
      for (int k = i; k != b; k = (k + 1) % n)
        old_len += segment_length(mesh, cs[k], cs[(k + 1) % n]);
      if (new_len >= old_len - 1e-13 * std::max(1.0, old_len)) continue;

      std::vector<MeshCrossing> next;
      next.reserve(std::size_t(n - run) + repl.size());
      for (int k = (b + 1) % n; k != i; k = (k + 1) % n) next.push_back(cs[k]);
      next.insert(next.end(), repl.begin(), repl.end());
      cs = std::move(next);
      return true;
    }
  }
  return false;
}

} // namespace

MeshPath shorten_step(const PLSurface& mesh, const MeshPath& path) {
  MeshPath out = path;
  auto& cs = out.crossings;
  const int n = int(cs.size());
  if (n < 3) return out;

  for (int i = 0; i < n; ++i) {
    const MeshCrossing& prev = cs[(i + n - 1) % n];
    const MeshCrossing& next = cs[(i + 1) % n];
    MeshCrossing& cur = cs[i];
    if (prev.edge == cur.edge || next.edge == cur.edge) continue;
    const int ta = shared_triangle(mesh, prev.edge, cur.edge);
    const int tb = shared_triangle(mesh, cur.edge, next.edge);
    if (ta < 0 || tb < 0)
      fail(ErrorCode::InvalidCurve, "consecutive crossings do not share a triangle");
    const auto pos_a = layout(mesh, ta, cur.edge, 1.0);
    const auto pos_b = layout(mesh, tb, cur.edge, -1.0);
    const P2 p = crossing_point(mesh, ta, pos_a, prev);
    const P2 q = crossing_point(mesh, tb, pos_b, next);
    const double L = mesh.edge_length(cur.edge);
    double x;
    const double den = q.y - p.y;
    if (std::abs(den) < 1e-300) {
      x = 0.5 * (p.x + q.x);
    } else {
      x = p.x + (0.0 - p.y) * (q.x - p.x) / den;
    }
    cur.s = std::clamp(x / L, kClampS, 1.0 - kClampS);
  }

  // Cancel spurs that no longer pay for themselves.
  bool changed = true;
  while (changed && cs.size() >= 2) {
    changed = false;
    const int m = int(cs.size());
    if (m == 2 && cs[0].edge == cs[1].edge) {
      cs.clear();
      break;
    }
    for (int i = 0; i < m && m >= 3; ++i) {
      const int j = (i + 1) % m;
      if (cs[i].edge != cs[j].edge) continue;
      const MeshCrossing& before = cs[(i + m - 1) % m];
      const MeshCrossing& after = cs[(j + 1) % m];
      if (before.edge != after.edge &&
          shared_triangle(mesh, before.edge, after.edge) < 0)
        continue;
      const double old_len = segment_length(mesh, before, cs[i]) +
                             segment_length(mesh, cs[i], cs[j]) +
                             segment_length(mesh, cs[j], after);
      const double new_len = (before.edge == after.edge)
                                 ? std::abs(before.s - after.s) *
                                       mesh.edge_length(before.edge)
                                 : segment_length(mesh, before, after);
      if (new_len < old_len - 1e-15 * std::max(1.0, old_len)) {
        if (j > i) {
          cs.erase(cs.begin() + j);
          cs.erase(cs.begin() + i);
        } else {
          cs.erase(cs.begin() + i);
          cs.erase(cs.begin() + j);
        }
        changed = true;
        break;
      }
    }
  }

  flip_run_across_vertex(mesh, cs);
  return out;
}

bool word_reduces_to_empty(const MeshPath& path) {
  std::vector<int> word;
  word.reserve(path.crossings.size());
  for (const auto& c : path.crossings) word.push_back(c.edge);
  bool changed = true;
  while (changed && !word.empty()) {
    changed = false;
    const int n = int(word.size());
    for (int i = 0; i < n; ++i) {
      if (word[i] == word[(i + 1) % n]) {
        const int j = (i + 1) % n;
        if (j > i) {
          word.erase(word.begin() + j);
          word.erase(word.begin() + i);
        } else {
          word.erase(word.begin() + i);
          word.erase(word.begin() + j);
        }
        changed = true;
        break;
      }
    }
  }
  return word.empty();
}

bool is_trivial(const PLSurface& mesh, const MeshPath& path,
                double eps_trivial) {
  if (word_reduces_to_empty(path)) return true;
  if (eps_trivial < 0.0) {
    double shortest = kInf;
    for (int e = 0; e < mesh.edge_count(); ++e)
      shortest = std::min(shortest, mesh.edge_length(e));
    eps_trivial = 1e-6 * shortest;
  }
  MeshPath cur = path;
  double len = path_length(mesh, cur);
  for (int it = 0; it < 10000; ++it) {
    cur = shorten_step(mesh, cur);
    if (cur.crossings.empty() || word_reduces_to_empty(cur)) return true;
    const double next = path_length(mesh, cur);
    if (next < eps_trivial) return true;
    if (len - next < 1e-13 * std::max(1.0, len)) break;
    len = next;
  }
  return false;
}

std::vector<int> snap_to_loop(const PLSurface& mesh, const MeshPath& path) {
  const int n = int(path.crossings.size());
  std::vector<int> loop;
  if (n == 0) return loop;

  std::vector<std::array<int, 2>> ends(n);
  for (int i = 0; i < n; ++i) {
    const auto [a, b] = mesh.edge_vertices(path.crossings[i].edge);
    ends[i] = {a, b};
  }
  if (n == 1) {
    loop.push_back(ends[0][path.crossings[0].s < 0.5 ? 0 : 1]);
    return loop;
  }

  // Rounding every crossing to either endpoint stays a valid walk: the two
  // endpoints chosen for consecutive crossings are corners of their shared
  // triangle, hence equal or joined by one of its edges.  Pick the endpoint
  // combination with the shortest resulting walk by a two-state cyclic
  // sweep, trying both choices for the first crossing.
  const auto hop = [&](int v, int w) {
    if (v == w) return 0.0;
    const int e = mesh.edge_between(v, w);
    return e < 0 ? kInf : mesh.edge_length(e);
  };
  double best = kInf;
  for (int f = 0; f < 2; ++f) {
    std::array<double, 2> d = {kInf, kInf};
    d[f] = 0.0;
    std::vector<std::array<int, 2>> from(n, {-1, -1});
    for (int i = 1; i < n; ++i) {
      std::array<double, 2> nd = {kInf, kInf};
      for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y) {
          const double c = d[y] + hop(ends[i - 1][y], ends[i][x]);
          if (c < nd[x]) {
            nd[x] = c;
            from[i][x] = y;
          }
        }
      d = nd;
    }
    for (int x = 0; x < 2; ++x) {
      const double total = d[x] + hop(ends[n - 1][x], ends[0][f]);
      if (total < best) {
        best = total;
        std::vector<int> picks(n);
        picks[n - 1] = x;
        for (int i = n - 1; i > 0; --i) picks[i - 1] = from[i][picks[i]];
        loop.clear();
        for (int i = 0; i < n; ++i) loop.push_back(ends[i][picks[i]]);
      }
    }
  }
  if (!std::isfinite(best)) {
    // Fall back to nearest-endpoint rounding on a malformed path.
    loop.clear();
    for (int i = 0; i < n; ++i)
      loop.push_back(ends[i][path.crossings[i].s < 0.5 ? 0 : 1]);
  }
  normalize_walk(loop);
  return loop;
}

double loop_length(const PLSurface& mesh, const std::vector<int>& loop) {
  const int n = int(loop.size());
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    const int e = mesh.edge_between(loop[i], loop[(i + 1) % n]);
    if (e < 0) {
      std::ostringstream os;
      os << "walk step (" << loop[i] << ", " << loop[(i + 1) % n]
         << ") is not a mesh edge";
      fail(ErrorCode::InvalidCurve, os.str());
    }
    sum += mesh.edge_length(e);
  }
  return sum;
}

std::pair<double, double> side_angle_sums(const PLSurface& mesh,
                                          const std::vector<int>& loop,
                                          int i) {
  const int n = int(loop.size());
  const int vprev = loop[(i + n - 1) % n];
  const int v = loop[i];
  const int vnext = loop[(i + 1) % n];
  return {left_fan(mesh, vprev, v, vnext).angle,
          right_fan(mesh, vprev, v, vnext).angle};
}

double loop_residual(const PLSurface& mesh, const std::vector<int>& loop) {
  double worst = 0.0;
  for (int i = 0; i < int(loop.size()); ++i) {
    const auto [l, r] = side_angle_sums(mesh, loop, i);
    worst = std::max(worst, kPi - std::min(l, r));
  }
  return std::max(worst, 0.0);
}

namespace {

// Replaces loop[i] by the chain of link vertices on one side (0 = left of
// the directed walk).  A homotopy across the fan.  false when that side
// leaves through the boundary.
bool apply_slide(const PLSurface& mesh, std::vector<int>& loop, int i,
                 int side) {
  const int n = int(loop.size());
  const int vprev = loop[(i + n - 1) % n];
  const int v = loop[i];
  const int vnext = loop[(i + 1) % n];
  const Fan fan = side == 0 ? left_fan(mesh, vprev, v, vnext)
                            : right_fan(mesh, vprev, v, vnext);
  if (!fan.complete) return false;
  std::vector<int> next;
  next.reserve(loop.size() + fan.interior.size());
  for (int j = 0; j < n; ++j) {
    if (j == i) {
      for (int w : fan.interior) next.push_back(w);
    } else {
      next.push_back(loop[j]);
    }
  }
  loop = std::move(next);
  normalize_walk(loop);
  return true;
}

// First strictly shortening slide, if any.
bool improving_slide(const PLSurface& mesh, std::vector<int>& loop) {
  const int n = int(loop.size());
  for (int i = 0; i < n; ++i) {
    const int vprev = loop[(i + n - 1) % n];
    const int v = loop[i];
    const int vnext = loop[(i + 1) % n];
    const double old_len = mesh.edge_length(mesh.edge_between(vprev, v)) +
                           mesh.edge_length(mesh.edge_between(v, vnext));
    for (int side = 0; side < 2; ++side) {
      const Fan fan = side == 0 ? left_fan(mesh, vprev, v, vnext)
                                : right_fan(mesh, vprev, v, vnext);
      if (!fan.complete) continue;
      double new_len = 0.0;
      int at = vprev;
      for (int w : fan.interior) {
        new_len += mesh.edge_length(mesh.edge_between(at, w));
        at = w;
      }
      new_len += mesh.edge_length(mesh.edge_between(at, vnext));
      if (new_len < old_len - 1e-12 * std::max(1.0, old_len)) {
        apply_slide(mesh, loop, i, side);
        return true;
      }
    }
  }
  return false;
}

bool collapsed_walk(const PLSurface& mesh, const std::vector<int>& loop) {
  return loop.size() < 3 || bounds_single_face(mesh, loop);
}

void descend_walk(const PLSurface& mesh, std::vector<int>& loop, int& moves,
                  int max_moves) {
  while (moves < max_moves && !collapsed_walk(mesh, loop)) {
    if (!improving_slide(mesh, loop)) return;
    ++moves;
  }
}

// Transversal push-off of a closed vertex walk: at every corner, cross the
// wedge edges on the chosen side near their walk-vertex ends.  Consecutive
// crossings always lie in a common triangle: within a corner they share the
// fan triangle, and across a walk edge both crossings belong to the triangle
// flanking that edge on the chosen side.
MeshPath push_off(const PLSurface& mesh, const std::vector<int>& walk,
                  int side, bool* ok) {
  MeshPath path;
  *ok = false;
  const int n = int(walk.size());
  const double delta = 0.2;
  for (int i = 0; i < n; ++i) {
    const int vprev = walk[(i + n - 1) % n];
    const int v = walk[i];
    const int vnext = walk[(i + 1) % n];
    const Fan fan = side == 0 ? left_fan(mesh, vprev, v, vnext)
                              : right_fan(mesh, vprev, v, vnext);
    if (!fan.complete) return path;
    for (int u : fan.interior) {
      const int e = mesh.edge_between(v, u);
      if (e < 0) return path;
      path.crossings.push_back(
          {e, mesh.edge_vertices(e).first == v ? delta : 1.0 - delta});
    }
  }
  *ok = path.crossings.size() >= 2;
  return path;
}

// Escape hatch for stalls the vertex walk cannot cross: straightening a
// zigzag in a flat band needs a collective move, but the continuum pull
// shortens it monotonically.  Push the walk off the surface's edge graph,
// pull tight, snap back, and keep the result only when strictly shorter.
bool transversal_escape(const PLSurface& mesh, std::vector<int>& seed,
                        int& moves, int max_moves) {
  const double cur = loop_length(mesh, seed);
  for (int side = 0; side < 2; ++side) {
    bool ok = false;
    MeshPath path = push_off(mesh, seed, side, &ok);
    if (!ok) continue;
    try {
      double len = path_length(mesh, path);
      for (int it = 0; it < 2000; ++it) {
        MeshPath next = shorten_step(mesh, path);
        if (next.crossings.empty()) break;
        const double next_len = path_length(mesh, next);
        path = std::move(next);
        if (len - next_len < 1e-13 * std::max(1.0, len)) {
          len = next_len;
          break;
        }
        len = next_len;
      }
      if (path.crossings.empty() || word_reduces_to_empty(path)) {
        seed.clear();
        return true;
      }
      std::vector<int> cand = snap_to_loop(mesh, path);
      if (cand.size() >= 2) loop_length(mesh, cand); // validates every step
      int cand_moves = moves + 1;
      descend_walk(mesh, cand, cand_moves, max_moves);
      if (collapsed_walk(mesh, cand) ||
          loop_length(mesh, cand) < cur - 1e-12 * std::max(1.0, cur)) {
        seed = std::move(cand);
        moves = cand_moves;
        return true;
      }
    } catch (const Error&) {
      // A malformed push-off only disables this escape direction.
    }
  }
  return false;
}

// Rotation- and reflection-invariant dedupe key for a closed vertex walk.
std::string canonical_loop_key(const std::vector<int>& loop) {
  const int n = int(loop.size());
  int best = 0;
  for (int i = 1; i < n; ++i)
    if (loop[i] < loop[best]) best = i;
  std::vector<int> fwd(n), bwd(n);
  for (int i = 0; i < n; ++i) fwd[i] = loop[(best + i) % n];
  for (int i = 0; i < n; ++i) bwd[i] = loop[(best + n - i) % n];
  if (bwd < fwd) fwd = bwd;
  std::ostringstream os;
  for (int v : fwd) os << v << ',';
  return os.str();
}

// Last-resort escape: best-first search over slide moves, allowing the walk
// to rise a bounded amount above its current length.  Wedged configurations
// that no single slide and no transversal push can crack still sit a short
// uphill-then-downhill slide sequence away from their basin exit; the search
// stops at the first walk that descends strictly below the start.
bool basin_hop(const PLSurface& mesh, std::vector<int>& seed, int& moves,
               int max_moves) {
  const double start = loop_length(mesh, seed);
  double max_edge = 0.0;
  for (int e = 0; e < mesh.edge_count(); ++e)
    max_edge = std::max(max_edge, mesh.edge_length(e));
  const double rise_cap = start + 2.0 * max_edge;
  constexpr int kMaxPops = 4000;

  struct State {
    double length;
    std::vector<int> loop;
    bool operator>(const State& o) const { return length > o.length; }
  };
  std::priority_queue<State, std::vector<State>, std::greater<>> queue;
  std::set<std::string> seen;
  queue.push({start, seed});
  seen.insert(canonical_loop_key(seed));

  for (int pops = 0; pops < kMaxPops && !queue.empty(); ++pops) {
    const State cur = queue.top();
    queue.pop();
    const int n = int(cur.loop.size());
    for (int i = 0; i < n; ++i) {
      for (int side = 0; side < 2; ++side) {
        std::vector<int> trial = cur.loop;
        if (!apply_slide(mesh, trial, i, side)) continue;
        if (collapsed_walk(mesh, trial)) {
          seed = std::move(trial);
          ++moves;
          return true;
        }
        const double len = loop_length(mesh, trial);
        if (len < start - 1e-12 * std::max(1.0, start)) {
          int trial_moves = moves + 1;
          descend_walk(mesh, trial, trial_moves, max_moves);
          seed = std::move(trial);
          moves = trial_moves;
          return true;
        }
        if (len > rise_cap) continue;
        if (!seen.insert(canonical_loop_key(trial)).second) continue;
        queue.push({len, std::move(trial)});
      }
    }
  }
  return false;
}

} // namespace

LoopMinimizeResult minimize_loop(const PLSurface& mesh, std::vector<int> seed,
                                 double eps_geo, int max_moves) {
  LoopMinimizeResult res;
  normalize_walk(seed);
  if (seed.size() >= 2) loop_length(mesh, seed); // validates every step

  descend_walk(mesh, seed, res.moves, max_moves);
  while (res.moves < max_moves) {
    if (collapsed_walk(mesh, seed)) {
      res.tag = OutcomeTag::Trivial;
      res.loop = std::move(seed);
      res.length = res.loop.size() < 2 ? 0.0 : loop_length(mesh, res.loop);
      return res;
    }
    res.residual = loop_residual(mesh, seed);
    if (res.residual <= eps_geo) {
      res.tag = OutcomeTag::Minimizing;
      res.loop = std::move(seed);
      res.length = loop_length(mesh, res.loop);
      return res;
    }

    // The improving slide may sit behind a temporary detour (crossing a band
    // of the mesh lengthens before it shortens).  Force one slide across a
    // side violating the angle condition, descend the copy, and adopt only a
    // strict net improvement.
    const double cur_len = loop_length(mesh, seed);
    bool adopted = false;
    const int n = int(seed.size());
    for (int i = 0; i < n && !adopted; ++i) {
      const auto sums = side_angle_sums(mesh, seed, i);
      for (int side = 0; side < 2 && !adopted; ++side) {
        const double ang = side == 0 ? sums.first : sums.second;
        if (!(ang < kPi - eps_geo)) continue;
        std::vector<int> trial = seed;
        if (!apply_slide(mesh, trial, i, side)) continue;
        int trial_moves = res.moves + 1;
        descend_walk(mesh, trial, trial_moves, max_moves);
        const bool gone = collapsed_walk(mesh, trial);
        if (gone || loop_length(mesh, trial) <
                        cur_len - 1e-12 * std::max(1.0, cur_len)) {
          seed = std::move(trial);
          res.moves = trial_moves;
          adopted = true;
        }
      }
    }
    if (!adopted)
      adopted = transversal_escape(mesh, seed, res.moves, max_moves);
    if (!adopted) adopted = basin_hop(mesh, seed, res.moves, max_moves);
    if (!adopted) {
      res.loop = std::move(seed);
      res.length = cur_len;
      res.tag = OutcomeTag::Inconclusive;
      res.note = "no improving slide, geodesic condition not met";
      return res;
    }
  }
  res.loop = std::move(seed);
  res.length = loop_length(mesh, res.loop);
  res.residual = loop_residual(mesh, res.loop);
  res.tag = OutcomeTag::Inconclusive;
  res.note = "move budget exhausted";
  return res;
}

std::vector<int> perturb_loop(const PLSurface& mesh, std::vector<int> loop,
                              int count, std::uint32_t seed) {
  std::mt19937 rng(seed);
  for (int k = 0; k < count && loop.size() >= 3; ++k) {
    const int n = int(loop.size());
    const int i = int(rng() % std::uint32_t(n));
    const int side = int(rng() & 1u);
    apply_slide(mesh, loop, i, side);
  }
  return loop;
}

bool loop_is_trivial(const PLSurface& mesh, const std::vector<int>& loop) {
  if (mesh.loop_signature(loop) != 0) return false;
  return minimize_loop(mesh, loop).tag == OutcomeTag::Trivial;
}

std::vector<std::vector<int>> shortest_cycles(const PLSurface& mesh,
                                              double budget) {
  struct Candidate {
    double length;
    std::vector<int> loop;
  };
  std::vector<Candidate> found;
  std::set<std::string> seen;


  // Shortest-path tree from every root; every non-tree edge closes a lasso
  // root -> u -> edge -> w -> root.  The tail the two tree paths share
  // doubles back on itself and cancels in normalization, leaving the free
  // cycle.  The shortest cycle of every class through some vertex shows up
  // this way; a per-edge search would only ever see the local detour around
  // each edge.
  const int nv = mesh.vertex_count();
  std::vector<double> dist(nv);
  std::vector<int> parent(nv);
  using Item = std::pair<double, int>;
  for (int root = 0; root < nv; ++root) {
    std::fill(dist.begin(), dist.end(), kInf);
    std::fill(parent.begin(), parent.end(), -1);
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    dist[root] = 0.0;
    pq.push({0.0, root});
    while (!pq.empty()) {
      const auto [dd, x] = pq.top();
      pq.pop();
      if (dd > dist[x]) continue;
      for (int e : mesh.vertex_edges(x)) {
        const auto [a, b] = mesh.edge_vertices(e);
        const int y = (a == x) ? b : a;
        const double nd = dd + mesh.edge_length(e);
        if (nd < dist[y]) {
          dist[y] = nd;
          parent[y] = x;
          pq.push({nd, y});
        }
      }
    }
    for (int e = 0; e < mesh.edge_count(); ++e) {
      const auto [u, w] = mesh.edge_vertices(e);
      if (parent[u] == w || parent[w] == u) continue;
      if (!(dist[u] < kInf) || !(dist[w] < kInf)) continue;
      // The cancelled cycle is never shorter than this, so prune early.
      if (std::abs(dist[u] - dist[w]) + mesh.edge_length(e) > budget + 1e-12)
        continue;
      std::vector<int> walk;
      for (int x = u; x >= 0; x = parent[x]) walk.push_back(x);
      std::reverse(walk.begin(), walk.end()); // root .. u
      for (int x = w; x >= 0; x = parent[x]) walk.push_back(x);
      walk.pop_back(); // w .. root, cyclically closed at the front
      normalize_walk(walk);
      if (walk.size() < 3) continue;
      const double len = loop_length(mesh, walk);
      if (len > budget + 1e-12) continue;
      if (!seen.insert(canonical_loop_key(walk)).second) continue;
      found.push_back({len, std::move(walk)});
    }
  }

  std::stable_sort(found.begin(), found.end(),
                   [](const Candidate& a, const Candidate& b) {
                     return a.length < b.length;
                   });
  std::vector<std::vector<int>> out;
  out.reserve(found.size());
  for (auto& c : found) out.push_back(std::move(c.loop));
  return out;
}

} // namespace geodecomp
