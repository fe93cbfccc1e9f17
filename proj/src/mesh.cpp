#include "geodecomp/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <queue>
#include <sstream>

#include "geodecomp/errors.hpp"
#include "geodecomp/numerics.hpp"

namespace geodecomp {

namespace {

// Relative tolerance for the shared-edge length agreement check.  Generators
// emit both copies from the same arithmetic, so this only has to absorb
// serialization round-trip noise.
constexpr double kEdgeAgree = 1e-9;

struct UnionFind {
  std::vector<int> p;
  explicit UnionFind(int n) : p(n) {
    for (int i = 0; i < n; ++i) p[i] = i;
  }
  int find(int a) {
    while (p[a] != a) a = p[a] = p[p[a]];
    return a;
  }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    p[a] = b;
    return true;
  }
};

} // namespace

PLSurface::PLSurface(int vertex_count, std::vector<MeshTriangle> triangles)
    : nv_(vertex_count), tris_(std::move(triangles)) {
  if (nv_ <= 0 || tris_.empty())
    fail(ErrorCode::InvalidMesh, "mesh needs at least one vertex and one triangle");
  build();
}

void PLSurface::build() {
  for (std::size_t t = 0; t < tris_.size(); ++t) {
    const MeshTriangle& tr = tris_[t];
    for (int k = 0; k < 3; ++k) {
      if (tr.v[k] < 0 || tr.v[k] >= nv_) {
        std::ostringstream os;
        os << "triangle " << t << " references vertex " << tr.v[k]
           << " outside 0.." << nv_ - 1;
        fail(ErrorCode::InvalidMesh, os.str());
      }
      if (!(tr.len[k] > 0.0) || !std::isfinite(tr.len[k])) {
        std::ostringstream os;
        os << "triangle " << t << " has nonpositive edge length " << tr.len[k];
        fail(ErrorCode::InvalidMesh, os.str());
      }
    }
    if (tr.v[0] == tr.v[1] || tr.v[1] == tr.v[2] || tr.v[2] == tr.v[0]) {
      std::ostringstream os;
      os << "triangle " << t << " repeats a vertex (" << tr.v[0] << ", "
         << tr.v[1] << ", " << tr.v[2] << ")";
      fail(ErrorCode::InvalidMesh, os.str());
    }
    const double a = tr.len[0], b = tr.len[1], c = tr.len[2];
    if (!(a + b > c && b + c > a && c + a > b)) {
      std::ostringstream os;
      os << "triangle " << t << " violates the strict triangle inequality"
         << " (lengths " << a << ", " << b << ", " << c << ")";
      fail(ErrorCode::InvalidMesh, os.str());
    }
  }

  orient();

  // Edge table keyed by unordered vertex pair.
  std::map<std::pair<int, int>, int> by_pair;
  tri_edge_.assign(tris_.size(), {-1, -1, -1});
  for (std::size_t t = 0; t < tris_.size(); ++t) {
    for (int k = 0; k < 3; ++k) {
      const int u = tris_[t].v[k], v = tris_[t].v[(k + 1) % 3];
      const auto key = std::minmax(u, v);
      auto it = by_pair.find(key);
      int e;
      if (it == by_pair.end()) {
        e = int(edge_v_.size());
        by_pair.emplace(key, e);
        edge_v_.push_back(key);
        edge_len_.push_back(tris_[t].len[k]);
        edge_tri_.push_back({Side{int(t), k}, Side{-1, 0}});
      } else {
        e = it->second;
        const double have = edge_len_[e], got = tris_[t].len[k];
        if (std::abs(have - got) > kEdgeAgree * std::max(1.0, std::abs(have))) {
          std::ostringstream os;
          os << "edge (" << key.first << ", " << key.second
             << ") length disagrees across triangles: " << have << " vs "
             << got;
          fail(ErrorCode::InvalidMesh, os.str());
        }
        if (edge_tri_[e][1].tri >= 0) {
          std::ostringstream os;
          os << "edge (" << key.first << ", " << key.second
             << ") belongs to more than two triangles";
          fail(ErrorCode::InvalidMesh, os.str());
        }
        edge_tri_[e][1] = Side{int(t), k};
      }
      tri_edge_[t][k] = e;
    }
  }

  vertex_edges_.assign(nv_, {});
  for (int e = 0; e < edge_count(); ++e) {
    vertex_edges_[edge_v_[e].first].push_back(e);
    vertex_edges_[edge_v_[e].second].push_back(e);
  }
  boundary_vertex_.assign(nv_, false);
  for (int e = 0; e < edge_count(); ++e)
    if (boundary_edge(e)) {
      boundary_vertex_[edge_v_[e].first] = true;
      boundary_vertex_[edge_v_[e].second] = true;
    }

  check_links();
  build_boundary();

  UnionFind comp(int(tris_.size()));
  for (int e = 0; e < edge_count(); ++e)
    if (edge_tri_[e][1].tri >= 0)
      comp.unite(edge_tri_[e][0].tri, edge_tri_[e][1].tri);
  int components = 0;
  for (std::size_t t = 0; t < tris_.size(); ++t)
    if (comp.find(int(t)) == int(t)) ++components;

  census_.vertices = nv_;
  census_.edges = edge_count();
  census_.faces = int(tris_.size());
  census_.euler = nv_ - edge_count() + int(tris_.size());
  census_.components = components;
  census_.boundary_loops = int(boundary_loops_.size());
  if (components == 1) {
    const int twice = 2 - census_.euler - census_.boundary_loops;
    if (twice < 0 || twice % 2 != 0)
      fail(ErrorCode::InvalidMesh, "Euler characteristic inconsistent with an orientable surface");
    census_.genus = twice / 2;
  } else {
    census_.genus = -1;
  }
}

// Normalizes triangle orientations so every interior edge is traversed in
// opposite directions by its two triangles.  Fails when no such assignment
// exists.
void PLSurface::orient() {
  std::map<std::pair<int, int>, std::vector<std::pair<int, int>>> sides;
  for (std::size_t t = 0; t < tris_.size(); ++t)
    for (int k = 0; k < 3; ++k) {
      const int u = tris_[t].v[k], v = tris_[t].v[(k + 1) % 3];
      sides[std::minmax(u, v)].push_back({int(t), k});
    }
  for (const auto& [key, lst] : sides)
    if (lst.size() > 2) {
      std::ostringstream os;
      os << "edge (" << key.first << ", " << key.second
         << ") belongs to more than two triangles";
      fail(ErrorCode::InvalidMesh, os.str());
    }

  std::vector<int> state(tris_.size(), -1); // -1 unseen, 0 keep, 1 flip
  for (std::size_t root = 0; root < tris_.size(); ++root) {
    if (state[root] >= 0) continue;
    state[root] = 0;
    std::queue<int> bfs;
    bfs.push(int(root));
    while (!bfs.empty()) {
      const int t = bfs.front();
      bfs.pop();
      for (int k = 0; k < 3; ++k) {
        const int u = tris_[t].v[k], v = tris_[t].v[(k + 1) % 3];
        for (const auto& [t2, k2] : sides[std::minmax(u, v)]) {
          if (t2 == t) continue;
          const int u2 = tris_[t2].v[k2];
          // Same traversal direction means one of the two must flip.
          const bool same = (u2 == u);
          const int want = state[t] ^ (same ? 1 : 0);
          if (state[t2] < 0) {
            state[t2] = want;
            bfs.push(t2);
          } else if (state[t2] != want) {
            fail(ErrorCode::InvalidMesh, "mesh is not orientable");
          }
        }
      }
    }
  }
  for (std::size_t t = 0; t < tris_.size(); ++t)
    if (state[t] == 1) {
      std::swap(tris_[t].v[1], tris_[t].v[2]);
      std::swap(tris_[t].len[0], tris_[t].len[2]);
    }
}

void PLSurface::check_links() const {
  std::vector<int> tri_count(nv_, 0);
  for (const auto& tr : tris_)
    for (int k = 0; k < 3; ++k) ++tri_count[tr.v[k]];

  for (int v = 0; v < nv_; ++v) {
    if (vertex_edges_[v].empty()) {
      std::ostringstream os;
      os << "vertex " << v << " is isolated";
      fail(ErrorCode::InvalidMesh, os.str());
    }
    int boundary_here = 0;
    for (int e : vertex_edges_[v])
      if (boundary_edge(e)) ++boundary_here;
    const int ev = int(vertex_edges_[v].size());
    const int tv = tri_count[v];
    const bool ok = boundary_vertex_[v] ? (boundary_here == 2 && ev == tv + 1)
                                        : (boundary_here == 0 && ev == tv);
    if (!ok) {
      std::ostringstream os;
      os << "vertex " << v << " link is not a disk or half-disk";
      fail(ErrorCode::InvalidMesh, os.str());
    }
    // Count alone admits two stacked fans; require the link connected.
    // Each incident triangle joins its two edges at v.
    std::map<int, int> local;
    for (int e : vertex_edges_[v]) local.emplace(e, int(local.size()));
    UnionFind uf(ev);
    for (int e : vertex_edges_[v]) {
      for (const auto& s : edge_tri_[e]) {
        if (s.tri < 0) continue;
        const auto& tr = tris_[s.tri];
        int corner = -1;
        for (int k = 0; k < 3; ++k)
          if (tr.v[k] == v) corner = k;
        if (corner < 0) continue;
        // The two edges of this triangle at v.
        const int other1 = tr.v[(corner + 1) % 3];
        const int other2 = tr.v[(corner + 2) % 3];
        const int ea = edge_between(v, other1);
        const int eb = edge_between(v, other2);
        uf.unite(local.at(ea), local.at(eb));
      }
    }
    int comps = 0;
    for (int i = 0; i < ev; ++i)
      if (uf.find(i) == i) ++comps;
    if (comps != 1) {
      std::ostringstream os;
      os << "vertex " << v << " link is not connected";
      fail(ErrorCode::InvalidMesh, os.str());
    }
  }
}

void PLSurface::build_boundary() {
  // Directed boundary edges carry the orientation induced by their single
  // triangle; each boundary vertex then has exactly one outgoing edge.
  std::map<int, std::pair<int, int>> next_from; // tail vertex -> (head, edge)
  for (int e = 0; e < edge_count(); ++e) {
    if (!boundary_edge(e)) continue;
    const Side s = edge_tri_[e][0];
    const int u = tris_[s.tri].v[s.side];
    const int v = tris_[s.tri].v[(s.side + 1) % 3];
    if (next_from.count(u))
      fail(ErrorCode::InvalidMesh, "boundary is not a disjoint union of circles");
    next_from[u] = {v, e};
  }
  std::map<int, bool> used;
  for (const auto& [tail, hv] : next_from) used[tail] = false;
  for (const auto& [tail, hv] : next_from) {
    if (used[tail]) continue;
    std::vector<int> loop;
    int cur = tail;
    while (!used[cur]) {
      used[cur] = true;
      loop.push_back(cur);
      cur = next_from.at(cur).first;
    }
    if (cur != tail)
      fail(ErrorCode::InvalidMesh, "boundary walk does not close up");
    boundary_loops_.push_back(std::move(loop));
  }
}

int PLSurface::neighbor(int tri, int side) const {
  const int e = tri_edge_[tri][side];
  const auto& s = edge_tri_[e];
  if (s[0].tri == tri && s[0].side == side) return s[1].tri;
  return s[0].tri;
}

double PLSurface::angle(int t, int corner) const {
  const auto& tr = tris_[t];
  const double adj1 = tr.len[corner];
  const double adj2 = tr.len[(corner + 2) % 3];
  const double opp = tr.len[(corner + 1) % 3];
  double c = (adj1 * adj1 + adj2 * adj2 - opp * opp) / (2.0 * adj1 * adj2);
  c = std::clamp(c, -1.0, 1.0);
  return std::acos(c);
}

double PLSurface::triangle_area(int t) const {
  const auto& tr = tris_[t];
  const double a = tr.len[0], b = tr.len[1], c = tr.len[2];
  const double s = 0.5 * (a + b + c);
  const double q = s * (s - a) * (s - b) * (s - c);
  return std::sqrt(std::max(q, 0.0));
}

double PLSurface::vertex_angle_sum(int v) const {
  double sum = 0.0;
  for (int e : vertex_edges_[v]) {
    for (const auto& s : edge_tri_[e]) {
      if (s.tri < 0) continue;
      // Count the corner once: only from the side where the edge leaves v.
      if (tris_[s.tri].v[s.side] != v) continue;
      for (int k = 0; k < 3; ++k)
        if (tris_[s.tri].v[k] == v) sum += angle(s.tri, k);
    }
  }
  return sum;
}

double PLSurface::cone_deficit(int v) const {
  const double full = boundary_vertex_[v] ? kPi : 2.0 * kPi;
  return full - vertex_angle_sum(v);
}

double PLSurface::vertex_area(int v) const {
  double sum = 0.0;
  for (int e : vertex_edges_[v])
    for (const auto& s : edge_tri_[e]) {
      if (s.tri < 0) continue;
      if (tris_[s.tri].v[s.side] != v) continue;
      sum += triangle_area(s.tri);
    }
  return sum / 3.0;
}

bool PLSurface::deficit_certificate(double c) const {
  for (int v = 0; v < nv_; ++v) {
    if (boundary_vertex_[v]) continue;
    if (cone_deficit(v) > -c * c * vertex_area(v)) return false;
  }
  return true;
}

double PLSurface::gauss_bonnet_total() const {
  double sum = 0.0;
  for (int v = 0; v < nv_; ++v) sum += cone_deficit(v);
  return sum;
}

int PLSurface::edge_between(int a, int b) const {
  for (int e : vertex_edges_[a]) {
    const auto [u, v] = edge_v_[e];
    if ((u == a && v == b) || (u == b && v == a)) return e;
  }
  return -1;
}

std::vector<double> PLSurface::distances_from(int source) const {
  std::vector<double> dist(nv_, std::numeric_limits<double>::infinity());
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  dist[source] = 0.0;
  pq.push({0.0, source});
  while (!pq.empty()) {
    const auto [d, v] = pq.top();
    pq.pop();
    if (d > dist[v]) continue;
    for (int e : vertex_edges_[v]) {
      const auto [a, b] = edge_v_[e];
      const int w = (a == v) ? b : a;
      const double nd = d + edge_len_[e];
      if (nd < dist[w]) {
        dist[w] = nd;
        pq.push({nd, w});
      }
    }
  }
  return dist;
}

void PLSurface::ensure_homology() const {
  if (homology_built_) return;
  homology_built_ = true;

  // Spanning forest over the vertex graph; the remaining edges index the
  // cycle space.  A face relation is the set of its cotree edges.
  std::vector<char> in_tree(edge_count(), 0);
  {
    UnionFind uf(nv_);
    for (int e = 0; e < edge_count(); ++e)
      if (uf.unite(edge_v_[e].first, edge_v_[e].second)) in_tree[e] = 1;
  }
  cotree_index_.assign(edge_count(), -1);
  int ncols = 0;
  for (int e = 0; e < edge_count(); ++e)
    if (!in_tree[e]) cotree_index_[e] = ncols++;
  cotree_words_ = (ncols + 63) / 64;

  pivot_row_.assign(ncols, -1);
  rel_rows_.clear();
  auto reduce = [&](std::vector<std::uint64_t>& row) {
    for (int w = 0; w < cotree_words_; ++w) {
      while (row[w] != 0) {
        const int bit = w * 64 + __builtin_ctzll(row[w]);
        const int pr = pivot_row_[bit];
        if (pr < 0) return bit;
        const auto& prow = rel_rows_[pr];
        for (int x = w; x < cotree_words_; ++x) row[x] ^= prow[x];
      }
    }
    return -1;
  };

  for (std::size_t t = 0; t < tris_.size(); ++t) {
    std::vector<std::uint64_t> row(cotree_words_, 0);
    for (int k = 0; k < 3; ++k) {
      const int c = cotree_index_[tri_edge_[t][k]];
      if (c >= 0) row[c / 64] ^= (1ull << (c % 64));
    }
    const int piv = reduce(row);
    if (piv >= 0) {
      pivot_row_[piv] = int(rel_rows_.size());
      rel_rows_.push_back(std::move(row));
    }
  }

  free_bit_.assign(ncols, -1);
  homology_rank_ = 0;
  for (int c = 0; c < ncols; ++c)
    if (pivot_row_[c] < 0) {
      if (homology_rank_ >= 64)
        fail(ErrorCode::UnsupportedTopology, "homology rank exceeds 64");
      free_bit_[c] = homology_rank_++;
    }
}

int PLSurface::homology_rank() const {
  ensure_homology();
  return homology_rank_;
}

std::uint64_t PLSurface::loop_signature(const std::vector<int>& loop) const {
  ensure_homology();
  if (loop.size() < 2)
    fail(ErrorCode::InvalidCurve, "loop needs at least two vertices");
  std::vector<std::uint64_t> row(cotree_words_, 0);
  for (std::size_t i = 0; i < loop.size(); ++i) {
    const int a = loop[i], b = loop[(i + 1) % loop.size()];
    const int e = edge_between(a, b);
    if (e < 0) {
      std::ostringstream os;
      os << "loop step (" << a << ", " << b << ") is not a mesh edge";
      fail(ErrorCode::InvalidCurve, os.str());
    }
    const int c = cotree_index_[e];
    if (c >= 0) row[c / 64] ^= (1ull << (c % 64));
  }
  // Reduce by the face relations.  Stored rows have their pivot as lowest
  // set bit, so every step clears the current lowest bit and only touches
  // higher columns; free-column bits drop out as signature bits.
  std::uint64_t sig = 0;
  for (int w = 0; w < cotree_words_; ++w) {
    while (row[w] != 0) {
      const int bit = w * 64 + __builtin_ctzll(row[w]);
      const int pr = pivot_row_[bit];
      if (pr >= 0) {
        const auto& prow = rel_rows_[pr];
        for (int x = w; x < cotree_words_; ++x) row[x] ^= prow[x];
      } else {
        sig |= (1ull << free_bit_[bit]);
        row[w] &= ~(1ull << (bit % 64));
      }
    }
  }
  return sig;
}

PLSurface PLSurface::cut_along(const std::vector<std::vector<int>>& loops) const {
  std::vector<char> on_loop(nv_, 0);
  for (const auto& loop : loops) {
    if (loop.size() < 3)
      fail(ErrorCode::InvalidCurve, "cut loop needs at least three vertices");
    for (std::size_t i = 0; i < loop.size(); ++i) {
      const int v = loop[i];
      if (boundary_vertex_[v])
        fail(ErrorCode::InvalidCurve, "cut loop touches the boundary");
      if (on_loop[v])
        fail(ErrorCode::InvalidCurve, "cut loops are not vertex-disjoint or not simple");
      on_loop[v] = 1;
      if (edge_between(v, loop[(i + 1) % loop.size()]) < 0)
        fail(ErrorCode::InvalidCurve, "cut loop leaves the edge graph");
    }
  }

  std::vector<MeshTriangle> out = tris_;
  int next_vertex = nv_;

  for (const auto& loop : loops) {
    const int n = int(loop.size());
    // New vertex ids for the left side of the directed loop.
    std::vector<int> left_id(n);
    for (int i = 0; i < n; ++i) left_id[i] = next_vertex++;

    for (int i = 0; i < n; ++i) {
      const int v = loop[i];
      const int vprev = loop[(i + n - 1) % n];
      const int vnext = loop[(i + 1) % n];

      // Walk the corner fan on the left of (v -> vnext): start at the
      // triangle whose traversal contains that directed edge, rotate across
      // the entered-from edge until the triangle entered from vprev.
      int cur = -1;
      {
        const int e = edge_between(v, vnext);
        for (const auto& s : edge_tri_[e])
          if (s.tri >= 0 && tris_[s.tri].v[s.side] == v) cur = s.tri;
      }
      if (cur < 0) fail(ErrorCode::InvalidCurve, "cut loop walk failed to start");

      std::vector<int> fan;
      int guard = 0;
      while (true) {
        fan.push_back(cur);
        int corner = -1;
        for (int k = 0; k < 3; ++k)
          if (tris_[cur].v[k] == v) corner = k;
        const int entered_from = tris_[cur].v[(corner + 2) % 3];
        if (entered_from == vprev) break;
        const int e = edge_between(v, entered_from);
        int nxt = -1;
        for (const auto& s : edge_tri_[e])
          if (s.tri >= 0 && s.tri != cur) nxt = s.tri;
        if (nxt < 0)
          fail(ErrorCode::InvalidCurve, "cut loop walk hit the boundary");
        cur = nxt;
        if (++guard > int(tris_.size()))
          fail(ErrorCode::InvalidCurve, "cut loop walk did not close");
      }

      for (int t : fan) {
        for (int k = 0; k < 3; ++k)
          if (out[t].v[k] == v) out[t].v[k] = left_id[i];
      }
    }
  }

  return PLSurface(next_vertex, std::move(out));
}

std::vector<PLSurface> PLSurface::split_components(
    std::vector<int>* tri_to_comp) const {
  UnionFind uf(int(tris_.size()));
  for (int e = 0; e < edge_count(); ++e)
    if (edge_tri_[e][1].tri >= 0)
      uf.unite(edge_tri_[e][0].tri, edge_tri_[e][1].tri);

  std::vector<int> comp_of(tris_.size(), -1);
  std::vector<int> roots;
  for (std::size_t t = 0; t < tris_.size(); ++t) {
    const int r = uf.find(int(t));
    int idx = -1;
    for (std::size_t j = 0; j < roots.size(); ++j)
      if (roots[j] == r) idx = int(j);
    if (idx < 0) {
      idx = int(roots.size());
      roots.push_back(r);
    }
    comp_of[t] = idx;
  }
  if (tri_to_comp) *tri_to_comp = comp_of;

  std::vector<PLSurface> out;
  for (std::size_t c = 0; c < roots.size(); ++c) {
    std::vector<int> vmap(nv_, -1);
    int nv = 0;
    std::vector<MeshTriangle> tris;
    for (std::size_t t = 0; t < tris_.size(); ++t) {
      if (comp_of[t] != int(c)) continue;
      MeshTriangle tr = tris_[t];
      for (int k = 0; k < 3; ++k) {
        if (vmap[tr.v[k]] < 0) vmap[tr.v[k]] = nv++;
        tr.v[k] = vmap[tr.v[k]];
      }
      tris.push_back(tr);
    }
    out.emplace_back(nv, std::move(tris));
  }
  return out;
}

} // namespace geodecomp
