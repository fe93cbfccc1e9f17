#include "geodecomp/mesh_build.hpp"

#include <cmath>
#include <map>

#include "geodecomp/errors.hpp"

namespace geodecomp {

namespace {

struct P2 {
  double x = 0.0, y = 0.0;
};

double dist(P2 a, P2 b) { return std::hypot(a.x - b.x, a.y - b.y); }

// Triangle soup under construction with symbolic vertex keys, so points
// shared between fan triangles or between the two hexagons of a pants get
// one id no matter which triangle emits them first.
struct Soup {
  std::map<std::array<long, 5>, int> ids;
  int nv = 0;
  std::vector<MeshTriangle> tris;

  int vertex(std::array<long, 5> key) {
    auto it = ids.find(key);
    if (it != ids.end()) return it->second;
    ids.emplace(key, nv);
    return nv++;
  }
  void tri(int a, int b, int c, double lab, double lbc, double lca) {
    tris.push_back({{a, b, c}, {lab, lbc, lca}});
  }
};

// Emits one hexagon fan into the soup.  Sides 0, 2, 4 have length a and
// stay private to the hexagon (key kind 4); sides 1, 3, 5 have length d and
// are shared across hexagons (kind 3), as are the six corners (kind 2).
// h tags the hexagon, k is the subdivision depth.
void emit_hexagon(Soup& soup, long h, double a, double d, int k) {
  const double R = 0.5 * std::sqrt(a * a + d * d);
  for (long t = 0; t < 6; ++t) {
    const double L = (t % 2 == 0) ? a : d;
    const double gamma = 2.0 * std::asin(L / (2.0 * R));
    const P2 A{R, 0.0};
    const P2 B{R * std::cos(gamma), R * std::sin(gamma)};

    auto pos = [&](long r, long c) -> P2 {
      return {(A.x * double(r - c) + B.x * double(c)) / double(k),
              (A.y * double(r - c) + B.y * double(c)) / double(k)};
    };
    auto id = [&](long r, long c) -> int {
      if (r == 0) return soup.vertex({0, h, 0, 0, 0});
      if (r < k && c == 0) return soup.vertex({1, h, t, r, 0});
      if (r < k && c == r) return soup.vertex({1, h, (t + 1) % 6, r, 0});
      if (r == k) {
        if (c == 0) return soup.vertex({2, t, 0, 0, 0});
        if (c == k) return soup.vertex({2, (t + 1) % 6, 0, 0, 0});
        if (t % 2 == 1) return soup.vertex({3, t, c, 0, 0});
        return soup.vertex({4, h, t, c, 0});
      }
      return soup.vertex({5, h, t, r, c});
    };
    auto emit = [&](long r1, long c1, long r2, long c2, long r3, long c3) {
      const P2 p1 = pos(r1, c1), p2 = pos(r2, c2), p3 = pos(r3, c3);
      soup.tri(id(r1, c1), id(r2, c2), id(r3, c3), dist(p1, p2), dist(p2, p3),
               dist(p3, p1));
    };
    for (long r = 1; r <= k; ++r) {
      for (long c = 0; c < r; ++c) emit(r - 1, c, r, c, r, c + 1);
      for (long c = 0; c + 1 < r; ++c) emit(r - 1, c, r, c + 1, r - 1, c + 1);
    }
  }
}

// Boundary ring j of a pants soup built by emit_hexagon x2: side 2j of both
// hexagons, walked corner -> corner through hexagon 0 and back through
// hexagon 1.
std::vector<int> pants_ring(Soup& soup, long j, int k) {
  const long t = 2 * j;
  std::vector<int> ring;
  ring.push_back(soup.vertex({2, t, 0, 0, 0}));
  for (long c = 1; c < k; ++c) ring.push_back(soup.vertex({4, 0, t, c, 0}));
  ring.push_back(soup.vertex({2, (t + 1) % 6, 0, 0, 0}));
  for (long c = k - 1; c >= 1; --c) ring.push_back(soup.vertex({4, 1, t, c, 0}));
  return ring;
}

struct PantsSoup {
  Soup soup;
  std::array<std::vector<int>, 3> rings;
};

PantsSoup pants_soup(double a, double d, int k) {
  // k = 1 would merge the two copies of each boundary side into one interior
  // edge and close the surface up wrongly.
  if (!(a > 0.0) || !(d > 0.0) || k < 2)
    fail(ErrorCode::DomainViolation, "pants need positive lengths and k >= 2");
  PantsSoup p;
  emit_hexagon(p.soup, 0, a, d, k);
  emit_hexagon(p.soup, 1, a, d, k);
  for (long j = 0; j < 3; ++j) p.rings[j] = pants_ring(p.soup, j, k);
  return p;
}

// Glues a widening collar onto `ring`: `bands` bands of quads, circumference
// c0 at the ring growing by `growth` per band, band height h.  Returns the
// outer boundary ring.
std::vector<int> emit_collar(Soup& soup, const std::vector<int>& ring,
                             double c0, int bands, double h, double growth,
                             long tag) {
  const int n = int(ring.size());
  std::vector<std::vector<int>> level(bands + 1);
  level[0] = ring;
  for (int i = 1; i <= bands; ++i) {
    level[i].resize(n);
    for (int q = 0; q < n; ++q)
      level[i][q] = soup.vertex({6, tag, i, q, 0});
  }
  for (int i = 0; i < bands; ++i) {
    const double wlo = (c0 + growth * i) / n;
    const double whi = (c0 + growth * (i + 1)) / n;
    const double delta = 0.5 * (wlo - whi);
    const double leg = std::hypot(delta, h);
    const double diag = std::hypot(delta + whi, h);
    for (int q = 0; q < n; ++q) {
      const int a0 = level[i][q], b0 = level[i][(q + 1) % n];
      const int a1 = level[i + 1][q], b1 = level[i + 1][(q + 1) % n];
      soup.tri(a0, b0, b1, wlo, leg, diag);
      soup.tri(a0, b1, a1, diag, whi, leg);
    }
  }
  return level[bands];
}

} // namespace

BuiltPants fan_pants(double a, double d, int k) {
  PantsSoup p = pants_soup(a, d, k);
  return {PLSurface(p.soup.nv, std::move(p.soup.tris)), p.rings};
}

BuiltClosed genus2_surface(double a, double d, int k) {
  PantsSoup p0 = pants_soup(a, d, k);
  PantsSoup p1 = pants_soup(a, d, k);
  const int off = p0.soup.nv;
  const int total = off + p1.soup.nv;

  // Identify ring j of the first pants with ring j of the second, direction
  // reversed so the glued surface is orientable.
  std::vector<int> remap(total);
  for (int i = 0; i < total; ++i) remap[i] = i;
  for (long j = 0; j < 3; ++j) {
    const auto& r0 = p0.rings[j];
    const auto& r1 = p1.rings[j];
    const int n = int(r0.size());
    for (int i = 0; i < n; ++i)
      remap[off + r1[(n - i) % n]] = r0[i];
  }
  std::vector<int> compact(total, -1);
  int nv = 0;
  auto target = [&](int v) {
    if (compact[remap[v]] < 0) compact[remap[v]] = nv++;
    return compact[remap[v]];
  };
  std::vector<MeshTriangle> tris = p0.soup.tris;
  for (MeshTriangle tr : p1.soup.tris) {
    for (int c = 0; c < 3; ++c) tr.v[c] += off;
    tris.push_back(tr);
  }
  for (auto& tr : tris)
    for (int c = 0; c < 3; ++c) tr.v[c] = target(tr.v[c]);

  BuiltClosed out{PLSurface(nv, std::move(tris)), {}};
  for (long j = 0; j < 3; ++j) {
    std::vector<int> seam;
    for (int v : p0.rings[j]) seam.push_back(compact[v]);
    out.seams[j] = std::move(seam);
  }
  return out;
}

BuiltFlared flared_pants(double a, double d, int k, int bands,
                         double band_height, double growth) {
  PantsSoup p = pants_soup(a, d, k);
  std::vector<int> outer = emit_collar(p.soup, p.rings[0], 2.0 * a, bands,
                                       band_height, growth, 0);
  return {PLSurface(p.soup.nv, std::move(p.soup.tris)),
          std::move(outer),
          p.rings[0],
          {p.rings[1], p.rings[2]}};
}

PLSurface regular_tetrahedron(double edge) {
  std::vector<MeshTriangle> tris = {
      {{0, 1, 2}, {edge, edge, edge}},
      {{0, 2, 3}, {edge, edge, edge}},
      {{0, 3, 1}, {edge, edge, edge}},
      {{1, 3, 2}, {edge, edge, edge}},
  };
  return PLSurface(4, std::move(tris));
}

PLSurface flat_torus(int n, int m, double w, double h) {
  if (n < 3 || m < 3)
    fail(ErrorCode::DomainViolation, "torus grid needs n, m >= 3");
  const double diag = std::hypot(w, h);
  std::vector<MeshTriangle> tris;
  auto id = [&](int i, int j) { return (i % m) * n + (j % n); };
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) {
      const int a0 = id(i, j), b0 = id(i, j + 1);
      const int a1 = id(i + 1, j), b1 = id(i + 1, j + 1);
      tris.push_back({{a0, b0, b1}, {w, h, diag}});
      tris.push_back({{a0, b1, a1}, {diag, w, h}});
    }
  return PLSurface(n * m, std::move(tris));
}

BuiltTube flat_tube(double c, double h, int n, int m) {
  if (n < 3 || m < 1)
    fail(ErrorCode::DomainViolation, "tube grid needs n >= 3, m >= 1");
  const double w = c / n;
  const double diag = std::hypot(w, h);
  std::vector<MeshTriangle> tris;
  auto id = [&](int i, int j) { return i * n + (j % n); };
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) {
      const int a0 = id(i, j), b0 = id(i, j + 1);
      const int a1 = id(i + 1, j), b1 = id(i + 1, j + 1);
      tris.push_back({{a0, b0, b1}, {w, h, diag}});
      tris.push_back({{a0, b1, a1}, {diag, w, h}});
    }
  BuiltTube out{PLSurface((m + 1) * n, std::move(tris)), {}, {}};
  for (int j = 0; j < n; ++j) out.ring_lo.push_back(j);
  for (int j = 0; j < n; ++j) out.ring_hi.push_back(m * n + j);
  return out;
}

PLSurface hexagon_disk(double a, double d) {
  Soup soup;
  emit_hexagon(soup, 0, a, d, 1);
  return PLSurface(soup.nv, std::move(soup.tris));
}

} // namespace geodecomp
