#include <cmath>
#include <set>
#include <string>

#include "doctest.h"
#include "geodecomp/errors.hpp"
#include "geodecomp/mesh.hpp"
#include "geodecomp/mesh_build.hpp"
#include "geodecomp/mesh_curves.hpp"
#include "geodecomp/numerics.hpp"

using namespace geodecomp;

namespace {

void expect_invalid(std::vector<MeshTriangle> tris, int nv,
                    const char* fragment) {
  try {
    PLSurface s(nv, std::move(tris));
    FAIL("expected InvalidMesh containing \"", fragment, "\"");
  } catch (const Error& err) {
    CHECK(err.code() == ErrorCode::InvalidMesh);
    CHECK(std::string(err.what()).find(fragment) != std::string::npos);
  }
}

double interior_deficit_sum(const PLSurface& m) {
  double sum = 0.0;
  for (int v = 0; v < m.vertex_count(); ++v)
    if (!m.boundary_vertex(v)) sum += m.cone_deficit(v);
  return sum;
}

} // namespace

TEST_CASE("tetrahedron: census, deficits, distances") {
  PLSurface tet = regular_tetrahedron(1.0);
  const auto& c = tet.census();
  CHECK(c.vertices == 4);
  CHECK(c.edges == 6);
  CHECK(c.faces == 4);
  CHECK(c.euler == 2);
  CHECK(c.components == 1);
  CHECK(c.boundary_loops == 0);
  CHECK(c.genus == 0);
  for (int v = 0; v < 4; ++v) {
    CHECK_FALSE(tet.boundary_vertex(v));
    CHECK(tet.cone_deficit(v) == doctest::Approx(kPi).epsilon(1e-13));
  }
  CHECK(tet.gauss_bonnet_total() == doctest::Approx(4.0 * kPi).epsilon(1e-13));
  CHECK(tet.homology_rank() == 0);
  // Positive deficits can never satisfy a negative-curvature certificate.
  CHECK_FALSE(tet.deficit_certificate(0.1));

  auto dist = tet.distances_from(0);
  CHECK(dist[0] == 0.0);
  for (int v = 1; v < 4; ++v) CHECK(dist[v] == doctest::Approx(1.0));
}

TEST_CASE("mesh validation names the offending simplex") {
  expect_invalid({{{0, 1, 2}, {1.0, 1.0, 2.5}}}, 3,
                 "strict triangle inequality");
  expect_invalid({{{0, 1, 2}, {1.0, -1.0, 1.0}}}, 3, "nonpositive edge length");
  expect_invalid({{{0, 1, 1}, {1.0, 1.0, 1.0}}}, 3, "repeats a vertex");
  expect_invalid({{{0, 1, 5}, {1.0, 1.0, 1.0}}}, 3, "references vertex");

  // Shared edge (0, 2) carries length 1 in one triangle, 1.05 in the other.
  expect_invalid({{{0, 1, 2}, {1.0, 1.0, 1.0}},
                  {{0, 2, 3}, {1.05, 1.0, 1.0}}},
                 4, "length disagrees");

  expect_invalid({{{0, 1, 2}, {1.0, 1.0, 1.0}},
                  {{1, 0, 3}, {1.0, 1.0, 1.0}},
                  {{0, 1, 4}, {1.0, 1.0, 1.0}}},
                 5, "more than two triangles");

  // One triangle, four declared vertices.
  expect_invalid({{{0, 1, 2}, {1.0, 1.0, 1.0}}}, 4, "isolated");

  // Two triangles meeting only at vertex 0.
  expect_invalid({{{0, 1, 2}, {1.0, 1.0, 1.0}},
                  {{0, 3, 4}, {1.0, 1.0, 1.0}}},
                 5, "disk or half-disk");

  // Two tetrahedra sharing vertex 0: counts at 0 look interior (six edges,
  // six triangles) but the link is two disjoint circles.
  expect_invalid({{{0, 1, 2}, {1.0, 1.0, 1.0}},
                  {{0, 2, 3}, {1.0, 1.0, 1.0}},
                  {{0, 3, 1}, {1.0, 1.0, 1.0}},
                  {{1, 3, 2}, {1.0, 1.0, 1.0}},
                  {{0, 4, 5}, {1.0, 1.0, 1.0}},
                  {{0, 5, 6}, {1.0, 1.0, 1.0}},
                  {{0, 6, 4}, {1.0, 1.0, 1.0}},
                  {{4, 6, 5}, {1.0, 1.0, 1.0}}},
                 7, "link is not connected");
}

TEST_CASE("a Moebius band is rejected as non-orientable") {
  const double s2 = std::sqrt(2.0);
  // Three square quads closing up with a half twist; every square is split
  // along a diagonal.  Bottom chain 0,1,2, top chain 3,4,5.
  std::vector<MeshTriangle> tris = {
      {{0, 1, 4}, {1.0, 1.0, s2}}, {{0, 4, 3}, {s2, 1.0, 1.0}},
      {{1, 2, 5}, {1.0, 1.0, s2}}, {{1, 5, 4}, {s2, 1.0, 1.0}},
      {{2, 3, 0}, {1.0, 1.0, s2}}, {{2, 0, 5}, {s2, 1.0, 1.0}},
  };
  expect_invalid(std::move(tris), 6, "not orientable");
}

TEST_CASE("fan pants: three geodesic rings and deficit budget -2pi") {
  const double a = 1.0, d = 1.25;
  const int k = 4;
  BuiltPants p = fan_pants(a, d, k);
  const auto& c = p.mesh.census();
  CHECK(c.components == 1);
  CHECK(c.boundary_loops == 3);
  CHECK(c.genus == 0);
  CHECK(c.euler == -1);
  CHECK(c.faces == 12 * k * k);

  for (const auto& ring : p.rings) {
    CHECK(int(ring.size()) == 2 * k);
    CHECK(loop_length(p.mesh, ring) == doctest::Approx(2.0 * a).epsilon(1e-13));
    CHECK(loop_residual(p.mesh, ring) <= 1e-12);
    for (int v : ring) CHECK(p.mesh.boundary_vertex(v));
  }

  // Exactly the two hexagon centers are curved, each by -pi.
  int curved = 0;
  for (int v = 0; v < p.mesh.vertex_count(); ++v) {
    if (p.mesh.boundary_vertex(v)) continue;
    const double def = p.mesh.cone_deficit(v);
    if (std::abs(def) < 1e-12) continue;
    CHECK(def == doctest::Approx(-kPi).epsilon(1e-13));
    ++curved;
  }
  CHECK(curved == 2);
  CHECK(interior_deficit_sum(p.mesh) ==
        doctest::Approx(-2.0 * kPi).epsilon(1e-13));
  CHECK(p.mesh.gauss_bonnet_total() ==
        doctest::Approx(-2.0 * kPi).epsilon(1e-12));

  // Flat vertices defeat any uniform negative-curvature certificate.
  CHECK_FALSE(p.mesh.deficit_certificate(1.0));

  CHECK(p.mesh.homology_rank() == 2);
  const auto s0 = p.mesh.loop_signature(p.rings[0]);
  const auto s1 = p.mesh.loop_signature(p.rings[1]);
  const auto s2 = p.mesh.loop_signature(p.rings[2]);
  CHECK(s0 != 0);
  CHECK(s1 != 0);
  CHECK(s2 != 0);
  CHECK(s0 != s1);
  // The three boundary classes sum to zero: together they bound the surface.
  CHECK((s0 ^ s1 ^ s2) == 0);
}

TEST_CASE("genus-2 gluing: topology, seams, homology relations") {
  const double a = 1.0, d = 1.25;
  const int k = 3;
  BuiltClosed g2 = genus2_surface(a, d, k);
  const auto& c = g2.mesh.census();
  CHECK(c.components == 1);
  CHECK(c.boundary_loops == 0);
  CHECK(c.euler == -2);
  CHECK(c.genus == 2);
  CHECK(c.faces == 24 * k * k);
  CHECK(g2.mesh.gauss_bonnet_total() ==
        doctest::Approx(-4.0 * kPi).epsilon(1e-12));
  CHECK(g2.mesh.homology_rank() == 4);

  int cones = 0;
  for (int v = 0; v < g2.mesh.vertex_count(); ++v) {
    const double def = g2.mesh.cone_deficit(v);
    if (std::abs(def) < 1e-12) continue;
    CHECK(def == doctest::Approx(-kPi).epsilon(1e-13));
    ++cones;
  }
  CHECK(cones == 4);

  std::set<std::uint64_t> sigs;
  for (const auto& seam : g2.seams) {
    CHECK(int(seam.size()) == 2 * k);
    CHECK(loop_length(g2.mesh, seam) ==
          doctest::Approx(2.0 * a).epsilon(1e-13));
    CHECK(loop_residual(g2.mesh, seam) <= 1e-12);
    const auto sig = g2.mesh.loop_signature(seam);
    CHECK(sig != 0);
    sigs.insert(sig);
  }
  CHECK(sigs.size() == 3);
  CHECK((g2.mesh.loop_signature(g2.seams[0]) ^
         g2.mesh.loop_signature(g2.seams[1]) ^
         g2.mesh.loop_signature(g2.seams[2])) == 0);
}

TEST_CASE("cutting the genus-2 surface along one seam removes a handle") {
  BuiltClosed g2 = genus2_surface(1.0, 1.25, 3);
  PLSurface cut = g2.mesh.cut_along({g2.seams[0]});
  const auto& c = cut.census();
  CHECK(c.components == 1);
  CHECK(c.boundary_loops == 2);
  CHECK(c.euler == -2);
  CHECK(c.genus == 1);
  CHECK(cut.gauss_bonnet_total() ==
        doctest::Approx(-4.0 * kPi).epsilon(1e-12));
  for (const auto& loop : cut.boundary_loops())
    CHECK(loop_length(cut, loop) == doctest::Approx(2.0).epsilon(1e-13));
}

TEST_CASE("cutting along all three seams yields two pants") {
  BuiltClosed g2 = genus2_surface(1.0, 1.25, 3);
  PLSurface cut = g2.mesh.cut_along(
      {g2.seams[0], g2.seams[1], g2.seams[2]});
  CHECK(cut.census().components == 2);
  CHECK(cut.census().boundary_loops == 6);
  CHECK(cut.census().euler == -2);

  std::vector<int> tri_to_comp;
  auto pieces = cut.split_components(&tri_to_comp);
  REQUIRE(pieces.size() == 2);
  CHECK(int(tri_to_comp.size()) == cut.triangle_count());
  for (const auto& piece : pieces) {
    const auto& pc = piece.census();
    CHECK(pc.genus == 0);
    CHECK(pc.boundary_loops == 3);
    CHECK(pc.euler == -1);
    CHECK(interior_deficit_sum(piece) ==
          doctest::Approx(-2.0 * kPi).epsilon(1e-12));
    for (const auto& loop : piece.boundary_loops())
      CHECK(loop_length(piece, loop) == doctest::Approx(2.0).epsilon(1e-13));
  }
}

TEST_CASE("cut preconditions reject malformed loop systems") {
  BuiltPants p = fan_pants(1.0, 1.25, 3);
  try {
    p.mesh.cut_along({p.rings[0]});
    FAIL("expected boundary rejection");
  } catch (const Error& err) {
    CHECK(err.code() == ErrorCode::InvalidCurve);
    CHECK(std::string(err.what()).find("touches the boundary") !=
          std::string::npos);
  }

  BuiltClosed g2 = genus2_surface(1.0, 1.25, 2);
  try {
    g2.mesh.cut_along({g2.seams[0], g2.seams[0]});
    FAIL("expected disjointness rejection");
  } catch (const Error& err) {
    CHECK(err.code() == ErrorCode::InvalidCurve);
    CHECK(std::string(err.what()).find("vertex-disjoint") != std::string::npos);
  }
  try {
    g2.mesh.cut_along({{g2.seams[0][0], g2.seams[0][1]}});
    FAIL("expected short-loop rejection");
  } catch (const Error& err) {
    CHECK(err.code() == ErrorCode::InvalidCurve);
  }
  try {
    g2.mesh.cut_along({{g2.seams[0][0], g2.seams[0][2], g2.seams[0][4]}});
    FAIL("expected edge-graph rejection");
  } catch (const Error& err) {
    CHECK(err.code() == ErrorCode::InvalidCurve);
    CHECK(std::string(err.what()).find("edge graph") != std::string::npos);
  }
}

TEST_CASE("flat torus: flat everywhere, rank-two homology") {
  PLSurface torus = flat_torus(6, 5, 0.3, 0.25);
  const auto& c = torus.census();
  CHECK(c.vertices == 30);
  CHECK(c.faces == 60);
  CHECK(c.euler == 0);
  CHECK(c.boundary_loops == 0);
  CHECK(c.genus == 1);
  for (int v = 0; v < c.vertices; ++v)
    CHECK(std::abs(torus.cone_deficit(v)) <= 1e-12);
  CHECK(std::abs(torus.gauss_bonnet_total()) <= 1e-10);
  CHECK(torus.homology_rank() == 2);
}

TEST_CASE("flat tube: parallel rings share a nonzero class") {
  BuiltTube tube = flat_tube(4.0, 1.0, 8, 3);
  const auto& c = tube.mesh.census();
  CHECK(c.boundary_loops == 2);
  CHECK(c.genus == 0);
  CHECK(c.euler == 0);
  CHECK(tube.mesh.homology_rank() == 1);
  CHECK(loop_length(tube.mesh, tube.ring_lo) == doctest::Approx(4.0));
  CHECK(loop_length(tube.mesh, tube.ring_hi) == doctest::Approx(4.0));
  CHECK(std::abs(tube.mesh.gauss_bonnet_total()) <= 1e-10);

  const auto lo = tube.mesh.loop_signature(tube.ring_lo);
  const auto hi = tube.mesh.loop_signature(tube.ring_hi);
  CHECK(lo != 0);
  CHECK(lo == hi);

  // A face boundary is null-homologous.
  const auto& tr = tube.mesh.triangle(0);
  CHECK(tube.mesh.loop_signature({tr.v[0], tr.v[1], tr.v[2]}) == 0);
}

TEST_CASE("hexagon disk: one cone point, certificate threshold") {
  PLSurface disk = hexagon_disk(1.0, 1.0);
  const auto& c = disk.census();
  CHECK(c.euler == 1);
  CHECK(c.boundary_loops == 1);
  CHECK(c.genus == 0);
  CHECK(c.vertices == 7);
  CHECK(c.faces == 6);

  int center = -1;
  for (int v = 0; v < c.vertices; ++v)
    if (!disk.boundary_vertex(v)) {
      CHECK(center == -1);
      center = v;
    }
  REQUIRE(center >= 0);
  CHECK(disk.cone_deficit(center) == doctest::Approx(-kPi).epsilon(1e-13));
  // Total area 1.5, barycentric share 0.5: deficit -pi supports c^2 up to
  // 2*pi.
  CHECK(disk.vertex_area(center) == doctest::Approx(0.5).epsilon(1e-13));
  CHECK(disk.deficit_certificate(2.0));
  CHECK(disk.deficit_certificate(2.5));
  CHECK_FALSE(disk.deficit_certificate(2.6));
}

TEST_CASE("loop signatures reject walks off the edge graph") {
  BuiltTube tube = flat_tube(4.0, 1.0, 8, 2);
  try {
    tube.mesh.loop_signature({0, 2, 4});
    FAIL("expected InvalidCurve");
  } catch (const Error& err) {
    CHECK(err.code() == ErrorCode::InvalidCurve);
    CHECK(std::string(err.what()).find("not a mesh edge") != std::string::npos);
  }
}
