#pragma once

#include <array>

#include "geodecomp/mesh.hpp"

namespace geodecomp {

// Parametric families of cone surfaces used by the bundled corpus and the
// test suite.  All of them are flat away from a controlled set of cone
// vertices, so their invariants (geodesic rings, deficit sums) hold exactly.

// Pair of pants doubled from two right-angled hexagon fans.  Each hexagon is
// six isoceles triangles around a center whose deficit is exactly -pi; the
// corners are exactly pi/2, so the three boundary rings are geodesic.  Sides
// alternate half-ring length a and joining length d; every fan triangle is
// subdivided k^2 times.  Boundary ring j has length 2a and 2k vertices.
struct BuiltPants {
  PLSurface mesh;
  std::array<std::vector<int>, 3> rings;
};
BuiltPants fan_pants(double a, double d, int k);

// Two fan pants glued along all three rings: a closed genus-2 cone surface
// with four cone points of deficit -pi and flat seam collars.  The seams are
// minimizing geodesics of their classes with length 2a.
struct BuiltClosed {
  PLSurface mesh;
  std::array<std::vector<int>, 3> seams;
};
BuiltClosed genus2_surface(double a, double d, int k);

// Fan pants with a gently widening collar glued onto ring 0.  The outer
// boundary ring is geodesic to within its per-vertex turning (about
// growth / (2k * band_height) radians) but longer than the junction ring,
// which stays the minimizing representative of the class.  growth is the
// circumference increase per band.
struct BuiltFlared {
  PLSurface mesh;
  std::vector<int> boundary_ring;
  std::vector<int> junction_ring;
  std::array<std::vector<int>, 2> funnel_rings;
};
BuiltFlared flared_pants(double a, double d, int k, int bands,
                         double band_height, double growth);

// Closed surface with all deficits +pi: four vertices, four faces.
PLSurface regular_tetrahedron(double edge);

// Flat torus from an n x m grid of w x h rectangles, both directions glued.
PLSurface flat_torus(int n, int m, double w, double h);

// Flat open cylinder: m bands of n rectangles, circumference c, height per
// band h.  ring_lo and ring_hi are its two boundary rings.
struct BuiltTube {
  PLSurface mesh;
  std::vector<int> ring_lo, ring_hi;
};
BuiltTube flat_tube(double c, double h, int n, int m);

// Single unrefined hexagon fan: a disk whose only interior vertex is the
// center with deficit exactly -pi.
PLSurface hexagon_disk(double a, double d);

} // namespace geodecomp
