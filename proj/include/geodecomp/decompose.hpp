#pragma once

#include <string>
#include <vector>

#include "geodecomp/end_classify.hpp"
#include "geodecomp/mesh.hpp"
#include "geodecomp/surface_spec.hpp"

namespace geodecomp {

// Decomposition of a census surface (compact cone-metric core plus analytic
// end charts) into generalized Y-pieces, funnels, and finite cylinders.  All
// curves are vertex walks on the core; all triangle ids refer to the core.

// Region bounded by minimizing closed geodesics, produced by the ball
// exhaustion.  Neither simply nor doubly connected once the exhaustion
// has seen two generators.
struct GeodesicDomain {
  double radius = 0.0;       // ball radius after any degeneracy nudge
  bool radius_nudged = false;
  std::vector<int> tris;
  std::vector<std::vector<int>> boundary;  // minimizing geodesic walks
  std::vector<int> contained_punctures;    // end ids swallowed by the region
  bool incomplete = false;   // a boundary class failed to minimize
};

// Geodesic domains of the distance balls around base_vertex, one per radius,
// nested.  Ball boundary loops are minimized in their free classes; trivial
// loops are dropped, loops parallel to a non-funnel end escape and mark the
// domain's contained punctures, and a class already represented at the
// previous radius reuses that stage's geodesic verbatim.
std::vector<GeodesicDomain> exhaustion_domains(const SurfaceSpec& spec, int base_vertex,
                                               const std::vector<double>& radii);

// Radii schedule: the first radius whose ball carries at least two free
// generators, then r . max(2r, r + longest edge), until the ball has covered
// every triangle for three consecutive stages.
std::vector<double> default_radii(const PLSurface& core, int base_vertex);

// Boundary geodesics present (as identical walks) in every one of the last
// `stages` domains: the stabilization rule that flags funnel boundaries.
std::vector<std::vector<int>> stable_boundaries(const std::vector<GeodesicDomain>& domains,
                                                int stages = 3);

// Generalized Y-piece: a pants region of the core.  cuts lists boundary
// curve ids with multiplicity (a non-separating cut meets a piece twice);
// punctures counts end slots.  cuts.size() + punctures == 3 always.
struct YPiece {
  std::vector<int> tris;
  std::vector<int> cuts;
  int punctures = 0;
};

struct FunnelPiece {
  int end = -1;           // SurfaceSpec end index
  int cut = -1;           // bounding minimizing geodesic
  std::vector<int> tris;  // collar between seam and cut; empty when they agree
};

struct CylinderPiece {
  int boundary_loop = -1; // the nonminimizing boundary geodesic
  int cut = -1;           // the minimizing representative inside
  std::vector<int> tris;
};

struct Decomposition {
  std::vector<std::vector<int>> cuts;  // every cut curve, as core vertex walks
  std::vector<double> cut_lengths;
  std::vector<YPiece> y_pieces;
  std::vector<FunnelPiece> funnels;
  std::vector<CylinderPiece> cylinders;
  std::vector<int> halfplanes;         // representable; finite-type inputs never fill it
  std::vector<EndTag> end_tags;        // classification per SurfaceSpec end
};

// Full decomposition: classifies ends, cuts funnels at the minimizing
// geodesic of their seam class (choosing the seam itself when it minimizes),
// peels finite cylinders off nonminimizing bare boundary geodesics, and
// splits the remaining domain into pants.  Rejects simply connected, doubly
// connected, and torus inputs, naming the violated hypothesis.
Decomposition pants_decompose(const SurfaceSpec& spec);

// Pants split of one geodesic domain.  cuts holds the domain boundary walks
// first (`inherited` of them), then the interior cuts the split found;
// piece cut ids index that list.
struct SplitResult {
  std::vector<std::vector<int>> cuts;
  int inherited = 0;
  std::vector<YPiece> pieces;
};
SplitResult split_domain(const SurfaceSpec& spec, const GeodesicDomain& domain);

// Validation report; every check independent, pass is their conjunction.
struct DecompositionReport {
  bool cuts_disjoint = false;     // cut walks pairwise vertex-disjoint
  bool cuts_minimal = false;      // perturbed re-minimization reproduces each cut
  bool pieces_euler = false;      // every Y-piece totals -2*pi of curvature
  bool counts_balance = false;    // piece and cut counts match the census
  bool certificate_clean = true;  // under K <= -c^2: no cylinders, no escaping ends
  bool cylinder_bijection = false;// cylinders == nonminimizing bare boundaries
  bool pass = false;
  std::vector<std::string> notes;
};
DecompositionReport validate_decomposition(const SurfaceSpec& spec, const Decomposition& d);

}  // namespace geodecomp
