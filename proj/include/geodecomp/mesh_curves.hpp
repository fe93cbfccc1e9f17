#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "geodecomp/mesh.hpp"
#include "geodecomp/shortening.hpp"

namespace geodecomp {

// Closed transversal curve on a PLSurface: a cyclic sequence of edge
// crossings.  s parametrizes the crossing point from the edge's smaller
// vertex id toward the larger.  Consecutive crossings must cut edges of a
// common triangle; the segment between them is the straight chord in that
// triangle's own metric.
struct MeshCrossing {
  int edge = -1;
  double s = 0.5;
};

struct MeshPath {
  std::vector<MeshCrossing> crossings;
};

// Total length: each segment measured in a planar unfolding of its triangle.
double path_length(const PLSurface& mesh, const MeshPath& path);

// One pull-tight sweep: every crossing moves to the point minimizing the sum
// of its two adjacent segments (the two triangles unfolded flat across the
// crossed edge), spur pairs whose removal shortens the path are cancelled,
// and a run of crossings pinned against a vertex is re-routed around its far
// side when that is strictly shorter.  Length never increases.
MeshPath shorten_step(const PLSurface& mesh, const MeshPath& path);

// Cyclic crossing-word reduction: adjacent crossings of the same edge
// cancel.  An empty reduced word certifies a contractible curve; a nonempty
// one decides nothing on its own.
bool word_reduces_to_empty(const MeshPath& path);

// true iff pull-tight drives the length below eps_trivial or the crossing
// word cancels away.  eps_trivial < 0 selects 1e-6 times the shortest edge.
bool is_trivial(const PLSurface& mesh, const MeshPath& path,
                double eps_trivial = -1.0);

// Snap each crossing to an endpoint of its edge, choosing the combination
// of endpoints whose walk is shortest.  The result is a closed vertex walk
// freely homotopic to the path.
std::vector<int> snap_to_loop(const PLSurface& mesh, const MeshPath& path);

// --- closed vertex walks along mesh edges ---

double loop_length(const PLSurface& mesh, const std::vector<int>& loop);

// Angle sum at loop[i] on the left / right of the directed loop.  Infinite
// when that side leaves through the mesh boundary.
std::pair<double, double> side_angle_sums(const PLSurface& mesh,
                                          const std::vector<int>& loop,
                                          int i);

// Max over loop vertices of (pi - smaller side angle sum), clamped at zero.
// Zero residual is the discrete geodesic condition.
double loop_residual(const PLSurface& mesh, const std::vector<int>& loop);

struct LoopMinimizeResult {
  OutcomeTag tag = OutcomeTag::Inconclusive;
  std::vector<int> loop;
  double length = 0.0;
  double residual = 0.0;
  int moves = 0;
  std::string note;
};

// Monotone local shortening: backtrack removal plus fan slides (replace a
// loop vertex by the chain of link vertices on one side) whenever the move
// strictly shortens the walk.  A walk that collapses to fewer than three
// vertices or to a single face boundary is Trivial; a fixed point within
// eps_geo of the geodesic condition is Minimizing; anything else is
// Inconclusive.
LoopMinimizeResult minimize_loop(const PLSurface& mesh, std::vector<int> seed,
                                 double eps_geo = 1e-5,
                                 int max_moves = 200000);

// Homotopic jitter for minimality audits: `count` fan slides applied at
// seeded-random positions regardless of length change.
std::vector<int> perturb_loop(const PLSurface& mesh, std::vector<int> loop,
                              int count, std::uint32_t seed);

// true iff the walk collapses under minimize_loop.  A nonzero Z/2 signature
// short-circuits to false.
bool loop_is_trivial(const PLSurface& mesh, const std::vector<int>& loop);

// Short cycle candidates: for every shortest-path tree, the cycle each
// non-tree edge closes, deduplicated and sorted by length.  The shortest
// cycle of every free class through some vertex is in the list.  Cycles
// longer than `budget` are dropped.
std::vector<std::vector<int>> shortest_cycles(const PLSurface& mesh,
                                              double budget);

} // namespace geodecomp
