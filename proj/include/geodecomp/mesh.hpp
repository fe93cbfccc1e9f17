#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace geodecomp {

// Intrinsic triangle: vertex indices plus the three edge lengths.  There is
// no embedding; all geometry derives from the lengths.  len[k] is the length
// of the edge from v[k] to v[(k+1)%3].
struct MeshTriangle {
  std::array<int, 3> v{};
  std::array<double, 3> len{};
};

// Cone-metric surface: piecewise-flat triangles with curvature concentrated
// at vertices as angle deficit (2*pi minus the incident angle sum interior,
// pi minus the sum on the boundary).  Construction validates the whole
// structure: strict triangle inequalities, matching lengths across shared
// edges, manifold vertex links, orientability.  Triangle orientations are
// normalized to a consistent choice per component.
class PLSurface {
public:
  PLSurface(int vertex_count, std::vector<MeshTriangle> triangles);

  int vertex_count() const { return nv_; }
  int triangle_count() const { return int(tris_.size()); }
  int edge_count() const { return int(edge_v_.size()); }
  const MeshTriangle& triangle(int t) const { return tris_[t]; }

  // Edge table.  Each edge knows its one or two incident triangle sides.
  int edge_id(int tri, int side) const { return tri_edge_[tri][side]; }
  std::pair<int, int> edge_vertices(int e) const { return edge_v_[e]; }
  double edge_length(int e) const { return edge_len_[e]; }
  bool boundary_edge(int e) const { return edge_tri_[e][1].tri < 0; }
  bool boundary_vertex(int v) const { return boundary_vertex_[v]; }
  struct Side {
    int tri = -1;
    int side = 0;
  };
  const std::array<Side, 2>& edge_sides(int e) const { return edge_tri_[e]; }
  // Triangle adjacent to `tri` across its side k (-1 on boundary).
  int neighbor(int tri, int side) const;

  // Euclidean corner angle at v[corner] of triangle t (law of cosines).
  double angle(int t, int corner) const;
  double triangle_area(int t) const;
  double vertex_angle_sum(int v) const;
  double cone_deficit(int v) const;
  // Barycentric vertex area: one third of the incident triangle areas.
  double vertex_area(int v) const;

  // Discrete curvature certificate: every interior deficit <= -c^2 * vertex
  // area.  A sampled statement about this mesh, not a proof about a smooth
  // surface.
  bool deficit_certificate(double c) const;

  struct Census {
    int vertices = 0, edges = 0, faces = 0;
    int euler = 0;
    int components = 0;
    int boundary_loops = 0;
    int genus = 0; // of a connected surface; -1 when disconnected
  };
  const Census& census() const { return census_; }
  // Boundary loops as cyclic vertex sequences (consistent orientation).
  const std::vector<std::vector<int>>& boundary_loops() const {
    return boundary_loops_;
  }

  // Sum of all deficits: interior cone deficits plus boundary turning.
  // Equals 2*pi*euler up to floating-point summation error.
  double gauss_bonnet_total() const;

  // Edges incident to a vertex, and the neighbor across each.
  const std::vector<int>& vertex_edges(int v) const { return vertex_edges_[v]; }
  int edge_between(int a, int b) const; // -1 if absent

  // Dijkstra distance field over the edge graph.
  std::vector<double> distances_from(int source) const;

  // Z/2 homology class of a closed vertex loop, as a bit vector over a
  // reduced basis of H1.  Rank must not exceed 64.  The basis is built on
  // first use; signatures are only comparable within one surface.
  std::uint64_t loop_signature(const std::vector<int>& loop) const;
  int homology_rank() const;

  // Cuts along pairwise vertex-disjoint simple closed vertex loops (none
  // touching the boundary).  Loop vertices are duplicated; both copies of
  // each loop become boundary.  Vertex count grows; triangles keep their
  // indices and lengths.
  PLSurface cut_along(const std::vector<std::vector<int>>& loops) const;

  // Connected components as separate surfaces; tri_to_comp maps each
  // triangle index of this surface to its component index.
  std::vector<PLSurface> split_components(std::vector<int>* tri_to_comp) const;

private:
  void build();
  void orient();
  void check_links() const;
  void build_boundary();
  void ensure_homology() const;

  int nv_ = 0;
  std::vector<MeshTriangle> tris_;
  std::vector<std::array<int, 3>> tri_edge_;
  std::vector<std::pair<int, int>> edge_v_;
  std::vector<double> edge_len_;
  std::vector<std::array<Side, 2>> edge_tri_;
  std::vector<std::vector<int>> vertex_edges_;
  std::vector<bool> boundary_vertex_;
  std::vector<std::vector<int>> boundary_loops_;
  Census census_;

  // Homology over Z/2: echelonized face-relation rows over cotree columns.
  mutable bool homology_built_ = false;
  mutable std::vector<int> cotree_index_; // edge -> cotree column or -1
  mutable std::vector<std::vector<std::uint64_t>> rel_rows_; // echelon rows
  mutable std::vector<int> pivot_row_; // cotree column -> row index or -1
  mutable std::vector<int> free_bit_;  // cotree column -> H1 bit or -1
  mutable int homology_rank_ = 0;
  mutable int cotree_words_ = 0;
};

} // namespace geodecomp
