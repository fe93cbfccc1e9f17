#pragma once

#include <variant>

#include "geodecomp/mesh.hpp"
#include "geodecomp/warped_chart.hpp"

namespace geodecomp {

// Annular band of a chart between two geodesic boundary circles.
struct ChartRegion {
  WarpedChart chart;
  double r_lo = 0.0;
  double r_hi = 0.0;
};

// A whole PL piece; its boundary polygons carry the turning.
struct MeshRegion {
  PLSurface mesh;
};

using SurfacePiece = std::variant<ChartRegion, MeshRegion>;

// Total curvature of the piece including boundary turning, so the result is
// 2*pi times the Euler characteristic.  Chart regions integrate -G_rr/G over
// the band and require both boundary circles geodesic (|dG/dr| within
// boundary_tol everywhere), else UnsupportedBoundary.  Mesh regions sum cone
// deficits and boundary turning.
double gauss_bonnet(const SurfacePiece& piece, double boundary_tol = 1e-6);

} // namespace geodecomp
