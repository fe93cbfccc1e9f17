#pragma once

#include <vector>

#include "geodecomp/curves.hpp"
#include "geodecomp/warped_chart.hpp"

namespace geodecomp {

// Core chart with a hyperbolic funnel glued to each finite end.  The combined
// chart keeps the core's coordinates: the core occupies its original r-range
// and each funnel continues past the seam with G(r, theta) = g_b * cosh(dr),
// where g_b is the (constant) boundary warp and dr the distance past the
// seam.  Circle lengths in the funnel are then l_b * cosh(dr) for boundary
// length l_b, and the seam is C1.
struct ExtendedSurface {
  WarpedChart chart;       // combined core + funnel(s)
  WarpedChart core;        // the original chart
  bool funnel_lo = false;  // funnel attached past r_lo
  bool funnel_hi = false;  // funnel attached past r_hi
  double seam_lo = 0.0, seam_hi = 0.0;        // seam r-values (core bounds)
  double warp_lo = 1.0, warp_hi = 1.0;        // boundary warp g_b per seam

  double seam_length(bool upper) const;       // boundary geodesic length

  // Fermi view of one funnel: shifted/rescaled chart with the seam at r = 0,
  // G(0, theta) = 1, dG/dr(0) = 0, theta-period = seam length, carrying
  // core data for r < 0 down to the core's far side.
  WarpedChart funnel_chart(bool upper) const;
};

struct ProjectionResult {
  GraphCurve curve;
  bool contained_in_funnel = false; // input never met the core
};

// Attaches a funnel to every finite end of the core chart.  Each such end
// must be a closed geodesic of the chart: G constant in theta and dG/dr = 0
// (one-sided, from inside) at the end, within geodesy_tol.  Throws
// InvalidBoundary otherwise, naming the offending end.
ExtendedSurface attach_funnels(const WarpedChart& core,
                               double geodesy_tol = 1e-6);

// Replaces every funnel excursion of the curve by the seam subarc it spans:
// nodes past a seam are moved onto the seam.  Length strictly decreases
// whenever the input exits the core.  A curve that never meets the core is
// replaced by the full seam circle and flagged.
ProjectionResult project_into_core(const ExtendedSurface& ext,
                                   const GraphCurve& curve);

// Circle length l(r) = integral of G(r, theta) d theta over one period.
double collar_circle_length(const WarpedChart& chart, double r,
                            std::size_t quadrature_nodes = 1024);

} // namespace geodecomp
