#pragma once

#include <cstddef>
#include <vector>

#include "geodecomp/warped_chart.hpp"

namespace geodecomp {

// Closed curve on a warped chart, stored as a piecewise-linear graph over the
// angular coordinate: node i sits at theta_i = i * span / N where
// span = |winding| * period.  Closure is implicit (node N == node 0): the
// curve winds |winding| times around the chart cylinder.
struct GraphCurve {
  int winding = 1;
  std::vector<double> r;

  std::size_t nodes() const { return r.size(); }
  double span(double period) const {
    return static_cast<double>(winding < 0 ? -winding : winding) * period;
  }
};

// Constant-r circle with the given number of nodes.
GraphCurve constant_circle(double r, int winding = 1, std::size_t nodes = 512);

// Length of the curve in the chart metric dr^2 + G^2 dtheta^2.  Each linear
// segment is integrated with a 3-point Simpson rule, so the result converges
// at fourth order to the exact length of the piecewise-linear curve.
// Throws DomainViolation if any node leaves the chart's r-domain.
double curve_length(const WarpedChart& chart, const GraphCurve& curve);

// Discrete length used by the shortening iteration: per-segment chord rule
// sqrt(dr^2 + G(mid)^2 dtheta^2).  Cheaper than curve_length, same minimizers
// on constant-r circles; exposed for tests.
double curve_length_midpoint(const WarpedChart& chart, const GraphCurve& curve);

// Supremum of |r1(theta) - r2(theta)| over the common grid; curves must have
// the same winding and node count.
double graph_sup_distance(const GraphCurve& a, const GraphCurve& b);

// Resamples the curve to a new node count by linear interpolation.
GraphCurve resample(const GraphCurve& curve, std::size_t nodes);

} // namespace geodecomp
