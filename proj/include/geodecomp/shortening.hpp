#pragma once

#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "geodecomp/curves.hpp"
#include "geodecomp/warped_chart.hpp"

namespace geodecomp {

enum class OutcomeTag { Minimizing, Escapes, Trivial, Inconclusive };

const char* to_string(OutcomeTag tag);

struct TraceRow {
  int iter = 0;
  double length = 0.0; // discrete (midpoint-rule) length of the iterate
  double min_r = 0.0;
  double max_r = 0.0;
};

// Result of homotopy-class minimization.  Exactly one tag applies:
// Minimizing carries the limit curve and its Riemannian length; Escapes
// carries the end side (-1 toward r_lo, +1 toward r_hi) and the extrapolated
// length infimum; Trivial marks collapse below the triviality threshold
// (unreachable for winding classes, which are essential by construction);
// Inconclusive carries a diagnostic note and the full trace.
struct MinimizationOutcome {
  OutcomeTag tag = OutcomeTag::Inconclusive;
  GraphCurve curve;
  double length = 0.0;
  int end_side = 0;
  double inf_length = 0.0;
  double geodesic_residual = 0.0; // max polyline turning angle, radians
  int iterations = 0;
  double window_lo = 0.0, window_hi = 0.0;
  std::vector<TraceRow> trace;
  std::string note;
};

struct ShortenOptions {
  std::size_t nodes = 512;          // per winding period
  int max_iterations = 100000;
  double initial_half_width = 2.0;  // exploration window around the seed
  double seed_r = std::numeric_limits<double>::quiet_NaN(); // default: window center
  double eps_conv = 1e-9;           // relative length change
  int conv_steps = 10;              // consecutive small changes required
  double eps_trivial = -1.0;        // < 0: auto, 1e-6 * period
  double eps_geo = 1e-5;            // residual threshold, radians
  double max_window_width = 1e9;
  int escape_doublings = 3;         // consecutive outward doublings
};

// One damped-Newton shortening step inside the chart domain.  The output is
// in the same free homotopy class (graph curves cannot change winding) with
// discrete length <= the input's; a curve that admits no decrease (already
// geodesic) is returned unchanged.
GraphCurve shorten_step(const WarpedChart& chart, const GraphCurve& curve);

// Full minimization from a seed curve.  The exploration window starts at
// [seed min - half_width, seed max + half_width] intersected with the chart
// domain and doubles away from any artificially clamped side; sustained
// outward doubling certifies escape toward an end.
MinimizationOutcome minimize_from(const WarpedChart& chart,
                                  const GraphCurve& seed,
                                  const ShortenOptions& opts = {});

// Canonical entry for a winding class: seeds the constant circle at the
// window center.
MinimizationOutcome minimize_in_class(const WarpedChart& chart, int winding,
                                      const ShortenOptions& opts = {});

// Whether a curve is homotopically trivial.  Graph curves over the angular
// period always wind, so this is constant false for valid curves; it exists
// as the chart-side counterpart of the mesh-path triviality test.
bool is_trivial(const WarpedChart& chart, const GraphCurve& curve);

struct UniquenessReport {
  int distinct_limits = 0;
  double max_pairwise_distance = 0.0; // between distinct limits
  int inconclusive_runs = 0;
  std::vector<MinimizationOutcome> runs;
  unsigned seed = 0;
};

// Runs minimize_in_class from `restarts` randomized constant-circle seeds
// and clusters the limit curves at sup-distance eps_same.  Under strictly
// negative curvature the class has at most one geodesic, so distinct_limits
// is expected to be 1.
UniquenessReport unique_geodesic_check(const WarpedChart& chart, int winding,
                                       int restarts, unsigned seed = 12345u,
                                       double eps_same = 1e-4,
                                       const ShortenOptions& opts = {});

// Max turning angle of the polyline joints in the chart metric.
double geodesic_residual(const WarpedChart& chart, const GraphCurve& curve);

} // namespace geodecomp
