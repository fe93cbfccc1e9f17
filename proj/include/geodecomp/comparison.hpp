#pragma once

#include <limits>
#include <string>
#include <vector>

namespace geodecomp {

// Sampled record of a function y(t) claimed to satisfy y'' >= c^2 y > 0 on
// [t0, ...].  Samples are (t, y, y', y'') rows, strictly increasing in t.
// Carrying y'' directly keeps verification independent of any integrator.
struct GrowthWitness {
  double c = 1.0;
  double t0 = 0.0;
  std::vector<double> t, y, dy, ddy;

  // Checks the structural invariants (ordering, positivity, c > 0,
  // t >= t0).  The differential inequality itself is checked by
  // verify_comparison, which reports violations as rejected witnesses.
  void validate() const;

  // Reads a `t,y,dy,ddy` CSV (header required).
  static GrowthWitness from_csv(const std::string& path, double c, double t0);
};

struct ComparisonReport {
  bool holds = false;
  double worst_margin = 0.0;
  double worst_t = 0.0;
};

// Exact solution of y'' = c^2 y with y(t0) = y0, y'(t0) = dy0:
//   y0 cosh c(t - t0) + (dy0 / c) sinh c(t - t0).
double linear_growth_solution(double c, double t0, double y0, double dy0,
                              double t);

// Certified lower bound y_t0 * cosh c(t - t0) for t >= t0.
double cosh_lower_bound(double c, double t0, double y_t0, double t);

// Checks the witness against the comparator anchored at its first sample.
// The comparator's slope is min(witness y' there, dy0_cap) when dy0_cap is
// finite.  Throws RejectedWitness if any sample violates y'' >= c^2 y beyond
// relative slack 1e-8 (open hypotheses resolve in the witness's favor).
ComparisonReport verify_comparison(const GrowthWitness& witness,
                                   double dy0_cap = std::numeric_limits<double>::infinity(),
                                   double tolerance = 1e-6);

} // namespace geodecomp
