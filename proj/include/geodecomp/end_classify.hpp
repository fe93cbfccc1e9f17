#pragma once

#include <string>
#include <vector>

#include "geodecomp/shortening.hpp"
#include "geodecomp/warped_chart.hpp"

namespace geodecomp {

enum class EndTag { Funnel, GeneralizedPuncture, Puncture, Inconclusive };

const char* to_string(EndTag tag);

struct GrowthSample {
  double r = 0.0;
  double l = 0.0;   // circle length l(r)
  double lp = 0.0;  // dl/dr
  double lpp = 0.0; // d2l/dr2
};

// End taxonomy by the minimization dichotomy: a Funnel is bounded by a
// minimizing closed geodesic; a Puncture's class-length infimum is 0 with no
// geodesic; a GeneralizedPuncture escapes with positive infimum.
struct EndClassification {
  EndTag tag = EndTag::Inconclusive;
  double seam_length = 0.0; // Funnel: length of the bounding geodesic
  double inf_length = 0.0;  // escape cases
  MinimizationOutcome outcome;       // underlying minimization evidence
  std::vector<GrowthSample> profile; // sampled l(r) growth evidence
  double sampled_c = 0.0;            // window-sampled bound: max K <= -c^2
  std::string evidence_note;
};

// Classifies the collared end covered by the chart.  The chart must be
// unbounded on exactly one side (the end); the other side is the surface
// core.  The generator class is winding 1 by default.
EndClassification classify_end(const WarpedChart& chart, int winding = 1,
                               ShortenOptions opts = {});

// Circle lengths and finite-difference derivatives at the given radii.
// Stencils never straddle a metric seam or the domain boundary (one-sided
// differences are used there).
std::vector<GrowthSample> growth_profile(const WarpedChart& chart,
                                         const std::vector<double>& rs);

// True iff l'' >= c^2 l holds at every sample (relative slack 1e-6).
bool growth_profile_check(const std::vector<GrowthSample>& profile, double c);

// Lemma-consistency audit: a GeneralizedPuncture coexisting with a certified
// uniform bound K <= -c^2 (c > 0) on the end indicates a numerical or
// modeling error, because such bounds force every generalized puncture to be
// a puncture.  Pass c <= 0 when no certificate applies.
bool puncture_consistency(const EndClassification& classification,
                          double certified_c);

// Window-sampled curvature bound: returns c >= 0 with sampled max K = -c^2
// (0 when the sampled max is nonnegative).  Labeled evidence, never a proof.
double sampled_curvature_bound(const WarpedChart& chart, double r_lo,
                               double r_hi, std::size_t nr = 64,
                               std::size_t ntheta = 16);

} // namespace geodecomp
