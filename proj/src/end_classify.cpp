#include "geodecomp/end_classify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "geodecomp/collar.hpp"
#include "geodecomp/errors.hpp"
#include "geodecomp/numerics.hpp"

namespace geodecomp {

const char* to_string(EndTag tag) {
  switch (tag) {
  case EndTag::Funnel: return "Funnel";
  case EndTag::GeneralizedPuncture: return "GeneralizedPuncture";
  case EndTag::Puncture: return "Puncture";
  case EndTag::Inconclusive: return "Inconclusive";
  }
  return "Inconclusive";
}

std::vector<GrowthSample> growth_profile(const WarpedChart& chart,
                                         const std::vector<double>& rs) {
  std::vector<GrowthSample> out;
  out.reserve(rs.size());
  auto len = [&](double r) { return collar_circle_length(chart, r); };
  for (double r : rs) {
    if (!chart.contains_r(r)) {
      std::ostringstream msg;
      msg << "growth sample r = " << r << " outside chart domain ["
          << chart.r_lo() << ", " << chart.r_hi() << "]";
      fail(ErrorCode::DomainViolation, msg.str());
    }
    GrowthSample s;
    s.r = r;
    s.l = len(r);

    auto slack_at = [&](double p) {
      double slack = std::numeric_limits<double>::infinity();
      if (!std::isinf(chart.r_lo())) slack = std::min(slack, p - chart.r_lo());
      if (!std::isinf(chart.r_hi())) slack = std::min(slack, chart.r_hi() - p);
      for (double sm : chart.seams()) {
        double dd = std::abs(sm - p);
        if (dd > 1e-12) slack = std::min(slack, dd);
      }
      return slack;
    };

    // Derivatives come from centered stencils that must not straddle a seam
    // or leave the domain; samples sitting on or near one are nudged to the
    // side with more room before differencing.
    double c = r;
    const double sc = std::max(1.0, std::abs(r));
    const double need = 2.5e-4 * sc;
    if (slack_at(c) < need) {
      double up = std::isinf(chart.r_hi()) ? kInf : chart.r_hi() - c;
      double dn = std::isinf(chart.r_lo()) ? kInf : c - chart.r_lo();
      for (double sm : chart.seams()) {
        if (sm > c + 1e-12) up = std::min(up, sm - c);
        if (sm < c - 1e-12) dn = std::min(dn, c - sm);
      }
      c += (up >= dn) ? need : -need;
    }
    const double room = std::max(slack_at(c), 1e-8);
    const double h1 = std::min(1e-5 * sc, room / 2.5);
    const double h2 = std::min(1e-4 * sc, room / 2.5);
    s.lp = (len(c + h1) - len(c - h1)) / (2.0 * h1);
    s.lpp = (len(c + h2) - 2.0 * len(c) + len(c - h2)) / (h2 * h2);
    out.push_back(s);
  }
  return out;
}

bool growth_profile_check(const std::vector<GrowthSample>& profile, double c) {
  const double c2 = c * c;
  for (const GrowthSample& s : profile) {
    // Slack covers second-difference noise in lpp, which dominates any
    // quadrature error in l.
    const double slack =
        1e-5 * std::max({1.0, std::abs(s.lpp), c2 * std::abs(s.l)});
    if (s.lpp < c2 * s.l - slack) return false;
  }
  return true;
}

double sampled_curvature_bound(const WarpedChart& chart, double r_lo,
                               double r_hi, std::size_t nr,
                               std::size_t ntheta) {
  if (!(r_hi > r_lo))
    fail(ErrorCode::DomainViolation, "curvature sampling needs r_hi > r_lo");
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i <= nr; ++i) {
    double r = r_lo + (r_hi - r_lo) * double(i) / double(nr);
    // Curvature may be undefined exactly on a seam; nudge off it.
    for (double seam : chart.seams())
      if (std::abs(seam - r) < 1e-12) r += 1e-9;
    if (!chart.contains_r(r)) continue;
    for (std::size_t j = 0; j < ntheta; ++j) {
      double th = chart.period() * double(j) / double(ntheta);
      worst = std::max(worst, chart.curvature(r, th));
    }
  }
  if (!(worst < 0.0)) return 0.0;
  return std::sqrt(-worst);
}

EndClassification classify_end(const WarpedChart& chart, int winding,
                               ShortenOptions opts) {
  const bool lo_open = std::isinf(chart.r_lo());
  const bool hi_open = std::isinf(chart.r_hi());
  if (lo_open == hi_open)
    fail(ErrorCode::DomainViolation,
         "end chart must be unbounded on exactly one side");
  const int end_sign = hi_open ? +1 : -1;

  // Seed against the finite side so a bounding geodesic near the core is
  // found before the search wanders into the end.
  if (std::isnan(opts.seed_r))
    opts.seed_r = hi_open ? chart.r_lo() : chart.r_hi();

  EndClassification result;
  result.outcome = minimize_in_class(chart, winding, opts);
  const MinimizationOutcome& mo = result.outcome;

  switch (mo.tag) {
  case OutcomeTag::Minimizing:
    result.tag = EndTag::Funnel;
    result.seam_length = mo.length;
    result.evidence_note = "minimizing closed geodesic bounds the end";
    break;
  case OutcomeTag::Escapes:
    if (mo.end_side != end_sign) {
      result.tag = EndTag::Inconclusive;
      result.evidence_note =
          "length decay escapes toward the core side; chart does not "
          "isolate the end";
    } else if (mo.inf_length == 0.0) {
      result.tag = EndTag::Puncture;
      result.inf_length = 0.0;
      result.evidence_note = "class length infimum 0, not attained";
    } else {
      result.tag = EndTag::GeneralizedPuncture;
      result.inf_length = mo.inf_length;
      result.evidence_note = "positive class length infimum, not attained";
    }
    break;
  case OutcomeTag::Trivial:
  case OutcomeTag::Inconclusive:
    result.tag = EndTag::Inconclusive;
    result.evidence_note = mo.note;
    break;
  }

  // Growth evidence over the explored window, clipped to the domain.
  double lo = std::max(chart.r_lo(), mo.window_lo);
  double hi = std::min(chart.r_hi(), mo.window_hi);
  if (hi - lo > 1e-6) {
    const std::size_t n = 32;
    // Stay clear of the boundary so second differences are centered.
    const double pad = std::min(1e-3, (hi - lo) * 1e-3);
    std::vector<double> rs;
    rs.reserve(n + 1);
    for (std::size_t i = 0; i <= n; ++i)
      rs.push_back(lo + pad + (hi - lo - 2.0 * pad) * double(i) / double(n));
    result.profile = growth_profile(chart, rs);
    result.sampled_c = sampled_curvature_bound(chart, lo + pad, hi - pad);
  }
  return result;
}

bool puncture_consistency(const EndClassification& classification,
                          double certified_c) {
  if (classification.tag != EndTag::GeneralizedPuncture) return true;
  return !(certified_c > 0.0);
}

} // namespace geodecomp
