#include "geodecomp/collar.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "geodecomp/errors.hpp"
#include "geodecomp/numerics.hpp"

namespace geodecomp {

namespace {

// One-sided dG/dr at a finite end, 3-point stencil from inside.
double one_sided_dr(const WarpedChart& chart, double r_end, double theta,
                    bool upper) {
  double h = 1e-5;
  double s = upper ? 1.0 : -1.0;
  double g0 = chart.warp(r_end, theta);
  double g1 = chart.warp(r_end - s * h, theta);
  double g2 = chart.warp(r_end - s * 2.0 * h, theta);
  return s * (3.0 * g0 - 4.0 * g1 + g2) / (2.0 * h);
}

// Verifies the end circle is a closed geodesic: constant warp, zero normal
// derivative.  Returns the boundary warp value.
double check_geodesic_end(const WarpedChart& chart, double r_end, bool upper,
                          double tol) {
  const int samples = 64;
  double g_ref = chart.warp(r_end, 0.0);
  for (int i = 0; i < samples; ++i) {
    double theta = chart.period() * i / samples;
    double g = chart.warp(r_end, theta);
    double dg = one_sided_dr(chart, r_end, theta, upper);
    if (std::abs(g - g_ref) > tol * (1.0 + std::abs(g_ref)) ||
        std::abs(dg) > tol * (1.0 + std::abs(g_ref))) {
      std::ostringstream os;
      os << "boundary at r = " << r_end
         << " is not geodesic: G = " << g << " (ref " << g_ref
         << "), dG/dr = " << dg;
      fail(ErrorCode::InvalidBoundary, os.str());
    }
  }
  return g_ref;
}

} // namespace

double ExtendedSurface::seam_length(bool upper) const {
  return chart.period() * (upper ? warp_hi : warp_lo);
}

WarpedChart ExtendedSurface::funnel_chart(bool upper) const {
  if ((upper && !funnel_hi) || (!upper && !funnel_lo))
    fail(ErrorCode::DomainViolation, "no funnel attached at that end");
  WarpedChart combined = chart;
  double seam = upper ? seam_hi : seam_lo;
  double gb = upper ? warp_hi : warp_lo;
  double sgn = upper ? 1.0 : -1.0;
  // r' = sgn * (r - seam): seam at 0, funnel side positive.  theta' = gb *
  // theta: arclength along the seam, so G' = G / gb keeps the metric equal.
  double depth_lo, depth_hi;
  if (upper) {
    depth_lo = combined.r_lo() == -kInf ? -kInf : combined.r_lo() - seam;
    depth_hi = kInf;
  } else {
    depth_lo = combined.r_hi() == kInf ? -kInf : seam - combined.r_hi();
    depth_hi = kInf;
  }
  std::vector<double> seams;
  seams.push_back(0.0);
  for (double s : combined.seams()) {
    double mapped = sgn * (s - seam);
    if (std::abs(mapped) > 1e-12) seams.push_back(mapped);
  }
  std::sort(seams.begin(), seams.end());
  return WarpedChart::analytic(
      [combined, seam, gb, sgn](double r, double theta) {
        return combined.warp(seam + sgn * r, theta / gb) / gb;
      },
      [combined, seam, gb, sgn](double r, double theta) {
        return combined.curvature(seam + sgn * r, theta / gb);
      },
      depth_lo, depth_hi, chart.period() * gb, seams);
}

ExtendedSurface attach_funnels(const WarpedChart& core, double geodesy_tol) {
  ExtendedSurface ext;
  ext.core = core;
  ext.funnel_lo = core.r_lo() != -kInf;
  ext.funnel_hi = core.r_hi() != kInf;
  if (!ext.funnel_lo && !ext.funnel_hi)
    fail(ErrorCode::InvalidBoundary,
         "core has no finite boundary to attach a funnel to");
  ext.seam_lo = core.r_lo();
  ext.seam_hi = core.r_hi();
  if (ext.funnel_lo)
    ext.warp_lo = check_geodesic_end(core, ext.seam_lo, false, geodesy_tol);
  if (ext.funnel_hi)
    ext.warp_hi = check_geodesic_end(core, ext.seam_hi, true, geodesy_tol);

  double lo = ext.funnel_lo ? -kInf : core.r_lo();
  double hi = ext.funnel_hi ? kInf : core.r_hi();
  std::vector<double> seams = core.seams();
  if (ext.funnel_lo) seams.push_back(ext.seam_lo);
  if (ext.funnel_hi) seams.push_back(ext.seam_hi);
  std::sort(seams.begin(), seams.end());

  ExtendedSurface copy = ext; // captured by the warp closures
  ext.chart = WarpedChart::analytic(
      [copy](double r, double theta) {
        if (copy.funnel_hi && r > copy.seam_hi)
          return copy.warp_hi * std::cosh(r - copy.seam_hi);
        if (copy.funnel_lo && r < copy.seam_lo)
          return copy.warp_lo * std::cosh(r - copy.seam_lo);
        return copy.core.warp(r, theta);
      },
      [copy](double r, double theta) {
        if (copy.funnel_hi && r > copy.seam_hi) return -1.0;
        if (copy.funnel_lo && r < copy.seam_lo) return -1.0;
        return copy.core.curvature(r, theta);
      },
      lo, hi, core.period(), seams);
  return ext;
}

ProjectionResult project_into_core(const ExtendedSurface& ext,
                                   const GraphCurve& curve) {
  ProjectionResult res;
  res.curve = curve;
  bool meets_core = false;
  for (double& r : res.curve.r) {
    if (ext.funnel_hi && r > ext.seam_hi) {
      r = ext.seam_hi;
    } else if (ext.funnel_lo && r < ext.seam_lo) {
      r = ext.seam_lo;
    } else {
      meets_core = true;
    }
  }
  if (!meets_core) {
    // Entirely inside one funnel: the seam circle itself represents the
    // class and is strictly shorter.
    res.contained_in_funnel = true;
  }
  return res;
}

double collar_circle_length(const WarpedChart& chart, double r,
                            std::size_t quadrature_nodes) {
  if (!chart.contains_r(r))
    fail(ErrorCode::DomainViolation, "circle radius outside chart");
  return simpson_periodic([&](double th) { return chart.warp(r, th); },
                          chart.period(), quadrature_nodes);
}

} // namespace geodecomp
