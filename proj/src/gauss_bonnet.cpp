#include "geodecomp/gauss_bonnet.hpp"

#include <cmath>
#include <sstream>

#include "geodecomp/errors.hpp"
#include "geodecomp/numerics.hpp"

namespace geodecomp {

namespace {

double chart_total(const ChartRegion& region, double boundary_tol) {
  const WarpedChart& chart = region.chart;
  if (!(region.r_lo < region.r_hi))
    fail(ErrorCode::DomainViolation, "region needs r_lo < r_hi");
  if (!std::isfinite(region.r_lo) || !std::isfinite(region.r_hi) ||
      !chart.contains_r(region.r_lo) || !chart.contains_r(region.r_hi))
    fail(ErrorCode::DomainViolation, "region leaves the chart domain");

  const int nth = 256;
  for (const double r : {region.r_lo, region.r_hi}) {
    for (int i = 0; i < nth; ++i) {
      const double th = chart.period() * i / nth;
      const double slope = chart.warp_dr(r, th);
      const double scale = std::max(1.0, std::abs(chart.warp(r, th)));
      if (std::abs(slope) > boundary_tol * scale) {
        std::ostringstream os;
        os << "boundary circle at r = " << r
           << " is not geodesic: dG/dr = " << slope;
        fail(ErrorCode::UnsupportedBoundary, os.str());
      }
    }
  }

  // K*G = -G_rr, so the r-integral telescopes to the boundary slopes; only
  // the theta quadrature remains.  dG/dr is continuous across seams, so no
  // splitting is needed.
  auto integrand = [&](double th) {
    return chart.warp_dr(region.r_lo, th) - chart.warp_dr(region.r_hi, th);
  };
  return simpson_periodic(integrand, chart.period(), 1024);
}

} // namespace

double gauss_bonnet(const SurfacePiece& piece, double boundary_tol) {
  if (const auto* chart = std::get_if<ChartRegion>(&piece))
    return chart_total(*chart, boundary_tol);
  return std::get<MeshRegion>(piece).mesh.gauss_bonnet_total();
}

} // namespace geodecomp
