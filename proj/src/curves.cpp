#include "geodecomp/curves.hpp"

#include <cmath>

#include "geodecomp/errors.hpp"

namespace geodecomp {

GraphCurve constant_circle(double r, int winding, std::size_t nodes) {
  GraphCurve c;
  c.winding = winding;
  c.r.assign(nodes, r);
  return c;
}

namespace {

void check_curve(const WarpedChart& chart, const GraphCurve& curve) {
  if (curve.winding == 0)
    fail(ErrorCode::InvalidCurve, "graph curve must wind at least once");
  if (curve.r.size() < 3)
    fail(ErrorCode::InvalidCurve, "graph curve needs at least 3 nodes");
  for (double r : curve.r)
    if (!chart.contains_r(r))
      fail(ErrorCode::DomainViolation,
           "curve node leaves the chart's r-domain");
}

} // namespace

double curve_length(const WarpedChart& chart, const GraphCurve& curve) {
  check_curve(chart, curve);
  const std::size_t n = curve.r.size();
  const double span = curve.span(chart.period());
  const double dth = span / static_cast<double>(n);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double r0 = curve.r[i];
    double r1 = curve.r[(i + 1) % n];
    double th0 = dth * static_cast<double>(i);
    double slope = (r1 - r0) / dth;
    auto integrand = [&](double th) {
      double r = r0 + slope * (th - th0);
      double g = chart.warp(r, th);
      return std::sqrt(slope * slope + g * g);
    };
    // 3-point Simpson on the segment.
    double a = integrand(th0);
    double m = integrand(th0 + 0.5 * dth);
    double b = integrand(th0 + dth);
    total += dth / 6.0 * (a + 4.0 * m + b);
  }
  return total;
}

double curve_length_midpoint(const WarpedChart& chart, const GraphCurve& curve) {
  check_curve(chart, curve);
  const std::size_t n = curve.r.size();
  const double span = curve.span(chart.period());
  const double dth = span / static_cast<double>(n);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double r0 = curve.r[i];
    double r1 = curve.r[(i + 1) % n];
    double dr = r1 - r0;
    double g = chart.warp(0.5 * (r0 + r1), dth * (static_cast<double>(i) + 0.5));
    total += std::sqrt(dr * dr + g * g * dth * dth);
  }
  return total;
}

double graph_sup_distance(const GraphCurve& a, const GraphCurve& b) {
  if (a.winding != b.winding || a.r.size() != b.r.size())
    fail(ErrorCode::InvalidCurve,
         "curves must share winding and node count for sup distance");
  double d = 0.0;
  for (std::size_t i = 0; i < a.r.size(); ++i)
    d = std::max(d, std::abs(a.r[i] - b.r[i]));
  return d;
}

GraphCurve resample(const GraphCurve& curve, std::size_t nodes) {
  GraphCurve out;
  out.winding = curve.winding;
  out.r.resize(nodes);
  const std::size_t n = curve.r.size();
  for (std::size_t i = 0; i < nodes; ++i) {
    double pos = static_cast<double>(i) * static_cast<double>(n) /
                 static_cast<double>(nodes);
    std::size_t j = static_cast<std::size_t>(pos);
    double t = pos - static_cast<double>(j);
    out.r[i] = (1.0 - t) * curve.r[j % n] + t * curve.r[(j + 1) % n];
  }
  return out;
}

} // namespace geodecomp
