#pragma once

#include <functional>

#include "geodecomp/expr.hpp"
#include "geodecomp/warped_chart.hpp"

namespace geodecomp {

// Surface of revolution with profile radius f(x) > 0, carrying the induced
// metric (1 + f'(x)^2) dx^2 + f(x)^2 dtheta^2 with theta of period 2*pi.
// The x-domain may be unbounded.
class RevolutionProfile {
public:
  RevolutionProfile(std::function<double(double)> f, double x_lo, double x_hi);
  static RevolutionProfile from_expr(const Expr& profile, double x_lo, double x_hi);

  double x_lo() const { return x_lo_; }
  double x_hi() const { return x_hi_; }

  double radius(double x) const;   // f, validated > 0 and finite
  double radius_d1(double x) const;
  double radius_d2(double x) const;

  // Gauss curvature of the surface at x.
  double curvature(double x) const;

  // Arclength reparametrization along meridians: returns an equivalent
  // warped chart with r = signed meridian arclength from the base point
  // (x = 0 when the domain allows, otherwise the domain midpoint) and
  // G(r) = f(x(r)).  The chart's auxiliary channel stores x(r).
  WarpedChart to_chart(double step = 1e-3) const;

  double base_x() const { return base_x_; }

private:
  std::function<double(double)> f_;
  double x_lo_, x_hi_, base_x_;
};

} // namespace geodecomp
