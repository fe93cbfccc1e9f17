#include "geodecomp/geodesic.hpp"

#include <algorithm>
#include <cmath>

#include "geodecomp/errors.hpp"
#include "geodecomp/numerics.hpp"

namespace geodecomp {

namespace {

// Shared fixed-step RK4 driver over state (q, theta, dq, dtheta).  `accel`
// fills (q'', theta''); `inside` reports whether q is in the coordinate
// domain.  Recording is thinned so long integrations stay bounded in memory
// while conserved-quantity tracking still sees every step.
template <typename Accel, typename Inside, typename Track>
GeodesicPath drive(double q0, double theta0, double dq0, double dtheta0,
                   double arclength, double step, std::size_t max_points,
                   Accel accel, Inside inside, Track track) {
  GeodesicPath path;
  std::size_t total_steps =
      static_cast<std::size_t>(std::ceil(arclength / step));
  std::size_t stride = std::max<std::size_t>(1, total_steps / max_points);

  double y[4] = {q0, theta0, dq0, dtheta0};
  auto rhs = [&](const double* in, double* out) {
    out[0] = in[2];
    out[1] = in[3];
    accel(in[0], in[1], in[2], in[3], out[2], out[3]);
  };

  path.s.push_back(0.0);
  path.r.push_back(y[0]);
  path.theta.push_back(y[1]);
  track(y);

  double s = 0.0;
  for (std::size_t i = 0; i < total_steps; ++i) {
    double h = std::min(step, arclength - s);
    if (h <= 0.0) break;
    double k1[4], k2[4], k3[4], k4[4], tmp[4];
    rhs(y, k1);
    for (int j = 0; j < 4; ++j) tmp[j] = y[j] + 0.5 * h * k1[j];
    rhs(tmp, k2);
    for (int j = 0; j < 4; ++j) tmp[j] = y[j] + 0.5 * h * k2[j];
    rhs(tmp, k3);
    for (int j = 0; j < 4; ++j) tmp[j] = y[j] + h * k3[j];
    rhs(tmp, k4);
    double next[4];
    for (int j = 0; j < 4; ++j)
      next[j] = y[j] + h / 6.0 * (k1[j] + 2 * k2[j] + 2 * k3[j] + k4[j]);
    if (!inside(next[0])) {
      path.exited_domain = true;
      break;
    }
    for (int j = 0; j < 4; ++j) y[j] = next[j];
    s += h;
    track(y);
    if ((i + 1) % stride == 0 || i + 1 == total_steps) {
      path.s.push_back(s);
      path.r.push_back(y[0]);
      path.theta.push_back(y[1]);
    }
  }
  if (path.s.back() != s) {
    path.s.push_back(s);
    path.r.push_back(y[0]);
    path.theta.push_back(y[1]);
  }
  return path;
}

} // namespace

GeodesicPath geodesic_integrate(const WarpedChart& chart, double r0,
                                double theta0, double dir_r, double dir_theta,
                                double arclength, double step,
                                std::size_t max_points) {
  if (!chart.contains_r(r0))
    fail(ErrorCode::DomainViolation, "geodesic start point outside chart");
  if (!(arclength > 0.0) || !(step > 0.0))
    fail(ErrorCode::DomainViolation, "arclength and step must be positive");

  double g0 = chart.warp(r0, theta0);
  double speed2 = dir_r * dir_r + g0 * g0 * dir_theta * dir_theta;
  if (!(speed2 > 0.0))
    fail(ErrorCode::DomainViolation, "zero initial direction");
  double inv = 1.0 / std::sqrt(speed2);

  // Keep one step of margin inside the sampled window so RK4 stage points
  // never leave the domain.
  auto inside = [&](double r) {
    return chart.contains_r(r - step) && chart.contains_r(r + step);
  };
  auto accel = [&](double r, double th, double dr, double dth, double& ddr,
                   double& ddth) {
    double g = chart.warp(r, th);
    double gr = chart.warp_dr(r, th);
    double gth = chart.warp_dth(r, th);
    ddr = g * gr * dth * dth;
    ddth = -2.0 * (gr / g) * dr * dth - (gth / g) * dth * dth;
  };
  return drive(r0, theta0, dir_r * inv, dir_theta * inv, arclength, step,
               max_points, accel, inside, [](const double*) {});
}

GeodesicPath geodesic_integrate(const RevolutionProfile& profile, double x0,
                                double theta0, double dir_x, double dir_theta,
                                double arclength, double step,
                                std::size_t max_points) {
  if (x0 < profile.x_lo() || x0 > profile.x_hi())
    fail(ErrorCode::DomainViolation, "geodesic start point outside profile");
  if (!(arclength > 0.0) || !(step > 0.0))
    fail(ErrorCode::DomainViolation, "arclength and step must be positive");

  double f0 = profile.radius(x0);
  double d10 = profile.radius_d1(x0);
  double speed2 = (1.0 + d10 * d10) * dir_x * dir_x +
                  f0 * f0 * dir_theta * dir_theta;
  if (!(speed2 > 0.0))
    fail(ErrorCode::DomainViolation, "zero initial direction");
  double inv = 1.0 / std::sqrt(speed2);

  auto inside = [&](double x) {
    return x - step >= profile.x_lo() && x + step <= profile.x_hi();
  };
  auto accel = [&](double x, double, double dx, double dth, double& ddx,
                   double& ddth) {
    double f = profile.radius(x);
    double d1 = profile.radius_d1(x);
    double d2 = profile.radius_d2(x);
    double w = 1.0 + d1 * d1;
    ddx = (-d1 * d2 * dx * dx + f * d1 * dth * dth) / w;
    ddth = -2.0 * (d1 / f) * dx * dth;
  };

  double c0 = f0 * f0 * dir_theta * inv;
  double max_dev = 0.0;
  auto track = [&](const double* y) {
    double f = profile.radius(y[0]);
    double c = f * f * y[3];
    max_dev = std::max(max_dev, std::abs(c - c0));
  };
  GeodesicPath path = drive(x0, theta0, dir_x * inv, dir_theta * inv,
                            arclength, step, max_points, accel, inside, track);
  path.has_clairaut = true;
  path.clairaut_initial = c0;
  path.clairaut_max_dev = max_dev;
  return path;
}

} // namespace geodecomp
