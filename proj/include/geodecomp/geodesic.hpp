#pragma once

#include <cstddef>
#include <vector>

#include "geodecomp/revolution.hpp"
#include "geodecomp/warped_chart.hpp"

namespace geodecomp {

// Open unit-speed path from numerical geodesic integration.  `r` holds the
// collar coordinate on charts and the profile coordinate x on revolution
// surfaces.  `exited_domain` marks truncation at a domain boundary.
struct GeodesicPath {
  std::vector<double> s;
  std::vector<double> r;
  std::vector<double> theta;
  bool exited_domain = false;
  // Conserved quantity f^2 * theta' on revolution surfaces (f sin phi at
  // unit speed); max_dev tracks the worst excursion from the initial value.
  bool has_clairaut = false;
  double clairaut_initial = 0.0;
  double clairaut_max_dev = 0.0;
};

// Integrates the geodesic ODE of ds^2 = dr^2 + G^2 dtheta^2 from (r0, theta0)
// with initial velocity proportional to (dir_r, dir_theta), normalized to
// unit speed.  Fixed-step RK4; the path is truncated at the chart boundary.
GeodesicPath geodesic_integrate(const WarpedChart& chart, double r0,
                                double theta0, double dir_r, double dir_theta,
                                double arclength, double step = 1e-3,
                                std::size_t max_points = 200000);

// Same for a revolution profile in (x, theta) coordinates, tracking the
// Clairaut quantity along the path.
GeodesicPath geodesic_integrate(const RevolutionProfile& profile, double x0,
                                double theta0, double dir_x, double dir_theta,
                                double arclength, double step = 1e-3,
                                std::size_t max_points = 200000);

} // namespace geodecomp
