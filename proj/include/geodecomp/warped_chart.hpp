#pragma once

#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <vector>

namespace geodecomp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// One solved column of the warp ODE G'' = -K G at a fixed angle: ordered
// samples of (r, G, dG/dr), plus an optional auxiliary channel (used by
// revolution surfaces to remember the profile coordinate x(r)).
struct SampledColumn {
  std::vector<double> r, g, dg, aux;
  bool has_aux = false;
};

// Raw warp ODE solve at a fixed angle over [r_from, r_to] containing r0.
// Initial data G(r0) = g0, G'(r0) = dg0.  Fixed-step RK4; marches outward
// from r0 in both directions.  Throws DegenerateMetric if G reaches zero,
// reporting the first crossing.
SampledColumn jacobi_warp(const std::function<double(double, double)>& curvature,
                          double theta, double r0, double g0, double dg0,
                          double r_from, double r_to, double step);

// Cylinder-like coordinate patch with metric dr^2 + G(r,theta)^2 dtheta^2.
// G is positive and periodic in theta with the chart period.  The r-domain
// may be unbounded on either side; sampled backends extend their window
// lazily (synchronized internally).  Copies share the same backing store.
class WarpedChart {
public:
  WarpedChart() = default;

  double r_lo() const;
  double r_hi() const;
  double period() const;
  const std::vector<double>& seams() const; // interior r values with C1-only regularity

  bool lower_unbounded() const { return r_lo() == -kInf; }
  bool upper_unbounded() const { return r_hi() == kInf; }
  bool contains_r(double r) const;

  double warp(double r, double theta) const;      // G
  double warp_dr(double r, double theta) const;   // dG/dr
  double warp_dth(double r, double theta) const;  // dG/dtheta
  double warp_drr(double r, double theta) const;  // d2G/dr2
  double curvature(double r, double theta) const; // K = -G_rr / G

  // Auxiliary channel for sampled charts (e.g. profile coordinate); throws
  // if the chart has none.
  bool has_aux() const;
  double aux(double r) const;

  // Forces the sampled window to cover [lo, hi] (clamped to the domain).
  // No-op for analytic charts.
  void ensure_window(double lo, double hi) const;

  // Largest sampled/declared window currently available without further
  // extension, clamped to [r_lo, r_hi].  Analytic charts report their domain
  // clamped to +-fallback.
  std::pair<double, double> current_window(double fallback = 2.0) const;

  // ---- factories ----

  // Closed-form warp; curvature optional (finite differences otherwise).
  static WarpedChart analytic(std::function<double(double, double)> warp,
                              std::function<double(double, double)> curvature,
                              double r_lo, double r_hi, double period,
                              std::vector<double> seams = {});

  // Warp generated from a curvature field by solving G'' = -K G per angle.
  // theta_dependent selects per-angle columns; otherwise a single column is
  // shared by all angles.
  static WarpedChart from_curvature(std::function<double(double, double)> curvature,
                                    bool theta_dependent, double r0, double g0,
                                    double dg0, double r_lo, double r_hi,
                                    double period, double step = 1e-3,
                                    std::vector<double> seams = {});

  // Sampled chart driven by a custom marcher (used by revolution surfaces).
  // extend(column, target) must append ordered samples on the near side of
  // `target` until the column covers it (or throw).
  static WarpedChart sampled(std::function<void(SampledColumn&, double)> extend,
                             std::function<double(double)> curvature_of_r,
                             double r_lo, double r_hi, double period);

  struct Impl;
  const std::shared_ptr<Impl>& impl() const { return impl_; }

private:
  std::shared_ptr<Impl> impl_;
};

} // namespace geodecomp
