#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <vector>

namespace geodecomp {

// Small numerical kernels used across the library.  Everything here is
// deterministic: fixed step sizes, fixed evaluation orders.

inline constexpr double kPi = 3.14159265358979323846;

// Classical fixed-step RK4 for a first-order system y' = f(t, y).
// Integrates from t0 to t1 (t1 may be < t0) taking steps of size at most
// |step|.  Calls observe(t, y) after the initial state and after every step
// when observe is non-null.
template <std::size_t N>
void rk4_integrate(const std::function<void(double, const std::array<double, N>&,
                                            std::array<double, N>&)>& f,
                   double t0, double t1, double step,
                   std::array<double, N>& y,
                   const std::function<void(double, const std::array<double, N>&)>&
                       observe = nullptr) {
  double span = t1 - t0;
  if (span == 0.0) {
    if (observe) observe(t0, y);
    return;
  }
  double dir = span > 0 ? 1.0 : -1.0;
  std::size_t steps = static_cast<std::size_t>(std::abs(span) / step + 0.5);
  if (steps == 0) steps = 1;
  double h = span / static_cast<double>(steps);
  if (observe) observe(t0, y);
  std::array<double, N> k1, k2, k3, k4, tmp;
  double t = t0;
  for (std::size_t i = 0; i < steps; ++i) {
    f(t, y, k1);
    for (std::size_t j = 0; j < N; ++j) tmp[j] = y[j] + 0.5 * h * k1[j];
    f(t + 0.5 * h, tmp, k2);
    for (std::size_t j = 0; j < N; ++j) tmp[j] = y[j] + 0.5 * h * k2[j];
    f(t + 0.5 * h, tmp, k3);
    for (std::size_t j = 0; j < N; ++j) tmp[j] = y[j] + h * k3[j];
    f(t + h, tmp, k4);
    for (std::size_t j = 0; j < N; ++j)
      y[j] += h / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
    t = t0 + static_cast<double>(i + 1) * h;
    if (observe) observe(t, y);
  }
  (void)dir;
}

// Composite Simpson rule on [a, b] with n subintervals (n rounded up to even).
double simpson(const std::function<double(double)>& f, double a, double b,
               std::size_t n);

// Composite Simpson for an l-periodic integrand over one period starting at 0.
// Periodicity is not assumed by the rule itself; this is a convenience wrapper
// used for circle-length integrals.
double simpson_periodic(const std::function<double(double)>& f, double l,
                        std::size_t n);

// Solves a cyclic tridiagonal system
//   d[i]*x[i] + u[i]*x[(i+1)%n] + lo[i]*x[(i-1+n)%n] = b[i]
// via the Thomas algorithm plus a rank-one (Sherman-Morrison) correction.
// Returns false if a pivot degenerates.
bool cyclic_tridiagonal_solve(std::vector<double> lo, std::vector<double> d,
                              std::vector<double> u, std::vector<double> b,
                              std::vector<double>& x);

// Central difference helpers with fixed relative step.
double central_d1(const std::function<double(double)>& f, double x,
                  double h = 1e-5);
double central_d2(const std::function<double(double)>& f, double x,
                  double h = 1e-4);

// Estimates the limit of a convergent, eventually-geometric sequence from its
// tail: fits l_k ~ L + A*rho^k to the last values and returns L.  Falls back
// to the final value when the differences do not look geometric.  Used to
// report the infimum of a monotone length trace that never attains its limit.
double geometric_tail_limit(const std::vector<double>& trace);

} // namespace geodecomp
