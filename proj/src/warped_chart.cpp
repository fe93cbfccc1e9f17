#include "geodecomp/warped_chart.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "geodecomp/errors.hpp"
#include "geodecomp/numerics.hpp"

namespace geodecomp {

namespace {

// Cubic Hermite on [r0, r1] from endpoint values and derivatives.
double hermite(double r, double r0, double r1, double y0, double y1, double d0,
               double d1) {
  double h = r1 - r0;
  double t = (r - r0) / h;
  double t2 = t * t, t3 = t2 * t;
  return (2 * t3 - 3 * t2 + 1) * y0 + (t3 - 2 * t2 + t) * h * d0 +
         (-2 * t3 + 3 * t2) * y1 + (t3 - t2) * h * d1;
}

// RK4 march of (g, g') with g'' = -K(r) g from (r_at, g, dg) to r_target,
// appending samples after each step.  Sub-steps never straddle a seam.
void march_jacobi(const std::function<double(double)>& K, double step,
                  const std::vector<double>& seams, double r_at, double g,
                  double dg, double r_target, SampledColumn& col,
                  bool push_front_order) {
  double dir = r_target > r_at ? 1.0 : -1.0;
  // Collect breakpoints (seams strictly between r_at and r_target).
  std::vector<double> stops;
  for (double s : seams)
    if ((s - r_at) * dir > 1e-15 && (r_target - s) * dir > 1e-15) stops.push_back(s);
  std::sort(stops.begin(), stops.end());
  if (dir < 0) std::reverse(stops.begin(), stops.end());
  stops.push_back(r_target);

  double r = r_at;
  for (double stop : stops) {
    double span = stop - r;
    std::size_t n = static_cast<std::size_t>(std::abs(span) / step + 0.5);
    if (n == 0) n = 1;
    double h = span / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
      // RK4 on y = (g, dg).
      double r_mid = r + 0.5 * h;
      double k1g = dg, k1d = -K(r) * g;
      double g2 = g + 0.5 * h * k1g, d2 = dg + 0.5 * h * k1d;
      double k2g = d2, k2d = -K(r_mid) * g2;
      double g3 = g + 0.5 * h * k2g, d3 = dg + 0.5 * h * k2d;
      double k3g = d3, k3d = -K(r_mid) * g3;
      double g4 = g + h * k3g, d4 = dg + h * k3d;
      double k4g = d4, k4d = -K(r + h) * g4;
      double g_new = g + h / 6.0 * (k1g + 2 * k2g + 2 * k3g + k4g);
      double dg_new = dg + h / 6.0 * (k1d + 2 * k2d + 2 * k3d + k4d);
      double r_new = r + h;
      if (g_new <= 0.0) {
        // Linear estimate of the zero crossing for the report.
        double frac = g / std::max(g - g_new, 1e-300);
        double r_zero = r + frac * h;
        std::ostringstream os;
        os << "warp factor degenerates to zero near r = " << r_zero
           << "; metric is not positive there";
        fail(ErrorCode::DegenerateMetric, os.str());
      }
      g = g_new;
      dg = dg_new;
      r = r_new;
      if (push_front_order) {
        col.r.insert(col.r.begin(), r);
        col.g.insert(col.g.begin(), g);
        col.dg.insert(col.dg.begin(), dg);
      } else {
        col.r.push_back(r);
        col.g.push_back(g);
        col.dg.push_back(dg);
      }
    }
    r = stop;
  }
}

} // namespace

SampledColumn jacobi_warp(const std::function<double(double, double)>& curvature,
                          double theta, double r0, double g0, double dg0,
                          double r_from, double r_to, double step) {
  if (!(step > 0)) fail(ErrorCode::DomainViolation, "step must be positive");
  if (!(g0 > 0))
    fail(ErrorCode::DegenerateMetric, "initial warp value must be positive");
  if (r_from > r_to) std::swap(r_from, r_to);
  if (r0 < r_from || r0 > r_to)
    fail(ErrorCode::DomainViolation, "base point r0 outside integration range");
  auto K = [&](double r) { return curvature(r, theta); };
  SampledColumn col;
  col.r.push_back(r0);
  col.g.push_back(g0);
  col.dg.push_back(dg0);
  if (r_to > r0) march_jacobi(K, step, {}, r0, g0, dg0, r_to, col, false);
  if (r_from < r0) march_jacobi(K, step, {}, r0, g0, dg0, r_from, col, true);
  return col;
}

// ---------------------------------------------------------------------------

struct WarpedChart::Impl {
  double r_lo = -kInf, r_hi = kInf, period = 2 * kPi;
  std::vector<double> seams;

  // Analytic backend.
  std::function<double(double, double)> warp_fn;
  std::function<double(double, double)> curv_fn;

  // Sampled backend.
  bool is_sampled = false;
  bool theta_dependent = false;
  // Jacobi marcher state (when built from curvature).
  std::function<double(double, double)> jacobi_curv;
  double jacobi_r0 = 0.0, jacobi_g0 = 1.0, jacobi_dg0 = 0.0, jacobi_step = 1e-3;
  // Custom marcher (revolution charts).
  std::function<void(SampledColumn&, double)> custom_extend;
  std::function<double(double)> curv_of_r;

  mutable std::map<double, SampledColumn> columns;
  mutable std::mutex mu;

  void check_r(double r) const {
    if (r < r_lo - 1e-12 || r > r_hi + 1e-12) {
      std::ostringstream os;
      os << "coordinate r = " << r << " outside chart domain [" << r_lo << ", "
         << r_hi << "]";
      fail(ErrorCode::DomainViolation, os.str());
    }
  }

  // Extends the column so that it covers r (sampled backends only).  Called
  // with mu held.
  void cover_locked(SampledColumn& col, double key_theta, double r) const {
    if (col.r.empty()) {
      if (custom_extend) {
        custom_extend(col, r);
        return;
      }
      col.r.push_back(jacobi_r0);
      col.g.push_back(jacobi_g0);
      col.dg.push_back(jacobi_dg0);
    }
    // Extend in chunks so nearby queries do not re-enter the marcher.
    const double chunk = 1.0;
    if (custom_extend) {
      if (r < col.r.front() || r > col.r.back()) {
        double target = r < col.r.front() ? r - chunk : r + chunk;
        target = std::clamp(target, r_lo == -kInf ? target : r_lo,
                            r_hi == kInf ? target : r_hi);
        custom_extend(col, target);
      }
      return;
    }
    auto K = [&](double rr) { return jacobi_curv(rr, key_theta); };
    if (r > col.r.back()) {
      double target = std::min(r + chunk, r_hi == kInf ? r + chunk : r_hi);
      march_jacobi(K, jacobi_step, seams, col.r.back(), col.g.back(),
                   col.dg.back(), target, col, false);
    }
    if (r < col.r.front()) {
      double target = std::max(r - chunk, r_lo == -kInf ? r - chunk : r_lo);
      march_jacobi(K, jacobi_step, seams, col.r.front(), col.g.front(),
                   col.dg.front(), target, col, true);
    }
  }

  // Sampled evaluation of (G, G') at r for the column of key_theta.
  void eval_sampled(double r, double theta, double& g, double& dg,
                    double* aux_out = nullptr) const {
    double key = theta_dependent ? theta : 0.0;
    std::lock_guard<std::mutex> lock(mu);
    SampledColumn& col = columns[key];
    cover_locked(col, key, r);
    if (col.r.empty())
      fail(ErrorCode::DomainViolation, "sampled chart produced no data");
    // Clamp queries a hair outside the sampled range (open-interval domains).
    if (r <= col.r.front()) {
      g = col.g.front();
      dg = col.dg.front();
      if (aux_out && col.has_aux) *aux_out = col.aux.front();
      return;
    }
    if (r >= col.r.back()) {
      g = col.g.back();
      dg = col.dg.back();
      if (aux_out && col.has_aux) *aux_out = col.aux.back();
      return;
    }
    auto it = std::upper_bound(col.r.begin(), col.r.end(), r);
    std::size_t i1 = static_cast<std::size_t>(it - col.r.begin());
    std::size_t i0 = i1 - 1;
    double r0 = col.r[i0], r1 = col.r[i1];
    g = hermite(r, r0, r1, col.g[i0], col.g[i1], col.dg[i0], col.dg[i1]);
    // G'' = -K G at the nodes gives Hermite data for the derivative channel.
    double ddg0, ddg1;
    if (curv_of_r) {
      ddg0 = -curv_of_r(r0) * col.g[i0];
      ddg1 = -curv_of_r(r1) * col.g[i1];
    } else if (jacobi_curv) {
      ddg0 = -jacobi_curv(r0, key) * col.g[i0];
      ddg1 = -jacobi_curv(r1, key) * col.g[i1];
    } else {
      ddg0 = (col.dg[i1] - col.dg[i0]) / (r1 - r0);
      ddg1 = ddg0;
    }
    dg = hermite(r, r0, r1, col.dg[i0], col.dg[i1], ddg0, ddg1);
    if (aux_out && col.has_aux)
      *aux_out = hermite(r, r0, r1, col.aux[i0], col.aux[i1],
                           0.0, 0.0); // aux interpolated linearly below
  }
};

double WarpedChart::r_lo() const { return impl_->r_lo; }
double WarpedChart::r_hi() const { return impl_->r_hi; }
double WarpedChart::period() const { return impl_->period; }
const std::vector<double>& WarpedChart::seams() const { return impl_->seams; }

bool WarpedChart::contains_r(double r) const {
  return r >= impl_->r_lo - 1e-12 && r <= impl_->r_hi + 1e-12;
}

double WarpedChart::warp(double r, double theta) const {
  impl_->check_r(r);
  if (impl_->warp_fn) return impl_->warp_fn(r, theta);
  double g, dg;
  impl_->eval_sampled(r, theta, g, dg);
  return g;
}

double WarpedChart::warp_dr(double r, double theta) const {
  impl_->check_r(r);
  if (impl_->warp_fn) {
    auto f = [&](double rr) { return impl_->warp_fn(rr, theta); };
    return central_d1(f, r, 1e-6);
  }
  double g, dg;
  impl_->eval_sampled(r, theta, g, dg);
  return dg;
}

double WarpedChart::warp_dth(double r, double theta) const {
  impl_->check_r(r);
  if (impl_->is_sampled && !impl_->theta_dependent) return 0.0;
  auto f = [&](double th) { return warp(r, th); };
  return central_d1(f, theta, 1e-6);
}

double WarpedChart::warp_drr(double r, double theta) const {
  impl_->check_r(r);
  if (impl_->curv_fn) return -impl_->curv_fn(r, theta) * warp(r, theta);
  if (impl_->warp_fn) {
    auto f = [&](double rr) { return impl_->warp_fn(rr, theta); };
    return central_d2(f, r, 1e-4);
  }
  return -curvature(r, theta) * warp(r, theta);
}

double WarpedChart::curvature(double r, double theta) const {
  impl_->check_r(r);
  if (impl_->curv_fn) return impl_->curv_fn(r, theta);
  if (impl_->is_sampled) {
    if (impl_->curv_of_r) return impl_->curv_of_r(r);
    if (impl_->jacobi_curv) return impl_->jacobi_curv(r, theta);
  }
  // K = -G_rr / G by finite differences.
  auto f = [&](double rr) { return impl_->warp_fn(rr, theta); };
  double g = impl_->warp_fn(r, theta);
  return -central_d2(f, r, 1e-4) / g;
}

bool WarpedChart::has_aux() const {
  if (!impl_->is_sampled) return false;
  std::lock_guard<std::mutex> lock(impl_->mu);
  for (auto& kv : impl_->columns)
    if (kv.second.has_aux) return true;
  return false;
}

double WarpedChart::aux(double r) const {
  impl_->check_r(r);
  if (!impl_->is_sampled)
    fail(ErrorCode::DomainViolation, "chart has no auxiliary channel");
  std::lock_guard<std::mutex> lock(impl_->mu);
  SampledColumn& col = impl_->columns[0.0];
  impl_->cover_locked(col, 0.0, r);
  if (!col.has_aux)
    fail(ErrorCode::DomainViolation, "chart has no auxiliary channel");
  if (r <= col.r.front()) return col.aux.front();
  if (r >= col.r.back()) return col.aux.back();
  auto it = std::upper_bound(col.r.begin(), col.r.end(), r);
  std::size_t i1 = static_cast<std::size_t>(it - col.r.begin());
  std::size_t i0 = i1 - 1;
  double t = (r - col.r[i0]) / (col.r[i1] - col.r[i0]);
  return (1 - t) * col.aux[i0] + t * col.aux[i1];
}

void WarpedChart::ensure_window(double lo, double hi) const {
  if (!impl_->is_sampled) return;
  lo = std::max(lo, impl_->r_lo == -kInf ? lo : impl_->r_lo);
  hi = std::min(hi, impl_->r_hi == kInf ? hi : impl_->r_hi);
  std::lock_guard<std::mutex> lock(impl_->mu);
  if (impl_->theta_dependent) {
    for (auto& kv : impl_->columns) {
      impl_->cover_locked(kv.second, kv.first, lo);
      impl_->cover_locked(kv.second, kv.first, hi);
    }
    if (impl_->columns.empty()) {
      SampledColumn& col = impl_->columns[0.0];
      impl_->cover_locked(col, 0.0, lo);
      impl_->cover_locked(col, 0.0, hi);
    }
  } else {
    SampledColumn& col = impl_->columns[0.0];
    impl_->cover_locked(col, 0.0, lo);
    impl_->cover_locked(col, 0.0, hi);
  }
}

std::pair<double, double> WarpedChart::current_window(double fallback) const {
  double lo, hi;
  if (impl_->is_sampled) {
    std::lock_guard<std::mutex> lock(impl_->mu);
    if (impl_->columns.empty() || impl_->columns.begin()->second.r.empty()) {
      lo = -fallback;
      hi = fallback;
    } else {
      const SampledColumn& col = impl_->columns.begin()->second;
      lo = col.r.front();
      hi = col.r.back();
    }
  } else {
    lo = impl_->r_lo == -kInf ? -fallback : impl_->r_lo;
    hi = impl_->r_hi == kInf ? fallback : impl_->r_hi;
  }
  lo = std::max(lo, impl_->r_lo == -kInf ? lo : impl_->r_lo);
  hi = std::min(hi, impl_->r_hi == kInf ? hi : impl_->r_hi);
  return {lo, hi};
}

WarpedChart WarpedChart::analytic(std::function<double(double, double)> warp,
                                  std::function<double(double, double)> curvature,
                                  double r_lo, double r_hi, double period,
                                  std::vector<double> seams) {
  if (!(period > 0)) fail(ErrorCode::DomainViolation, "period must be positive");
  if (!(r_lo < r_hi)) fail(ErrorCode::DomainViolation, "empty r-range");
  WarpedChart c;
  c.impl_ = std::make_shared<Impl>();
  c.impl_->warp_fn = std::move(warp);
  c.impl_->curv_fn = std::move(curvature);
  c.impl_->r_lo = r_lo;
  c.impl_->r_hi = r_hi;
  c.impl_->period = period;
  std::sort(seams.begin(), seams.end());
  c.impl_->seams = std::move(seams);
  return c;
}

WarpedChart WarpedChart::from_curvature(
    std::function<double(double, double)> curvature, bool theta_dependent,
    double r0, double g0, double dg0, double r_lo, double r_hi, double period,
    double step, std::vector<double> seams) {
  if (!(period > 0)) fail(ErrorCode::DomainViolation, "period must be positive");
  if (!(r_lo < r_hi)) fail(ErrorCode::DomainViolation, "empty r-range");
  if (!(g0 > 0))
    fail(ErrorCode::DegenerateMetric, "initial warp value must be positive");
  if (r0 < r_lo || r0 > r_hi)
    fail(ErrorCode::DomainViolation, "base point r0 outside chart domain");
  WarpedChart c;
  c.impl_ = std::make_shared<Impl>();
  c.impl_->is_sampled = true;
  c.impl_->theta_dependent = theta_dependent;
  c.impl_->jacobi_curv = std::move(curvature);
  c.impl_->jacobi_r0 = r0;
  c.impl_->jacobi_g0 = g0;
  c.impl_->jacobi_dg0 = dg0;
  c.impl_->jacobi_step = step;
  c.impl_->r_lo = r_lo;
  c.impl_->r_hi = r_hi;
  c.impl_->period = period;
  std::sort(seams.begin(), seams.end());
  c.impl_->seams = std::move(seams);
  return c;
}

WarpedChart WarpedChart::sampled(std::function<void(SampledColumn&, double)> extend,
                                 std::function<double(double)> curvature_of_r,
                                 double r_lo, double r_hi, double period) {
  if (!(period > 0)) fail(ErrorCode::DomainViolation, "period must be positive");
  WarpedChart c;
  c.impl_ = std::make_shared<Impl>();
  c.impl_->is_sampled = true;
  c.impl_->theta_dependent = false;
  c.impl_->custom_extend = std::move(extend);
  c.impl_->curv_of_r = std::move(curvature_of_r);
  c.impl_->r_lo = r_lo;
  c.impl_->r_hi = r_hi;
  c.impl_->period = period;
  return c;
}

} // namespace geodecomp
