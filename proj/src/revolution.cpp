#include "geodecomp/revolution.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <mutex>
#include <sstream>
#include <vector>

#include "geodecomp/errors.hpp"
#include "geodecomp/numerics.hpp"

namespace geodecomp {

namespace {

// Shared (t, x) table for r = meridian arclength from the base point.
// Extended lazily in both directions; dx/dt = 1/sqrt(1+f'^2) via RK4.
struct ArclenTable {
  RevolutionProfile prof;
  double step;
  std::vector<double> t, x;
  std::mutex mu;

  ArclenTable(const RevolutionProfile& p, double s) : prof(p), step(s) {
    t.push_back(0.0);
    x.push_back(p.base_x());
  }

  double rhs(double xx) const {
    double d1 = prof.radius_d1(xx);
    return 1.0 / std::sqrt(1.0 + d1 * d1);
  }

  void cover(double target) {
    auto advance = [&](bool forward) {
      double tt = forward ? t.back() : t.front();
      double xx = forward ? x.back() : x.front();
      double h = forward ? step : -step;
      std::vector<double> nt, nx;
      while ((forward && tt < target) || (!forward && tt > target)) {
        double k1 = rhs(xx);
        double k2 = rhs(xx + 0.5 * h * k1);
        double k3 = rhs(xx + 0.5 * h * k2);
        double k4 = rhs(xx + h * k3);
        double x_new = xx + h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
        if (x_new < prof.x_lo() || x_new > prof.x_hi()) break;
        tt += h;
        xx = x_new;
        nt.push_back(tt);
        nx.push_back(xx);
      }
      if (forward) {
        t.insert(t.end(), nt.begin(), nt.end());
        x.insert(x.end(), nx.begin(), nx.end());
      } else {
        t.insert(t.begin(), nt.rbegin(), nt.rend());
        x.insert(x.begin(), nx.rbegin(), nx.rend());
      }
    };
    if (target > t.back()) advance(true);
    if (target < t.front()) advance(false);
  }

  double x_at(double tt) {
    std::lock_guard<std::mutex> lock(mu);
    cover(tt);
    auto it = std::upper_bound(t.begin(), t.end(), tt);
    if (it == t.begin()) return x.front();
    if (it == t.end()) return x.back();
    std::size_t i = static_cast<std::size_t>(it - t.begin()) - 1;
    double u = (tt - t[i]) / (t[i + 1] - t[i]);
    return x[i] + u * (x[i + 1] - x[i]);
  }
};

} // namespace

RevolutionProfile::RevolutionProfile(std::function<double(double)> f,
                                     double x_lo, double x_hi)
    : f_(std::move(f)), x_lo_(x_lo), x_hi_(x_hi) {
  if (!(x_lo_ < x_hi_)) fail(ErrorCode::DomainViolation, "empty x-range");
  base_x_ = 0.0;
  if (base_x_ < x_lo_ || base_x_ > x_hi_) {
    if (x_lo_ == -kInf) base_x_ = x_hi_ - 1.0;
    else if (x_hi_ == kInf) base_x_ = x_lo_ + 1.0;
    else base_x_ = 0.5 * (x_lo_ + x_hi_);
  }
  radius(base_x_); // validates positivity at the base point
}

RevolutionProfile RevolutionProfile::from_expr(const Expr& profile, double x_lo,
                                               double x_hi) {
  Expr e = profile;
  return RevolutionProfile(
      [e](double x) {
        ExprEnv env;
        env.x = x;
        return e.eval(env);
      },
      x_lo, x_hi);
}

double RevolutionProfile::radius(double x) const {
  if (x < x_lo_ - 1e-12 || x > x_hi_ + 1e-12) {
    std::ostringstream os;
    os << "x = " << x << " outside profile domain";
    fail(ErrorCode::DomainViolation, os.str());
  }
  double v = f_(x);
  if (!(v > 0.0) || !std::isfinite(v)) {
    std::ostringstream os;
    os << "profile radius must be positive and finite; got f(" << x
       << ") = " << v;
    fail(ErrorCode::InvalidProfile, os.str());
  }
  return v;
}

double RevolutionProfile::radius_d1(double x) const {
  return central_d1(f_, x, 1e-6);
}

double RevolutionProfile::radius_d2(double x) const {
  return central_d2(f_, x, 1e-4);
}

double RevolutionProfile::curvature(double x) const {
  // K = -f'' / (f (1 + f'^2)^2), the arclength form of -G''/G.
  double f = radius(x);
  double d1 = radius_d1(x);
  double d2 = radius_d2(x);
  double w = 1.0 + d1 * d1;
  return -d2 / (f * w * w);
}

WarpedChart RevolutionProfile::to_chart(double step) const {
  auto table = std::make_shared<ArclenTable>(*this, step);
  RevolutionProfile self = *this;

  // Samples carry (t, G = f(x), dG/dt = f'/sqrt(1+f'^2), aux = x).
  auto extend = [table, self](SampledColumn& col, double target) {
    if (col.r.empty()) {
      col.has_aux = true;
      col.r.push_back(0.0);
      col.g.push_back(self.radius(self.base_x()));
      double d1 = self.radius_d1(self.base_x());
      col.dg.push_back(d1 / std::sqrt(1.0 + d1 * d1));
      col.aux.push_back(self.base_x());
    }
    std::lock_guard<std::mutex> lock(table->mu);
    table->cover(target);
    auto emit = [&](std::size_t i, bool front) {
      double xx = table->x[i];
      double g = self.radius(xx);
      double d1 = self.radius_d1(xx);
      double dg = d1 / std::sqrt(1.0 + d1 * d1);
      if (front) {
        col.r.insert(col.r.begin(), table->t[i]);
        col.g.insert(col.g.begin(), g);
        col.dg.insert(col.dg.begin(), dg);
        col.aux.insert(col.aux.begin(), xx);
      } else {
        col.r.push_back(table->t[i]);
        col.g.push_back(g);
        col.dg.push_back(dg);
        col.aux.push_back(xx);
      }
    };
    // Append table rows past the column's current back.
    auto hi = std::upper_bound(table->t.begin(), table->t.end(), col.r.back());
    for (auto it = hi; it != table->t.end(); ++it) {
      if (*it > target + table->step) break;
      emit(static_cast<std::size_t>(it - table->t.begin()), false);
    }
    // Prepend rows before the current front.
    auto lo = std::lower_bound(table->t.begin(), table->t.end(), col.r.front());
    if (lo != table->t.begin()) {
      std::vector<std::size_t> pre;
      for (auto it = table->t.begin(); it != lo; ++it) {
        if (*it < target - table->step) continue;
        pre.push_back(static_cast<std::size_t>(it - table->t.begin()));
      }
      for (auto pit = pre.rbegin(); pit != pre.rend(); ++pit) emit(*pit, true);
    }
  };

  // Chart r-domain: arclength images of the x-bounds (infinite bounds stay
  // infinite because the integrand is bounded below by 0 < c only when f' is
  // bounded; for the profiles accepted here arclength diverges with x).
  auto arclen = [&](double a, double b) {
    auto integrand = [&](double x) {
      double d1 = radius_d1(x);
      return std::sqrt(1.0 + d1 * d1);
    };
    std::size_t n = std::max<std::size_t>(
        64, static_cast<std::size_t>(std::abs(b - a) / step));
    if (n > 2000000) n = 2000000;
    return simpson(integrand, a, b, n);
  };
  double t_lo = x_lo_ == -kInf ? -kInf : -arclen(x_lo_, base_x_);
  double t_hi = x_hi_ == kInf ? kInf : arclen(base_x_, x_hi_);

  auto curv = [table, self](double r) {
    return self.curvature(table->x_at(r));
  };
  return WarpedChart::sampled(extend, curv, t_lo, t_hi, 2 * kPi);
}

} // namespace geodecomp
