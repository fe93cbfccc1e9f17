#include "geodecomp/shortening.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "geodecomp/collar.hpp"
#include "geodecomp/errors.hpp"
#include "geodecomp/numerics.hpp"

namespace geodecomp {

const char* to_string(OutcomeTag tag) {
  switch (tag) {
    case OutcomeTag::Minimizing: return "minimizing";
    case OutcomeTag::Escapes: return "escapes";
    case OutcomeTag::Trivial: return "trivial";
    case OutcomeTag::Inconclusive: return "inconclusive";
  }
  return "?";
}

namespace {

double wrap_theta(double th, double period) {
  double w = std::fmod(th, period);
  if (w < 0.0) w += period;
  return w;
}

// Discrete curve state for the Newton iteration: node radii over a uniform
// angular grid spanning |winding| periods.
struct Discrete {
  double h = 0.0;                // angular spacing
  double period = 0.0;
  std::vector<double> thmid;     // wrapped segment-midpoint angles
  std::vector<double> r;

  std::size_t n() const { return r.size(); }
};

Discrete make_discrete(const WarpedChart& chart, const GraphCurve& curve) {
  Discrete d;
  d.period = chart.period();
  double span = curve.span(chart.period());
  std::size_t n = curve.nodes();
  d.h = span / static_cast<double>(n);
  d.r = curve.r;
  d.thmid.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    d.thmid[i] = wrap_theta((static_cast<double>(i) + 0.5) * d.h, d.period);
  return d;
}

// Midpoint-rule length: sum over segments of sqrt(dr^2 + (G h)^2).
double energy(const WarpedChart& chart, const Discrete& d,
              const std::vector<double>& r) {
  std::size_t n = r.size();
  double e = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t j = (i + 1) % n;
    double u = r[j] - r[i];
    double g = chart.warp(0.5 * (r[i] + r[j]), d.thmid[i]);
    e += std::sqrt(u * u + g * g * d.h * d.h);
  }
  return e;
}

struct Assembly {
  double e = 0.0;
  std::vector<double> grad, diag, off; // off[i] couples nodes i and i+1
};

// Energy with exact gradient and cyclic-tridiagonal Hessian.  Segment i
// depends on r_i, r_{i+1} through u = r_{i+1} - r_i and the midpoint
// m = (r_i + r_{i+1})/2 (dm/dr = 1/2 on both sides).
void assemble(const WarpedChart& chart, const Discrete& d,
              const std::vector<double>& r, Assembly& a) {
  std::size_t n = r.size();
  a.e = 0.0;
  a.grad.assign(n, 0.0);
  a.diag.assign(n, 0.0);
  a.off.assign(n, 0.0);
  const double h2 = d.h * d.h;
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t j = (i + 1) % n;
    double u = r[j] - r[i];
    double m = 0.5 * (r[i] + r[j]);
    double g = chart.warp(m, d.thmid[i]);
    double gr = chart.warp_dr(m, d.thmid[i]);
    double grr = chart.warp_drr(m, d.thmid[i]);
    double L = std::sqrt(u * u + g * g * h2);
    a.e += L;
    double w = 0.5 * h2 * g * gr; // d(L^2)/2 per unit midpoint move
    double pi_ = (-u + w) / L;    // dL/dr_i
    double pj = (u + w) / L;      // dL/dr_j
    a.grad[i] += pi_;
    a.grad[j] += pj;
    double q = 0.25 * h2 * (gr * gr + g * grr);
    a.diag[i] += (1.0 + q) / L - pi_ * pi_ / L;
    a.diag[j] += (1.0 + q) / L - pj * pj / L;
    a.off[i] += (-1.0 + q) / L - pi_ * pj / L;
  }
}

struct Window {
  double lo = 0.0, hi = 0.0;
  bool lo_artificial = false; // window edge strictly inside the domain
  bool hi_artificial = false;
};

Window make_window(const WarpedChart& chart, double lo, double hi) {
  Window w;
  w.lo = std::max(lo, chart.r_lo());
  w.hi = std::min(hi, chart.r_hi());
  w.lo_artificial = w.lo > chart.r_lo();
  w.hi_artificial = w.hi < chart.r_hi();
  return w;
}

// One damped (Levenberg) Newton step projected into the window.  Returns
// true if a strictly shorter iterate was accepted.
bool newton_step(const WarpedChart& chart, const Discrete& d,
                 std::vector<double>& r, const Window& win, double& e_io) {
  std::size_t n = r.size();
  Assembly a;
  assemble(chart, d, r, a);
  e_io = a.e;

  double max_diag = 0.0;
  for (double v : a.diag) max_diag = std::max(max_diag, std::abs(v));
  double lambda = 0.0;
  double lambda0 = std::max(1e-12, 1e-8 * max_diag);
  double cap = std::max(1.0, 0.25 * (win.hi - win.lo));

  for (int trial = 0; trial < 14; ++trial) {
    std::vector<double> diag = a.diag, rhs(n), delta;
    for (std::size_t i = 0; i < n; ++i) {
      diag[i] += lambda;
      rhs[i] = -a.grad[i];
    }
    std::vector<double> lo_band(n), up_band(n);
    for (std::size_t i = 0; i < n; ++i) {
      up_band[i] = a.off[i];
      lo_band[i] = a.off[(i + n - 1) % n];
    }
    bool ok = cyclic_tridiagonal_solve(lo_band, diag, up_band, rhs, delta);
    if (ok) {
      double dmax = 0.0;
      for (double v : delta) dmax = std::max(dmax, std::abs(v));
      if (dmax > cap) {
        double s = cap / dmax;
        for (double& v : delta) v *= s;
      }
      std::vector<double> trial_r(n);
      double directional = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        trial_r[i] = std::clamp(r[i] + delta[i], win.lo, win.hi);
        directional += a.grad[i] * (trial_r[i] - r[i]);
      }
      double e_new = energy(chart, d, trial_r);
      if (e_new <= a.e - 1e-4 * std::abs(directional) && e_new < a.e) {
        r = std::move(trial_r);
        e_io = e_new;
        return true;
      }
    }
    lambda = lambda == 0.0 ? lambda0 : lambda * 10.0;
  }
  return false;
}

double sup_move(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

} // namespace

double geodesic_residual(const WarpedChart& chart, const GraphCurve& curve) {
  std::size_t n = curve.nodes();
  double span = curve.span(chart.period());
  double h = span / static_cast<double>(n);
  double worst = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t km = (k + n - 1) % n;
    std::size_t kp = (k + 1) % n;
    double d_in = curve.r[k] - curve.r[km];
    double d_out = curve.r[kp] - curve.r[k];
    double th = wrap_theta(static_cast<double>(k) * h, chart.period());
    double g = chart.warp(curve.r[k], th);
    double dot = d_in * d_out + g * g * h * h;
    double n1 = std::sqrt(d_in * d_in + g * g * h * h);
    double n2 = std::sqrt(d_out * d_out + g * g * h * h);
    double c = std::clamp(dot / (n1 * n2), -1.0, 1.0);
    worst = std::max(worst, std::acos(c));
  }
  return worst;
}

GraphCurve shorten_step(const WarpedChart& chart, const GraphCurve& curve) {
  Discrete d = make_discrete(chart, curve);
  Window win = make_window(chart, -kInf, kInf);
  chart.ensure_window(
      *std::min_element(d.r.begin(), d.r.end()) - 1.0,
      *std::max_element(d.r.begin(), d.r.end()) + 1.0);
  double e = 0.0;
  std::vector<double> r = d.r;
  newton_step(chart, d, r, win, e);
  GraphCurve out = curve;
  out.r = r;
  return out;
}

bool is_trivial(const WarpedChart&, const GraphCurve& curve) {
  // Validity requires winding != 0 and winding classes are essential on any
  // chart cylinder.
  if (curve.winding == 0)
    fail(ErrorCode::InvalidCurve, "graph curve must wind at least once");
  return false;
}

MinimizationOutcome minimize_from(const WarpedChart& chart,
                                  const GraphCurve& seed,
                                  const ShortenOptions& opts) {
  if (seed.winding == 0)
    fail(ErrorCode::InvalidCurve, "winding 0 has no essential class");
  Discrete d = make_discrete(chart, seed);

  double smin = *std::min_element(d.r.begin(), d.r.end());
  double smax = *std::max_element(d.r.begin(), d.r.end());
  Window win = make_window(chart, smin - opts.initial_half_width,
                           smax + opts.initial_half_width);

  double eps_trivial =
      opts.eps_trivial > 0.0 ? opts.eps_trivial : 1e-6 * chart.period();

  MinimizationOutcome out;
  out.curve = seed;

  struct Doubling {
    int dir;
    double cmin, cmax;
  };
  std::vector<Doubling> doublings;
  int consecutive = 0;
  int last_dir = 0;

  std::vector<double> prev_r = d.r;
  double e = energy(chart, d, d.r);
  int quiet = 0;      // consecutive iterations with tiny relative decrease
  int rejected = 0;   // consecutive rejected steps in this window epoch
  bool perturbed = false;

  auto record = [&](int iter) {
    TraceRow row;
    row.iter = iter;
    row.length = e;
    row.min_r = *std::min_element(d.r.begin(), d.r.end());
    row.max_r = *std::max_element(d.r.begin(), d.r.end());
    out.trace.push_back(row);
  };
  record(0);

  auto finish_minimizing = [&]() {
    out.tag = OutcomeTag::Minimizing;
    out.curve.r = d.r;
    out.length = curve_length(chart, out.curve);
    out.geodesic_residual = geodesic_residual(chart, out.curve);
  };
  auto finish_escapes = [&](int dir) {
    out.tag = OutcomeTag::Escapes;
    out.end_side = dir;
    out.curve.r = d.r;
    // Circle length toward the end from three samples deep in the explored
    // window.  One Aitken step resolves l(r) = L + C q^r exactly, so pure
    // exponential decay extrapolates to its true limit; iteration noise
    // never enters because the samples live in r, not in iteration index.
    const double far = dir > 0 ? win.hi : win.lo;
    const double back = (win.hi - win.lo) / 8.0;
    const double l1 = collar_circle_length(chart, far - 2.0 * dir * back);
    const double l2 = collar_circle_length(chart, far - dir * back);
    const double l3 = collar_circle_length(chart, far);
    const double d32 = l3 - l2, d21 = l2 - l1;
    double inf = l3;
    const double denom = d32 - d21;
    if (std::abs(denom) > 1e-14 * std::max(1.0, std::abs(l3)))
      inf = l3 - d32 * d32 / denom;
    inf = std::max(0.0, inf);
    out.inf_length = inf < eps_trivial ? 0.0 : inf;
  };

  int iter = 0;
  for (iter = 1; iter <= opts.max_iterations; ++iter) {
    prev_r = d.r;
    bool accepted = newton_step(chart, d, d.r, win, e);
    record(iter);
    out.iterations = iter;

    double scale = 1.0 + std::max(std::abs(win.lo), std::abs(win.hi));
    double edge_eps = 1e-9 * scale;
    bool touch_lo = false, touch_hi = false;
    for (double v : d.r) {
      if (win.lo_artificial && v <= win.lo + edge_eps) touch_lo = true;
      if (win.hi_artificial && v >= win.hi - edge_eps) touch_hi = true;
    }

    if (touch_lo || touch_hi) {
      double width = win.hi - win.lo;
      int dir = touch_lo == touch_hi ? 0 : (touch_hi ? 1 : -1);
      if (touch_lo) win = make_window(chart, win.lo - width, win.hi);
      if (touch_hi) win = make_window(chart, win.lo, win.hi + width);
      quiet = 0;
      rejected = 0;
      perturbed = false;

      Doubling ev;
      ev.dir = dir;
      ev.cmin = out.trace.back().min_r;
      ev.cmax = out.trace.back().max_r;
      if (dir != 0 && dir == last_dir)
        ++consecutive;
      else
        consecutive = dir != 0 ? 1 : 0;
      last_dir = dir;

      bool monotone = true;
      if (!doublings.empty() && dir != 0 && doublings.back().dir == dir) {
        double slack = 1e-9 * scale;
        if (dir > 0)
          monotone = ev.cmin >= doublings.back().cmin - slack &&
                     ev.cmax >= doublings.back().cmax - slack;
        else
          monotone = ev.cmin <= doublings.back().cmin + slack &&
                     ev.cmax <= doublings.back().cmax + slack;
      }
      if (!monotone) consecutive = 1;
      doublings.push_back(ev);

      if (consecutive >= opts.escape_doublings) {
        finish_escapes(last_dir);
        break;
      }
      if (win.hi - win.lo > opts.max_window_width) {
        out.tag = OutcomeTag::Inconclusive;
        out.note = "window exceeded its width budget while still expanding";
        out.curve.r = d.r;
        break;
      }
      continue;
    }

    if (!accepted) {
      ++rejected;
      if (rejected == 1 && !perturbed) {
        // Break symmetric stationary points (a geodesic that is a local
        // maximum of circle length) with a deterministic wiggle; a true
        // minimizer re-flattens and the next rejection ends the run.
        perturbed = true;
        double amp = 1e-7 * scale;
        for (std::size_t i = 0; i < d.r.size(); ++i) {
          double bump = amp * (i % 2 == 0 ? 1.0 : -1.0) + 0.5 * amp;
          d.r[i] = std::clamp(d.r[i] + bump, win.lo, win.hi);
        }
        e = energy(chart, d, d.r);
        continue;
      }
      finish_minimizing();
      break;
    }
    rejected = 0;

    double prev_e = out.trace[out.trace.size() - 2].length;
    double rel = std::abs(prev_e - e) / std::max(1e-300, std::abs(e));
    double move = sup_move(prev_r, d.r);
    if (rel < opts.eps_conv && move < 1e-7 * scale)
      ++quiet;
    else
      quiet = 0;
    if (quiet >= opts.conv_steps) {
      finish_minimizing();
      break;
    }
    // No Trivial branch here: winding classes are essential on a chart
    // cylinder, so collapsing length means escape toward a thin end and is
    // certified by the doubling logic (which snaps tiny infima to 0).
  }

  if (out.tag == OutcomeTag::Inconclusive && out.note.empty()) {
    out.note = "iteration budget exhausted without convergence or sustained "
               "escape";
    out.curve.r = d.r;
  }
  out.window_lo = win.lo;
  out.window_hi = win.hi;
  return out;
}

MinimizationOutcome minimize_in_class(const WarpedChart& chart, int winding,
                                      const ShortenOptions& opts) {
  if (winding == 0)
    fail(ErrorCode::InvalidCurve, "winding 0 has no essential class");
  double s0 = opts.seed_r;
  if (std::isnan(s0)) s0 = 0.0;
  s0 = std::clamp(s0, chart.r_lo(), chart.r_hi());
  Window win =
      make_window(chart, s0 - opts.initial_half_width,
                  s0 + opts.initial_half_width);
  double center = 0.5 * (win.lo + win.hi);
  GraphCurve seed = constant_circle(center, winding, opts.nodes);
  ShortenOptions local = opts;
  local.seed_r = center;
  return minimize_from(chart, seed, local);
}

UniquenessReport unique_geodesic_check(const WarpedChart& chart, int winding,
                                       int restarts, unsigned seed,
                                       double eps_same,
                                       const ShortenOptions& opts) {
  UniquenessReport rep;
  rep.seed = seed;
  std::mt19937 rng(seed);

  double s0 = std::isnan(opts.seed_r) ? 0.0 : opts.seed_r;
  s0 = std::clamp(s0, chart.r_lo(), chart.r_hi());
  Window win = make_window(chart, s0 - opts.initial_half_width,
                           s0 + opts.initial_half_width);
  std::uniform_real_distribution<double> ur(win.lo, win.hi);

  std::vector<GraphCurve> limits;
  for (int k = 0; k < restarts; ++k) {
    GraphCurve start = constant_circle(ur(rng), winding, opts.nodes);
    MinimizationOutcome run = minimize_from(chart, start, opts);
    if (run.tag == OutcomeTag::Minimizing) limits.push_back(run.curve);
    if (run.tag == OutcomeTag::Inconclusive) ++rep.inconclusive_runs;
    rep.runs.push_back(std::move(run));
  }

  // Greedy clustering at sup-distance eps_same.
  std::vector<GraphCurve> reps;
  for (const GraphCurve& c : limits) {
    bool found = false;
    for (const GraphCurve& r : reps) {
      if (graph_sup_distance(c, r) <= eps_same) {
        found = true;
        break;
      }
    }
    if (!found) reps.push_back(c);
  }
  rep.distinct_limits = static_cast<int>(reps.size());
  double far = 0.0;
  for (std::size_t i = 0; i < limits.size(); ++i)
    for (std::size_t j = i + 1; j < limits.size(); ++j)
      far = std::max(far, graph_sup_distance(limits[i], limits[j]));
  rep.max_pairwise_distance = far;
  return rep;
}

} // namespace geodecomp
