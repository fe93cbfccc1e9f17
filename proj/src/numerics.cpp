#include "geodecomp/numerics.hpp"

#include <cmath>
#include <cstdlib>

namespace geodecomp {

double simpson(const std::function<double(double)>& f, double a, double b,
               std::size_t n) {
  if (n == 0) n = 2;
  if (n % 2 != 0) ++n;
  double h = (b - a) / static_cast<double>(n);
  double acc = f(a) + f(b);
  for (std::size_t i = 1; i < n; ++i) {
    double x = a + h * static_cast<double>(i);
    acc += (i % 2 == 1 ? 4.0 : 2.0) * f(x);
  }
  return acc * h / 3.0;
}

double simpson_periodic(const std::function<double(double)>& f, double l,
                        std::size_t n) {
  return simpson(f, 0.0, l, n);
}

bool cyclic_tridiagonal_solve(std::vector<double> lo, std::vector<double> d,
                              std::vector<double> u, std::vector<double> b,
                              std::vector<double>& x) {
  const std::size_t n = d.size();
  if (n == 0 || lo.size() != n || u.size() != n || b.size() != n) return false;
  if (n == 1) {
    double dd = d[0] + lo[0] + u[0];
    if (dd == 0.0) return false;
    x.assign(1, b[0] / dd);
    return true;
  }
  if (n == 2) {
    // Dense 2x2: wrap terms fold onto the off-diagonals.
    double a00 = d[0], a01 = u[0] + lo[0];
    double a10 = u[1] + lo[1], a11 = d[1];
    double det = a00 * a11 - a01 * a10;
    if (det == 0.0) return false;
    x.assign(2, 0.0);
    x[0] = (b[0] * a11 - a01 * b[1]) / det;
    x[1] = (a00 * b[1] - b[0] * a10) / det;
    return true;
  }

  // Condense the wrap entries lo[0] (row 0, col n-1) and u[n-1] (row n-1,
  // col 0) into a rank-one update A = T + alpha * e_0 v^T-style correction.
  double alpha = -d[0];
  std::vector<double> dd = d;
  dd[0] -= alpha;
  dd[n - 1] -= lo[0] * u[n - 1] / alpha;

  auto thomas = [&](std::vector<double> rhs, std::vector<double>& out) -> bool {
    std::vector<double> c(n, 0.0);
    out.assign(n, 0.0);
    double piv = dd[0];
    if (piv == 0.0) return false;
    c[0] = u[0] / piv;
    out[0] = rhs[0] / piv;
    for (std::size_t i = 1; i < n; ++i) {
      piv = dd[i] - lo[i] * c[i - 1];
      if (piv == 0.0) return false;
      if (i + 1 < n) c[i] = u[i] / piv;
      out[i] = (rhs[i] - lo[i] * out[i - 1]) / piv;
    }
    for (std::size_t i = n - 1; i-- > 0;) out[i] -= c[i] * out[i + 1];
    return true;
  };

  std::vector<double> z1, z2, rhs2(n, 0.0);
  rhs2[0] = alpha;
  rhs2[n - 1] = u[n - 1];
  if (!thomas(b, z1)) return false;
  if (!thomas(rhs2, z2)) return false;

  double denom = 1.0 + z2[0] + (lo[0] / alpha) * z2[n - 1];
  if (denom == 0.0) return false;
  double factor = (z1[0] + (lo[0] / alpha) * z1[n - 1]) / denom;
  x.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) x[i] = z1[i] - factor * z2[i];
  return true;
}

double central_d1(const std::function<double(double)>& f, double x, double h) {
  double scale = std::max(1.0, std::abs(x));
  double hh = h * scale;
  return (f(x + hh) - f(x - hh)) / (2.0 * hh);
}

double central_d2(const std::function<double(double)>& f, double x, double h) {
  double scale = std::max(1.0, std::abs(x));
  double hh = h * scale;
  return (f(x + hh) - 2.0 * f(x) + f(x - hh)) / (hh * hh);
}

double geometric_tail_limit(const std::vector<double>& trace) {
  const std::size_t n = trace.size();
  if (n == 0) return 0.0;
  if (n < 4) return trace.back();
  std::size_t take = std::min<std::size_t>(10, n);
  std::size_t start = n - take;

  // Differences of consecutive values; a geometric tail has a stable ratio.
  std::vector<double> diff;
  for (std::size_t i = start; i + 1 < n; ++i) diff.push_back(trace[i + 1] - trace[i]);
  double last = trace.back();
  double dlast = diff.back();
  if (std::abs(dlast) < 1e-15 * std::max(1.0, std::abs(last))) return last;

  double rho_sum = 0.0;
  std::size_t rho_count = 0;
  for (std::size_t i = 0; i + 1 < diff.size(); ++i) {
    if (std::abs(diff[i]) < 1e-300) continue;
    double r = diff[i + 1] / diff[i];
    if (r > 0.0 && r < 1.0) {
      rho_sum += r;
      ++rho_count;
    }
  }
  if (rho_count == 0) return last;
  double rho = rho_sum / static_cast<double>(rho_count);
  if (!(rho > 0.0 && rho < 0.999)) return last;
  // Remaining tail of the geometric series.
  return last + dlast * rho / (1.0 - rho);
}

} // namespace geodecomp
