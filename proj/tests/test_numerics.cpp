#include <doctest.h>

#include <array>
#include <cmath>
#include <vector>

#include "geodecomp/numerics.hpp"

using namespace geodecomp;

TEST_CASE("simpson integrates smooth functions to high order") {
  auto f = [](double x) { return std::sin(x); };
  CHECK(simpson(f, 0.0, kPi, 64) == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(simpson(f, 0.0, kPi, 1024) == doctest::Approx(2.0).epsilon(1e-10));

  auto g = [](double x) { return x * x * x; };
  CHECK(simpson(g, 0.0, 1.0, 2) == doctest::Approx(0.25).epsilon(1e-14));
}

TEST_CASE("simpson_periodic matches a full-period integral") {
  auto f = [](double th) { return 2.0 + std::cos(th); };
  double got = simpson_periodic(f, 2.0 * kPi, 256);
  CHECK(got == doctest::Approx(4.0 * kPi).epsilon(1e-12));
}

TEST_CASE("rk4 reproduces cosh for y'' = y") {
  // State (y, y'); exact solution cosh t from (1, 0).
  std::array<double, 2> y = {1.0, 0.0};
  rk4_integrate<2>(
      [](double, const std::array<double, 2>& in, std::array<double, 2>& out) {
        out[0] = in[1];
        out[1] = in[0];
      },
      0.0, 5.0, 1e-3, y);
  CHECK(std::abs(y[0] - std::cosh(5.0)) < 1e-9);
  CHECK(std::abs(y[1] - std::sinh(5.0)) < 1e-9);
}

TEST_CASE("cyclic tridiagonal solver inverts a wrap-around system") {
  // 4x4 system with diagonal 4, off-diagonals 1 (cyclic).
  std::vector<double> lo(4, 1.0), d(4, 4.0), up(4, 1.0);
  std::vector<double> b = {1.0, 2.0, 3.0, 4.0}, x;
  cyclic_tridiagonal_solve(lo, d, up, b, x);
  // Verify A x = b directly.
  for (int i = 0; i < 4; ++i) {
    int im = (i + 3) % 4, ip = (i + 1) % 4;
    double r = lo[i] * x[im] + d[i] * x[i] + up[i] * x[ip];
    CHECK(r == doctest::Approx(b[i]).epsilon(1e-12));
  }
}

TEST_CASE("central differences hit quadratic order") {
  auto f = [](double x) { return std::exp(x); };
  CHECK(std::abs(central_d1(f, 1.0, 1e-6) - std::exp(1.0)) < 1e-8);
  CHECK(std::abs(central_d2(f, 1.0, 1e-4) - std::exp(1.0)) < 1e-6);
}

TEST_CASE("geometric tail limit extrapolates a geometric decay") {
  // a_k = 5 + 3 * 0.5^k converges to 5.
  std::vector<double> trace;
  for (int k = 0; k < 20; ++k) trace.push_back(5.0 + 3.0 * std::pow(0.5, k));
  CHECK(geometric_tail_limit(trace) == doctest::Approx(5.0).epsilon(1e-9));
}
