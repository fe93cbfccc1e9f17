#include <doctest.h>

#include <cmath>
#include <random>

#include "geodecomp/comparison.hpp"
#include "geodecomp/errors.hpp"
#include "geodecomp/numerics.hpp"
#include "support.hpp"

using namespace geodecomp;

TEST_CASE("linear growth solution oracles") {
  CHECK(linear_growth_solution(1.0, 0.0, 1.0, 0.0, 1.0) ==
        doctest::Approx(1.5430806).epsilon(1e-6));
  CHECK(linear_growth_solution(1.0, 0.0, 2.0, 1.0, 1.0) ==
        doctest::Approx(4.2613625).epsilon(1e-6));
  CHECK(linear_growth_solution(2.0, 3.0, 5.0, 0.0, 3.0) == doctest::Approx(5.0));
}

TEST_CASE("cosh lower bound oracles") {
  CHECK(cosh_lower_bound(1.0, 0.0, 1.0, 0.0) == doctest::Approx(1.0));
  CHECK(cosh_lower_bound(1.0, 0.0, 2.0, 1.0) ==
        doctest::Approx(3.0861613).epsilon(1e-6));
  CHECK(cosh_lower_bound(0.5, 1.0, 4.0, 3.0) ==
        doctest::Approx(6.1723226).epsilon(1e-6));
  CHECK_THROWS_AS(cosh_lower_bound(1.0, 0.0, 1.0, -1.0), Error);
}

namespace {

GrowthWitness exact_witness(double c, double t0, double y0, double dy0,
                            int n = 200) {
  GrowthWitness w;
  w.c = c;
  w.t0 = t0;
  for (int i = 0; i <= n; ++i) {
    double t = t0 + 5.0 * i / n;
    double u = c * (t - t0);
    w.t.push_back(t);
    w.y.push_back(y0 * std::cosh(u) + dy0 / c * std::sinh(u));
    w.dy.push_back(c * y0 * std::sinh(u) + dy0 * std::cosh(u));
    w.ddy.push_back(c * c * w.y.back());
  }
  return w;
}

} // namespace

TEST_CASE("equality case: witness built from the closed form") {
  GrowthWitness w = exact_witness(1.3, 0.7, 1.1, 0.4);
  ComparisonReport rep = verify_comparison(w);
  CHECK(rep.holds);
  CHECK(std::abs(rep.worst_margin) <= 1e-9);
}

TEST_CASE("strictly stronger growth gives positive margin") {
  // y'' = 2 c^2 y integrated exactly is the c' = sqrt(2) c closed form.
  double c = 1.0, root2c = std::sqrt(2.0);
  GrowthWitness w = exact_witness(root2c, 0.0, 1.0, 0.5);
  w.c = c; // verify against the weaker constant
  ComparisonReport rep = verify_comparison(w);
  CHECK(rep.holds);
  CHECK(rep.worst_margin >= -1e-9);
  // Margin strictly positive past t0.
  double final_comp = linear_growth_solution(c, w.t.front(), w.y.front(),
                                             w.dy.front(), w.t.back());
  CHECK(w.y.back() > final_comp + 1.0);
}

TEST_CASE("witness from the K = -1 warp ODE satisfies the bound") {
  // y = cosh r sampled where y' > 0, c = 1.
  GrowthWitness w;
  w.c = 1.0;
  w.t0 = 0.5;
  for (int i = 0; i <= 100; ++i) {
    double t = 0.5 + 4.5 * i / 100;
    w.t.push_back(t);
    w.y.push_back(std::cosh(t));
    w.dy.push_back(std::sinh(t));
    w.ddy.push_back(std::cosh(t));
  }
  ComparisonReport rep = verify_comparison(w);
  CHECK(rep.holds);
  CHECK(std::abs(rep.worst_margin) <= 1e-9); // addition formula: equality
}

TEST_CASE("bad witnesses are rejected, not failed") {
  GrowthWitness w = exact_witness(1.0, 0.0, 1.0, 0.0);
  w.ddy[50] = 0.5 * w.y[50]; // breaks y'' >= c^2 y
  CHECK_THROWS_AS(verify_comparison(w), Error);
  try {
    verify_comparison(w);
  } catch (const Error& err) {
    CHECK(err.code() == ErrorCode::RejectedWitness);
  }
}

TEST_CASE("capped comparator slope weakens the bound monotonically") {
  GrowthWitness w = exact_witness(1.0, 0.0, 1.0, 1.0);
  ComparisonReport full = verify_comparison(w);
  ComparisonReport capped = verify_comparison(w, 0.2);
  CHECK(full.holds);
  CHECK(capped.holds);
  CHECK(capped.worst_margin >= full.worst_margin);
}

TEST_CASE("100 random piecewise-constant growth instances all hold") {
  std::mt19937 rng(20240817);
  for (int i = 0; i < 100; ++i) {
    GrowthWitness w = geodecomp_testing::random_growth_witness(rng);
    ComparisonReport rep = verify_comparison(w, 1e300, 1e-6);
    CHECK(rep.holds);
    CHECK(rep.worst_margin >= -1e-6);
  }
}

TEST_CASE("monotone dependence on c in the lower bound") {
  // For y'' >= c^2 y with the larger c, the smaller-c bound is still valid
  // and weaker.
  double strong = cosh_lower_bound(2.0, 0.0, 1.5, 2.0);
  double weak = cosh_lower_bound(0.7, 0.0, 1.5, 2.0);
  CHECK(weak <= strong);
}
