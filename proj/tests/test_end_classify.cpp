#include <cmath>
#include <cstring>

#include "doctest.h"
#include "geodecomp/end_classify.hpp"
#include "geodecomp/errors.hpp"
#include "geodecomp/numerics.hpp"
#include "geodecomp/revolution.hpp"

using namespace geodecomp;

namespace {

WarpedChart funnel_end() {
  // Funnel normal form: seam circle at the finite boundary r = 0.
  return WarpedChart::analytic([](double r, double) { return std::cosh(r); },
                               [](double, double) { return -1.0; }, 0.0, kInf,
                               2.0 * kPi);
}

WarpedChart cusp_end() {
  return WarpedChart::analytic([](double r, double) { return std::exp(-r); },
                               [](double, double) { return -1.0; }, 0.0, kInf,
                               2.0 * kPi);
}

} // namespace

TEST_CASE("funnel end: bounded by its minimizing seam circle") {
  auto cls = classify_end(funnel_end());
  REQUIRE(cls.tag == EndTag::Funnel);
  CHECK(std::strcmp(to_string(cls.tag), "Funnel") == 0);
  CHECK(cls.seam_length == doctest::Approx(2.0 * kPi).epsilon(1e-6));
  CHECK(cls.outcome.tag == OutcomeTag::Minimizing);
  CHECK(cls.profile.size() > 0);
  CHECK(cls.sampled_c == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("cusp end: puncture with infimum exactly zero") {
  auto cls = classify_end(cusp_end());
  REQUIRE(cls.tag == EndTag::Puncture);
  CHECK(cls.inf_length == 0.0);
  CHECK(cls.outcome.end_side == +1);
  CHECK(cls.sampled_c == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(puncture_consistency(cls, 1.0));
}

TEST_CASE("flaring planar end: generalized puncture, flagged under a bound") {
  RevolutionProfile profile([](double x) { return 1.0 + std::exp(x); }, -kInf,
                            2.0);
  auto cls = classify_end(profile.to_chart());
  REQUIRE(cls.tag == EndTag::GeneralizedPuncture);
  CHECK(std::abs(cls.inf_length - 2.0 * kPi) < 1e-3);
  CHECK(cls.outcome.end_side == -1);

  // No uniform curvature bound exists on this end (K -> 0), so with no
  // certificate the classification is consistent; a claimed c > 0 is the
  // contradiction the audit exists to catch.
  CHECK(puncture_consistency(cls, 0.0));
  CHECK_FALSE(puncture_consistency(cls, 1.0));
}

TEST_CASE("charts that do not isolate one end are rejected") {
  auto compact = WarpedChart::analytic(
      [](double r, double) { return 2.0 + std::sin(r); }, nullptr, 0.0, 5.0,
      2.0 * kPi);
  CHECK_THROWS_AS(classify_end(compact), Error);

  auto both_open = WarpedChart::analytic(
      [](double r, double) { return std::cosh(r); },
      [](double, double) { return -1.0; }, -kInf, kInf, 2.0 * kPi);
  CHECK_THROWS_AS(classify_end(both_open), Error);
}

TEST_CASE("growth profile matches the cusp closed form") {
  auto cusp = cusp_end();
  auto profile = growth_profile(cusp, {0.5, 1.0, 2.0});
  REQUIRE(profile.size() == 3);
  for (const auto& s : profile) {
    const double l = 2.0 * kPi * std::exp(-s.r);
    CHECK(s.l == doctest::Approx(l).epsilon(1e-10));
    CHECK(s.lp == doctest::Approx(-l).epsilon(1e-4));
    CHECK(s.lpp == doctest::Approx(l).epsilon(1e-3));
  }
  CHECK(growth_profile_check(profile, 1.0));
  CHECK_FALSE(growth_profile_check(profile, 2.0));

  CHECK_THROWS_AS(growth_profile(cusp, {-1.0}), Error);
}

TEST_CASE("sampled curvature bounds are evidence, never inflated") {
  CHECK(sampled_curvature_bound(funnel_end(), 0.0, 3.0) ==
        doctest::Approx(1.0).epsilon(1e-12));
  auto flat = WarpedChart::analytic([](double, double) { return 1.0; },
                                    [](double, double) { return 0.0; }, 0.0,
                                    5.0, 2.0 * kPi);
  CHECK(sampled_curvature_bound(flat, 0.0, 5.0) == 0.0);
}
