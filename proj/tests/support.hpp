#pragma once

// Shared witness generators for the comparison tests and the acceptance
// suite.  Deterministic given the caller's RNG.

#include <array>
#include <random>

#include "geodecomp/comparison.hpp"
#include "geodecomp/numerics.hpp"

namespace geodecomp_testing {

// Integrates y'' = q(t) y with q(t) >= c^2 random piecewise-constant, from
// random positive initial data at t0, over [t0, t0 + 5].  Every sample's y''
// column is filled from q exactly, so the witness satisfies its differential
// hypothesis by construction.
inline geodecomp::GrowthWitness random_growth_witness(std::mt19937& rng) {
  std::uniform_real_distribution<double> uc(0.1, 3.0);
  std::uniform_real_distribution<double> ut0(-2.0, 2.0);
  std::uniform_real_distribution<double> uy(0.1, 2.0);
  std::uniform_real_distribution<double> udy(0.1, 2.0);
  std::uniform_real_distribution<double> ubump(0.05, 1.0);

  geodecomp::GrowthWitness w;
  w.c = uc(rng);
  w.t0 = ut0(rng);
  const double c2 = w.c * w.c;
  const int segments = 5;
  std::array<double, segments> q;
  for (auto& v : q) v = c2 * (1.0 + ubump(rng));

  const double span = 5.0;
  const double step = 5e-4;
  auto q_at = [&](double t) {
    int k = static_cast<int>((t - w.t0) / span * segments);
    if (k < 0) k = 0;
    if (k >= segments) k = segments - 1;
    return q[static_cast<std::size_t>(k)];
  };

  std::array<double, 2> y = {uy(rng), udy(rng)};
  int count = 0;
  geodecomp::rk4_integrate<2>(
      [&](double t, const std::array<double, 2>& in,
          std::array<double, 2>& out) {
        out[0] = in[1];
        out[1] = q_at(t) * in[0];
      },
      w.t0, w.t0 + span, step, y,
      [&](double t, const std::array<double, 2>& state) {
        if (count++ % 5 != 0) return;
        w.t.push_back(t);
        w.y.push_back(state[0]);
        w.dy.push_back(state[1]);
        w.ddy.push_back(q_at(t) * state[0]);
      });
  return w;
}

} // namespace geodecomp_testing
