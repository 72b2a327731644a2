#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "rde/analyze.hpp"
#include "rde/core.hpp"
#include "rde/equilibria.hpp"
#include "rde/rng.hpp"

using namespace rde;

TEST_CASE("isolated equilibrium is (A+1, A+1, A+1)") {
  const Equilibrium e3 = isolated_equilibrium(3.0);
  CHECK(e3.x == 4.0);
  CHECK(e3.y == 4.0);
  CHECK(e3.z == 4.0);
  CHECK(e3.kind == EquilibriumKind::Isolated);
  const Equilibrium eh = isolated_equilibrium(0.5);
  CHECK(eh.x == 1.5);
  CHECK_THROWS_AS(isolated_equilibrium(1.0), AEqualsOne);
}

TEST_CASE("family equilibrium (mu, mu, mu/(mu-1))") {
  const Equilibrium e2 = family_equilibrium(2.0);
  CHECK(e2.x == 2.0);
  CHECK(e2.z == 2.0);
  const Equilibrium e3 = family_equilibrium(3.0);
  CHECK(e3.x == 3.0);
  CHECK(e3.z == 1.5);
  CHECK_THROWS_AS(family_equilibrium(1.0), MuOutOfRange);
}

TEST_CASE("residual defects") {
  const auto r0 = residual(isolated_equilibrium(3.0), 3.0);
  CHECK(r0[0] == 0.0);
  CHECK(r0[1] == 0.0);
  CHECK(r0[2] == 0.0);
  const auto r1 = residual(family_equilibrium(2.0), 1.0);
  CHECK(r1[0] == 0.0);
  const auto r2 = residual(Equilibrium{4, 4, 4, EquilibriumKind::Isolated}, 2.0);
  CHECK(r2[0] == 1.0);
  CHECK(r2[1] == 1.0);
  CHECK(r2[2] == 1.0);
}

TEST_CASE("residuals vanish over randomized A and mu", "[property]") {
  CounterRng rng(11);
  for (int i = 0; i < 500; ++i) {
    const double A =
        rng.next_unit() < 0.5 ? rng.next(0.01, 0.99) : rng.next(1.01, 10.0);
    const Equilibrium eq = isolated_equilibrium(A);
    const auto r = residual(eq, A);
    const double scale = std::max(1.0, eq.x);
    CHECK(std::fabs(r[0]) <= 1e-14 * scale);
    CHECK(std::fabs(r[1]) <= 1e-14 * scale);
    CHECK(std::fabs(r[2]) <= 1e-14 * scale);

    const double mu = rng.next(1.000001, 50.0);
    const Equilibrium fam = family_equilibrium(mu);
    const auto rf = residual(fam, 1.0);
    const double fscale = std::max({1.0, fam.x, fam.z});
    CHECK(std::fabs(rf[0]) <= 1e-14 * fscale);
    CHECK(std::fabs(rf[2]) <= 1e-14 * fscale);
    // Hyperboloid: y*z - y - z = 0.
    CHECK(std::fabs(fam.y * fam.z - fam.y - fam.z) <= 1e-14 * fscale * fscale);
  }
}

TEST_CASE("step reproduces any equilibrium to a few ulps", "[property]") {
  CounterRng rng(12);
  for (int i = 0; i < 100; ++i) {
    const bool family = rng.next_unit() < 0.5;
    const double A = family ? 1.0 : rng.next(1.01, 10.0);
    const Equilibrium eq =
        family ? family_equilibrium(rng.next(1.01, 20.0)) : isolated_equilibrium(A);
    const int m = 1 + static_cast<int>(rng.next_unit() * 5.0);
    std::vector<Triple> window(static_cast<std::size_t>(m) + 1,
                               Triple{eq.x, eq.y, eq.z});
    const Triple next = step(Params{A, m}, window);
    CHECK(std::fabs(next.x - eq.x) <= std::fabs(eq.x) * 5e-16);
    CHECK(std::fabs(next.y - eq.y) <= std::fabs(eq.y) * 5e-16);
    CHECK(std::fabs(next.z - eq.z) <= std::fabs(eq.z) * 5e-16);
  }
}

namespace {
Trajectory constant_run(double A, double v, long long steps) {
  InitBlock init;
  init.x.assign(2, v);
  init.y.assign(2, v);
  init.z.assign(2, v);
  const auto [params, block] = validate_params(A, 1, init);
  return iterate(params, block, steps);
}
}  // namespace

TEST_CASE("estimate_mu on constant trajectories") {
  const Trajectory t2 = constant_run(1.0, 2.0, 500);
  const MuEstimate e2 = estimate_mu(t2);
  CHECK(e2.mu_hat == 2.0);
  CHECK(e2.hyperboloid_residual == 0.0);

  InitBlock init;
  init.x.assign(2, 3.0);
  init.y.assign(2, 3.0);
  init.z.assign(2, 1.5);
  const auto [params, block] = validate_params(1.0, 1, init);
  const Trajectory t3 = iterate(params, block, 500);
  const MuEstimate e3 = estimate_mu(t3);
  CHECK(e3.mu_hat == Catch::Approx(3.0).epsilon(1e-12));
  CHECK(e3.hyperboloid_residual < 1e-12);
}

TEST_CASE("estimate_mu residual is small on long random A=1 runs") {
  CounterRng rng(13);
  InitBlock init;
  for (auto* v : {&init.x, &init.y, &init.z}) {
    v->resize(2);
    for (double& e : *v) e = rng.next(0.5, 5.0);
  }
  const auto [params, block] = validate_params(1.0, 1, init);
  const Trajectory traj = iterate(params, block, 200000);
  REQUIRE(!traj.overflow_at);
  const MuEstimate est = estimate_mu(traj);
  CHECK(est.mu_hat > 1.0);
  // The tail mean lies near the hyperboloid only when the run settles;
  // bounded-oscillatory runs are legitimate at A = 1, so gate on the label.
  const RegimeReport rep = classify_regime(traj, params);
  if (rep.label == RegimeLabel::Converged)
    CHECK(est.hyperboloid_residual <= 1e-3);
  else
    CHECK(rep.label == RegimeLabel::BoundedOscillatory);
}

TEST_CASE("estimate_mu rejects wrong inputs") {
  const Trajectory t = constant_run(2.0, 3.0, 200);
  CHECK_THROWS_AS(estimate_mu(t), NotUnityA);
}
