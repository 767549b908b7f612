#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "pmelab/calculus.hpp"
#include "pmelab/solver.hpp"

using namespace pmelab;

TEST_CASE("diffusivity branches") {
  // m = 2, eps = 0.5: branch switch points at s = 0.5 and s = 2
  CHECK(regularized_diffusivity(0.25, 0.5, 2.0) == doctest::Approx(1.0));
  CHECK(regularized_diffusivity(1.0, 0.5, 2.0) == doctest::Approx(2.0));
  CHECK(regularized_diffusivity(3.0, 0.5, 2.0) == doctest::Approx(4.0));
  CHECK_THROWS_AS(regularized_diffusivity(-0.1, 0.5, 2.0), std::invalid_argument);
  CHECK_THROWS_AS(regularized_diffusivity(1.0, 0.0, 2.0), std::invalid_argument);
  CHECK_THROWS_AS(regularized_diffusivity(1.0, 1.5, 2.0), std::invalid_argument);
}

TEST_CASE("diffusivity primitive matches the power law without regularization") {
  for (double s : {0.0, 0.3, 1.0, 2.5})
    CHECK(diffusivity_primitive(s, 0.0, 2.0) == doctest::Approx(s * s));
  // with eps > 0 the primitive is continuous and increasing
  double prev = diffusivity_primitive(0.0, 0.1, 2.0);
  for (double s = 0.01; s < 12.0; s += 0.01) {
    const double v = diffusivity_primitive(s, 0.1, 2.0);
    CHECK(v > prev);
    prev = v;
  }
}

TEST_CASE("penalty profile endpoints, midpoint, and slope bound") {
  const double delta = 0.1;
  CHECK(penalty_profile(0.0, delta) == 1.0);
  CHECK(penalty_profile(1.0, delta) == 1.0);
  CHECK(penalty_profile(-delta, delta) == 0.0);
  CHECK(penalty_profile(-1.0, delta) == 0.0);
  CHECK(penalty_profile(-0.05, delta) == doctest::Approx(0.5).epsilon(1e-12));
  double max_slope = 0.0;
  for (int i = 0; i <= 2000; ++i) {
    const double s = -delta + i * delta / 2000.0;
    max_slope = std::max(max_slope, penalty_profile_deriv(s, delta));
  }
  CHECK(max_slope <= 2.0 / delta);
  CHECK(max_slope == doctest::Approx(15.0 / (8.0 * delta)).epsilon(1e-3));
}

TEST_CASE("barenblatt profile: exponents, symmetry, center value, mass") {
  BarenblattParams p;  // m = 2, n = 1
  CHECK(p.alpha() == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(p.beta() == doctest::Approx(1.0 / 12.0).epsilon(1e-15));
  for (double t : {0.0, 0.3, 1.2}) {
    CHECK(barenblatt(0.7, t, p) == doctest::Approx(barenblatt(-0.7, t, p)));
    CHECK(barenblatt(0.0, t, p) ==
          doctest::Approx(p.C * std::pow(t + p.t0, -1.0 / 3.0)).epsilon(1e-14));
  }
  // mass conservation at desk quadrature accuracy
  const SpaceTimeGrid g = SpaceTimeGrid::make1d(-6, 6, 513, 2, 1.0);
  auto mass = [&](double t) {
    std::vector<double> v(g.num_nodes());
    for (int n = 0; n < g.num_nodes(); ++n) v[n] = barenblatt(g.x(n), t, p);
    return integrate_slice(g, v);
  };
  CHECK(std::fabs(mass(0.0) - mass(1.0)) / mass(0.0) <= 1e-3);
}

TEST_CASE("constants and zero are stationary states of the step") {
  const SpaceTimeGrid g = SpaceTimeGrid::make1d(0, 1, 17, 2, 0.1);
  PMEParams p;
  for (double c : {0.0, 1.3}) {
    const std::vector<double> prev(g.num_nodes(), c);
    const std::vector<double> bc(g.num_nodes(), c);
    const std::vector<double> next = step(g, prev, p, bc, g.dt);
    for (double v : next) CHECK(v == doctest::Approx(c).epsilon(1e-12));
  }
}

TEST_CASE("one step against the Barenblatt oracle: error halves with dt") {
  BarenblattParams bp;
  const int nx = 1025;
  std::vector<double> errs;
  for (double dt : {4e-3, 2e-3, 1e-3}) {
    const SpaceTimeGrid g = SpaceTimeGrid::make1d(-4, 4, nx, 2, dt);
    std::vector<double> prev(g.num_nodes()), bc(g.num_nodes());
    for (int n = 0; n < g.num_nodes(); ++n) {
      prev[n] = barenblatt(g.x(n), 0.0, bp);
      bc[n] = barenblatt(g.x(n), dt, bp);
    }
    PMEParams p;
    const std::vector<double> next = step(g, prev, p, bc, dt);
    double e = 0.0;
    for (int n = 0; n < g.num_nodes(); ++n)
      e = std::max(e, std::fabs(next[n] - bc[n]));
    errs.push_back(e);
  }
  CHECK(errs[1] <= 0.65 * errs[0]);
  CHECK(errs[2] <= 0.65 * errs[1]);
}

TEST_CASE("trajectories: zero and constant data, newton bookkeeping") {
  const SpaceTimeGrid g = SpaceTimeGrid::make1d(0, 1, 17, 9, 0.5);
  PMEParams p;
  for (double c : {0.0, 2.0}) {
    const std::vector<double> u0(g.num_nodes(), c);
    const ScalarField bc = ScalarField::constant(g, c);
    const TrajectoryResult r = solve_pme(u0, bc, p, g);
    for (int k = 0; k < g.nt; ++k)
      for (int n = 0; n < g.num_nodes(); ++n)
        CHECK(r.u.at(k, n) == doctest::Approx(c).epsilon(1e-12));
    CHECK(static_cast<int>(r.newton.size()) == g.nt - 1);
  }
  const std::string csv = newton_stats_csv(
      solve_pme(std::vector<double>(g.num_nodes(), 1.0),
                ScalarField::constant(g, 1.0), p, g)
          .newton);
  CHECK(csv.rfind("step,iterations,residual\n", 0) == 0);
}

TEST_CASE("scheme comparison principle: ordered data give ordered solutions") {
  const SpaceTimeGrid g = SpaceTimeGrid::make1d(0, 1, 33, 17, 0.25);
  PMEParams p;
  p.m = 3.0;  // also exercise a stronger degeneracy
  const ScalarField glo = ScalarField::sample(
      g, [](double x, double, double t) { return 0.3 + 0.2 * std::sin(3 * x + t); });
  const ScalarField ghi = glo.map([](double v) { return v + 0.15; });
  const TrajectoryResult lo = solve_pme(glo.slice(0), glo, p, g);
  const TrajectoryResult hi = solve_pme(ghi.slice(0), ghi, p, g);
  double worst = 0.0;
  for (int k = 0; k < g.nt; ++k)
    for (int n = 0; n < g.num_nodes(); ++n)
      worst = std::max(worst, lo.u.at(k, n) - hi.u.at(k, n));
  CHECK(worst <= 1e-10);
}

TEST_CASE("nonnegativity is preserved") {
  const SpaceTimeGrid g = SpaceTimeGrid::make1d(-2, 2, 65, 17, 0.5);
  BarenblattParams bp;
  bp.C = 0.3;  // support well inside the domain
  const ScalarField bc = ScalarField::constant(g, 0.0);
  std::vector<double> u0(g.num_nodes());
  for (int n = 0; n < g.num_nodes(); ++n) u0[n] = barenblatt(g.x(n), 0.0, bp);
  PMEParams p;
  const TrajectoryResult r = solve_pme(u0, bc, p, g);
  CHECK(r.u.min() >= 0.0);
}

TEST_CASE("zero-flux boundaries conserve mass") {
  const SpaceTimeGrid g = SpaceTimeGrid::make1d(-2, 2, 65, 33, 1.0);
  BarenblattParams bp;
  bp.C = 0.3;
  std::vector<double> u0(g.num_nodes());
  for (int n = 0; n < g.num_nodes(); ++n) u0[n] = barenblatt(g.x(n), 0.0, bp);
  PMEParams p;
  const ScalarField unused = ScalarField::constant(g, 0.0);
  const TrajectoryResult r =
      solve_pme(u0, unused, p, g, nullptr, BoundaryKind::Neumann);
  const double m0 = integrate_slice(g, r.u.slice(0));
  for (int k = 1; k < g.nt; ++k)
    CHECK(std::fabs(integrate_slice(g, r.u.slice(k)) - m0) <= 1e-8 * g.T);
}

TEST_CASE("penalized solver: flat obstacle, constant data stays in the lifted band") {
  const SpaceTimeGrid g = SpaceTimeGrid::make1d(0, 1, 33, 9, 0.5);
  const double c = 1.0;
  ObstacleProblemSpec spec;
  spec.psi = ScalarField::constant(g, 0.0);
  spec.g = ScalarField::constant(g, c);
  spec.u0 = std::vector<double>(g.num_nodes(), c);
  spec.m = 2.0;
  RegularizationParams reg;  // 0.05 everywhere
  const PenalizedResult r = solve_penalized(spec, reg);
  CHECK(r.u.min() >= c + reg.eps - 1e-10);
  CHECK(r.u.max() <= c + reg.eps + reg.gamma + 1e-10);
  CHECK(r.barrier_lo == doctest::Approx(reg.eps + reg.gamma));
  CHECK(r.max_obstacle_violation <= 1e-10);
}

TEST_CASE("penalized solver: active flat obstacle, feasibility decays with delta") {
  const SpaceTimeGrid g = SpaceTimeGrid::make1d(0, 1, 33, 9, 0.5);
  const double c = 0.8;
  ObstacleProblemSpec spec;
  spec.psi = ScalarField::constant(g, c);
  spec.g = ScalarField::constant(g, c);
  spec.u0 = std::vector<double>(g.num_nodes(), c);
  spec.m = 2.0;
  double prev = 1e9;
  for (double delta : {0.1, 0.05, 0.025}) {
    RegularizationParams reg;
    reg.delta = delta;
    const PenalizedResult r = solve_penalized(spec, reg);
    CHECK(r.max_obstacle_violation <= prev + 1e-12);
    CHECK(r.max_obstacle_violation <= std::pow(delta, 1.0 / spec.m));
    CHECK(r.u.min() >= reg.eps + reg.gamma - 1e-10);        // lower barrier
    CHECK(r.u.max() <= r.barrier_hi + 1e-10);               // upper barrier
    prev = r.max_obstacle_violation;
  }
}

TEST_CASE("penalized solver rejects invalid regularization") {
  const SpaceTimeGrid g = SpaceTimeGrid::make1d(0, 1, 9, 3, 0.5);
  ObstacleProblemSpec spec;
  spec.psi = ScalarField::constant(g, 0.0);
  spec.g = ScalarField::constant(g, 1.0);
  spec.u0 = std::vector<double>(g.num_nodes(), 1.0);
  RegularizationParams reg;
  reg.eps = 0.7;
  reg.gamma = 0.7;  // eps + gamma > 1
  CHECK_THROWS_AS(solve_penalized(spec, reg), std::invalid_argument);
}
