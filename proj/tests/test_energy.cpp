#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "pmelab/energy.hpp"
#include "pmelab/solver.hpp"

using namespace pmelab;

namespace {

ObstacleProblemSpec make_spec(const SpaceTimeGrid& g,
                              const std::function<double(double, double, double)>& gf,
                              double m) {
  ObstacleProblemSpec spec;
  spec.psi = ScalarField::constant(g, 0.0);
  spec.g = ScalarField::sample(g, gf);
  spec.u0 = spec.g.slice(0);
  spec.m = m;
  return spec;
}

}  // namespace

TEST_CASE("data energies: zero data vanish") {
  const SpaceTimeGrid g = SpaceTimeGrid::make1d(0, 1, 17, 9, 1.0);
  const ObstacleProblemSpec spec =
      make_spec(g, [](double, double, double) { return 0.0; }, 2.0);
  CHECK(constant_A(spec) == 0.0);
  CHECK(constant_Atilde(spec) == 0.0);
}

TEST_CASE("data energies: unit data on the unit cylinder") {
  const SpaceTimeGrid g = SpaceTimeGrid::make1d(0, 1, 17, 9, 1.0);
  const ObstacleProblemSpec spec =
      make_spec(g, [](double, double, double) { return 1.0; }, 2.0);
  CHECK(constant_A(spec) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(constant_Atilde(spec) == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("data energies: affine boundary data, m = 2") {
  const SpaceTimeGrid g = SpaceTimeGrid::make1d(0, 1, 129, 17, 1.0);
  const ObstacleProblemSpec spec =
      make_spec(g, [](double x, double, double) { return x; }, 2.0);
  CHECK(constant_A(spec) == doctest::Approx(11.0 / 6.0).epsilon(1e-3));
  CHECK(constant_Atilde(spec) == doctest::Approx(61.0 / 30.0).epsilon(1e-3));
}

TEST_CASE("energy report on constant fields") {
  const SpaceTimeGrid g = SpaceTimeGrid::make1d(0, 1, 17, 9, 1.0);
  const Region interior = Region::box1d(0.2, 0.8, 0.1, 0.9);
  const EnergyReport zero = energy_report(ScalarField::constant(g, 0.0), 2.0, interior);
  CHECK(zero.sup_Lm1 == 0.0);
  CHECK(zero.grad_um_sq == 0.0);
  CHECK(zero.grad_umid_sq == 0.0);

  const double c = 1.5;
  const EnergyReport r = energy_report(ScalarField::constant(g, c), 2.0, interior);
  CHECK(r.sup_Lm1 == doctest::Approx(std::pow(c, 3.0)).epsilon(1e-12));
  CHECK(r.grad_um_sq == doctest::Approx(0.0));
  CHECK(r.grad_umid_sq == doctest::Approx(0.0));
}

TEST_CASE("caccioppoli: degenerate cases") {
  const SpaceTimeGrid g = SpaceTimeGrid::make1d(0, 1, 33, 17, 1.0);
  const CutoffFunction zeta = CutoffFunction::bump(
      1, Region::box1d(0.1, 0.9, 0.1, 0.9), Region::box1d(0.3, 0.7, 0.3, 0.7));
  const double M = 2.0;
  const CaccioppoliResult at_bound =
      caccioppoli_check(ScalarField::constant(g, M), M, zeta, 2.0);
  CHECK(at_bound.lhs == 0.0);
  CHECK(at_bound.rhs == 0.0);
  CHECK(at_bound.ratio == 0.0);

  const CaccioppoliResult below =
      caccioppoli_check(ScalarField::constant(g, 1.0), M, zeta, 2.0);
  CHECK(below.lhs == 0.0);
  CHECK(below.rhs > 0.0);

  CHECK_THROWS_AS(caccioppoli_check(ScalarField::constant(g, M + 1.0), M, zeta, 2.0),
                  std::invalid_argument);
}

TEST_CASE("caccioppoli ratio bound on Barenblatt supersolutions") {
  const SpaceTimeGrid g = SpaceTimeGrid::make1d(-4, 4, 129, 33, 1.0);
  const CutoffFunction zeta = CutoffFunction::bump(
      1, Region::box1d(-3.5, 3.5, 0.05, 0.98), Region::box1d(-2.0, 2.0, 0.4, 0.9));
  for (double m : {1.5, 2.0, 3.0}) {
    BarenblattParams bp;
    bp.m = m;
    const ScalarField u = ScalarField::sample(
        g, [&](double x, double, double t) { return barenblatt(x, t, bp); }, true);
    const CaccioppoliResult r = caccioppoli_check(u, 1.1 * u.max(), zeta, m);
    CHECK(r.ratio <= (m + 1.0) * (m + 1.0));
  }
}

TEST_CASE("sobolev check: zero field and exact homogeneity") {
  const SpaceTimeGrid g = SpaceTimeGrid::make1d(-1, 1, 65, 17, 1.0);
  const SobolevResult z =
      sobolev_check(ScalarField::constant(g, 0.0), 2.0, 1.5, 0.0, 0.0, 0.6, 0.2, 0.8);
  CHECK(z.lhs == 0.0);
  CHECK(z.rhs_without_C == 0.0);
  CHECK(z.ell == doctest::Approx(2.0 * (1.0 + 1.5) / 1.0));

  const ScalarField v = ScalarField::sample(g, [](double x, double, double t) {
    return std::exp(-4.0 * x * x) * (1.0 + t);
  });
  const double lambda = 3.7, p = 2.0, r = 1.5;
  const SobolevResult a = sobolev_check(v, p, r, 0.0, 0.0, 0.6, 0.2, 0.8);
  const SobolevResult b =
      sobolev_check(v.map([&](double s) { return lambda * s; }), p, r, 0.0, 0.0,
                    0.6, 0.2, 0.8);
  const double factor = std::pow(lambda, a.ell);
  CHECK(b.lhs == doctest::Approx(factor * a.lhs).epsilon(1e-12));
  CHECK(b.rhs_without_C == doctest::Approx(factor * a.rhs_without_C).epsilon(1e-12));
  CHECK_THROWS_AS(sobolev_check(v, p, r, 0.0, 0.0, 0.6, 0.8, 0.2),
                  std::invalid_argument);
}

TEST_CASE("sobolev ratio is uniformly bounded over a bump family") {
  const SpaceTimeGrid g = SpaceTimeGrid::make1d(-1, 1, 129, 17, 1.0);
  const double p = 2.0, r = 1.5;  // r = (m+1)/m at m = 2
  double max_ratio = 0.0;
  for (int i = 0; i < 8; ++i) {
    const double w = 0.15 + 0.05 * i, cx = -0.3 + 0.08 * i;
    const ScalarField v = ScalarField::sample(g, [&](double x, double, double t) {
      const double q = 1.0 - (x - cx) * (x - cx) / (w * w);
      return q > 0.0 ? q * q * (1.0 + 0.5 * t) : 0.0;
    });
    const SobolevResult s = sobolev_check(v, p, r, 0.0, 0.0, 0.9, 0.1, 0.9);
    if (s.rhs_without_C > 0.0)
      max_ratio = std::max(max_ratio, s.lhs / s.rhs_without_C);
  }
  CHECK(max_ratio > 0.0);
  CHECK(max_ratio <= 10.0);  // single empirical constant across the family
}

TEST_CASE("test function basis: deterministic, interior, normalized") {
  const SpaceTimeGrid g = SpaceTimeGrid::make1d(0, 1, 33, 17, 1.0);
  const TestFunctionBasis b1 = TestFunctionBasis::make(g, 6, 42);
  const TestFunctionBasis b2 = TestFunctionBasis::make(g, 6, 42);
  REQUIRE(b1.size() == 6);
  for (int i = 0; i < b1.size(); ++i) {
    CHECK(b1.norm(i) == b2.norm(i));
    const Region& s = b1.bump(i).support();
    CHECK(s.xlo[0] > 0.0);
    CHECK(s.xhi[0] < 1.0);
    CHECK(s.t1 > 0.0);
    CHECK(s.t2 < 1.0);
    CHECK(b1.value(i, -0.5, 0, 0.5) == 0.0);
    // normalization: re-integrate |phi| + |dt phi| + |grad phi| on a fine grid
    double total = 0.0;
    const int N = 400, K = 200;
    for (int k = 0; k <= K; ++k) {
      const double t = k / static_cast<double>(K);
      const double wk = (k == 0 || k == K) ? 0.5 : 1.0;
      for (int j = 0; j <= N; ++j) {
        const double x = j / static_cast<double>(N);
        const double wj = (j == 0 || j == N) ? 0.5 : 1.0;
        total += wk * wj *
                 (std::fabs(b1.value(i, x, 0, t)) + std::fabs(b1.dt(i, x, 0, t)) +
                  std::fabs(b1.grad(i, x, 0, t)[0]));
      }
    }
    total /= N * static_cast<double>(K);
    CHECK(total == doctest::Approx(1.0).epsilon(2e-3));
  }
}

TEST_CASE("weak residuals: constants and supersolution sign") {
  const SpaceTimeGrid g = SpaceTimeGrid::make1d(0, 1, 65, 65, 1.0);
  const TestFunctionBasis basis = TestFunctionBasis::make(g, 8, 7);
  const double m = 2.0;
  for (double r : weak_residual(ScalarField::constant(g, 1.3), m, basis,
                                WeakForm::GradUm))
    CHECK(std::fabs(r) <= 1e-2);  // pure quadrature error

  // u(x,t) = t: residual equals iint phi >= 0, a strict supersolution
  const ScalarField lin =
      ScalarField::sample(g, [](double, double, double t) { return t; });
  const std::vector<double> res = weak_residual(lin, m, basis, WeakForm::GradUm);
  for (int i = 0; i < basis.size(); ++i) {
    CHECK(res[i] >= -1e-6);
    // compare against an independent quadrature of iint phi
    double mass = 0.0;
    for (int k = 0; k < g.nt; ++k) {
      const double wt = trapezoid_time_weight(g, k);
      for (int n = 0; n < g.num_nodes(); ++n)
        mass += wt * trapezoid_space_weight(g, n) *
                basis.value(i, g.coord(n, 0), 0, g.t(k));
    }
    CHECK(res[i] == doctest::Approx(mass).epsilon(5e-3));
  }
}

TEST_CASE("weak residuals of a stationary profile decay under refinement") {
  const double m = 2.0;
  std::vector<double> worst;
  for (int nx : {33, 65, 129}) {
    const SpaceTimeGrid g = SpaceTimeGrid::make1d(0, 1, nx, nx, 1.0);
    const TestFunctionBasis basis = TestFunctionBasis::make(1, {0, 0}, {1, 0}, 1.0, 8, 7);
    const ScalarField u = ScalarField::sample(g, [m](double x, double, double) {
      return std::pow(0.5 * x + 0.25, 1.0 / m);  // u^m affine => exact solution
    });
    double w = 0.0;
    for (double r : weak_residual(u, m, basis, WeakForm::GradUm))
      w = std::max(w, std::fabs(r));
    worst.push_back(w);
  }
  CHECK(worst[1] <= worst[0] / 1.5);
  CHECK(worst[2] <= worst[1] / 1.5);
}

TEST_CASE("regularized residual: zero field and constant identity") {
  const SpaceTimeGrid g = SpaceTimeGrid::make1d(0, 1, 65, 129, 1.0);
  const TestFunctionBasis basis = TestFunctionBasis::make(g, 6, 11);
  for (double r :
       regularized_residual(ScalarField::constant(g, 0.0), 2.0, 0.1, basis))
    CHECK(r == 0.0);
  // constant c with v0 = 0: dt[[u]] = (c/h) e^{-t/h} matches the initial term
  for (double r :
       regularized_residual(ScalarField::constant(g, 2.0), 2.0, 0.1, basis))
    CHECK(std::fabs(r) <= 2e-3);
}

TEST_CASE("variational residual: exact cancellation cases") {
  const SpaceTimeGrid g = SpaceTimeGrid::make1d(0, 1, 65, 65, 1.0);
  const CutoffFunction alpha = CutoffFunction::time_ramp(0.4, 1.0);
  ObstacleProblemSpec spec;
  spec.psi = ScalarField::constant(g, 0.0);
  spec.m = 2.0;

  const ScalarField c = ScalarField::constant(g, 1.2);
  spec.g = c;
  spec.u0 = c.slice(0);
  // cancellation is exact up to the trapezoid error of the alpha' integral
  CHECK(std::fabs(variational_residual(c, c, alpha, spec)) <= 1e-3);

  const ScalarField smooth = ScalarField::sample(g, [](double x, double, double t) {
    return 1.0 + 0.3 * std::sin(2.0 * x) + 0.2 * t;
  });
  spec.g = smooth;
  spec.u0 = smooth.slice(0);
  const double r = variational_residual(smooth, smooth, alpha, spec);
  CHECK(std::fabs(r) <= 5e-3);  // quadrature error only

  // infeasible comparison map is rejected
  ObstacleProblemSpec high = spec;
  high.psi = ScalarField::constant(g, 5.0);
  CHECK_THROWS_AS(variational_residual(smooth, smooth, alpha, high),
                  std::invalid_argument);
}

TEST_CASE("truncation functions: branch values and continuity") {
  const double eps = 0.3;
  CHECK(truncation_G(0.0, eps) == 0.0);
  CHECK(truncation_G(eps, eps) == doctest::Approx(eps * eps).epsilon(1e-15));
  CHECK(truncation_G(2.0 * eps, eps) == doctest::Approx(2.5 * eps * eps).epsilon(1e-15));
  CHECK(truncation_g(0.1, eps) == eps);
  CHECK(truncation_g(0.5, eps) == 0.5);

  const SpaceTimeGrid g = SpaceTimeGrid::make1d(0, 1, 17, 9, 1.0);
  const CutoffFunction zeta = CutoffFunction::bump(
      1, Region::box1d(0.1, 0.9, 0.1, 0.9), Region::box1d(0.4, 0.6, 0.4, 0.6));
  const TruncationEnergy te =
      truncation_energy(ScalarField::constant(g, 0.5), eps, zeta);
  CHECK(te.G_term >= 0.0);
  CHECK(te.g_term >= 0.0);
  CHECK_THROWS_AS(truncation_energy(ScalarField::constant(g, 0.5), 0.0, zeta),
                  std::invalid_argument);
}

TEST_CASE("discrete obstacle forcing vanishes on constants") {
  const SpaceTimeGrid g = SpaceTimeGrid::make1d(0, 1, 17, 9, 1.0);
  const ScalarField f =
      discrete_obstacle_forcing(ScalarField::constant(g, 0.7), 2.0);
  CHECK(f.max_abs() <= 1e-14);
}

TEST_CASE("energy ratios stay in a band across the penalty chain") {
  const SpaceTimeGrid g = SpaceTimeGrid::make1d(0, 1, 33, 17, 0.5);
  ObstacleProblemSpec spec;
  spec.m = 2.0;
  spec.psi = ScalarField::sample(
      g,
      [](double x, double, double) {
        const double q = 1.0 - (x - 0.5) * (x - 0.5) / 0.09;
        return q > 0.0 ? 0.6 * q * q : 0.0;
      },
      true);
  spec.g = ScalarField::constant(g, 0.7);
  spec.u0 = spec.g.slice(0);
  const Region interior = Region::box1d(0.1, 0.9, 0.05, 0.45);
  std::vector<double> re, rg;
  for (double delta : {0.1, 0.05, 0.025, 0.0125}) {
    RegularizationParams reg;
    reg.delta = delta;
    const PenalizedResult run = solve_penalized(spec, reg);
    const EnergyReport er = energy_report(run.u, spec.m, interior, &spec);
    re.push_back(er.ratio_energy);
    rg.push_back(er.ratio_grad);
  }
  auto band = [](const std::vector<double>& v) {
    const double lo = *std::min_element(v.begin(), v.end());
    const double hi = *std::max_element(v.begin(), v.end());
    return hi <= 2.0 * lo;
  };
  CHECK(band(re));
  CHECK(band(rg));
}
