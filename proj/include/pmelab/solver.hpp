#ifndef PMELAB_SOLVER_HPP
#define PMELAB_SOLVER_HPP

#include <functional>
#include <vector>

#include "pmelab/problem.hpp"

namespace pmelab {

struct PMEParams {
  double m = 2.0;
  double eps = 0.0;  // diffusivity regularization; 0 means the bare power law
  double newton_tol = 1e-12;
  int newton_max_iters = 50;

  void validate() const {
    if (!(m > 1.0)) throw std::invalid_argument("pme: m must be > 1");
    if (eps < 0.0 || eps > 1.0)
      throw std::invalid_argument("pme: eps must lie in [0,1]");
    if (!(newton_tol > 0.0) || newton_max_iters < 1)
      throw std::invalid_argument("pme: bad newton settings");
  }
};

/// Piecewise diffusivity a_eps with branches m eps^{m-1}, m s^{m-1}, m eps^{1-m}
/// on [0,eps], (eps,1/eps], [1/eps,inf). Requires s >= 0 and eps in (0,1].
double regularized_diffusivity(double s, double eps, double m);

/// Primitive of the diffusivity (equals s^m for eps = 0); extended below 0 so
/// that the edge flux Phi(u_j) - Phi(u_i) stays monotone for any iterate.
double diffusivity_primitive(double s, double eps, double m);

/// Smooth monotone profile xi_delta: 1 on [0,inf), 0 on (-inf,-delta],
/// quintic smoothstep in between; max slope 15/(8 delta) <= 2/delta.
double penalty_profile(double s, double delta);
double penalty_profile_deriv(double s, double delta);

/// Penalized-equation data: delta, the obstacle, and the precomputed discrete
/// forcing Psi_+ = (dt psi - Lap psi^m)_+.
struct PenaltySpec {
  double delta = 0.05;
  ScalarField psi;
  ScalarField psi_forcing;

  void validate() const;
};

struct BarenblattParams {
  double m = 2.0;
  int n = 1;
  double C = 1.0;
  double t0 = 1.0;

  double alpha() const { return n / (n * (m - 1.0) + 2.0); }
  double beta() const { return alpha() * (m - 1.0) / (2.0 * m * n); }
  void validate() const {
    if (!(m > 1.0) || (n != 1 && n != 2) || !(C > 0.0) || !(t0 > 0.0))
      throw std::invalid_argument("barenblatt: bad parameters");
    if (!(alpha() > 0.0 && beta() > 0.0))
      throw std::invalid_argument("barenblatt: derived exponents must be positive");
  }
};

double barenblatt(double x, double y, double t, const BarenblattParams& p);
inline double barenblatt(double x, double t, const BarenblattParams& p) {
  return barenblatt(x, 0.0, t, p);
}

enum class BoundaryKind { Dirichlet, Neumann };

struct NewtonStats {
  int step = 0;
  int iterations = 0;
  double residual = 0.0;
};

/// Nonlinear source on the right-hand side of a step, evaluated per node at
/// the new time level; deriv is d(value)/du and must be <= 0 so the Jacobian
/// stays an M-matrix.
struct SourceTerm {
  std::function<double(int, double)> value;
  std::function<double(int, double)> deriv;
};

/// One backward-Euler step of dt u = div(a_eps(u) grad u) + f, solved by
/// damped Newton on the nodal system. bc supplies boundary values (Dirichlet)
/// or is ignored (Neumann, reflecting).
std::vector<double> step(const SpaceTimeGrid& grid, const std::vector<double>& u_prev,
                         const PMEParams& params, const std::vector<double>& bc,
                         double dt, const SourceTerm* source = nullptr,
                         BoundaryKind bkind = BoundaryKind::Dirichlet,
                         NewtonStats* stats = nullptr);

struct TrajectoryResult {
  ScalarField u;
  std::vector<NewtonStats> newton;
};

/// Repeated stepping with boundary data from g (sliced per step) and an
/// optional fixed source field.
TrajectoryResult solve_pme(const std::vector<double>& u0, const ScalarField& g,
                           const PMEParams& params, const SpaceTimeGrid& grid,
                           const ScalarField* source = nullptr,
                           BoundaryKind bkind = BoundaryKind::Dirichlet);

struct PenalizedResult {
  ScalarField u;
  std::vector<NewtonStats> newton;
  double barrier_lo = 0.0;  // eps + gamma
  double barrier_hi = 0.0;  // N
  double max_obstacle_violation = 0.0;  // max (psi_eps - u)_+
  ScalarField psi_lifted;
  ScalarField psi_forcing;  // (Psi_eps)_+
};

/// Penalized porous medium equation with lifted data psi_eps = psi + eps,
/// g_{eps,gamma} = (g^m + gamma^m)^{1/m} + eps, u_{0,eps,gamma} = u0 + eps + gamma
/// and source (Psi_eps)_+ xi_delta(psi_eps^m - u^m). Asserts the discrete
/// barrier eps + gamma <= u <= N with N <= 1/(eps+gamma).
PenalizedResult solve_penalized(const ObstacleProblemSpec& spec,
                                const RegularizationParams& reg,
                                const PMEParams* params_override = nullptr);

/// Newton statistics as CSV (step index, iterations, final residual).
std::string newton_stats_csv(const std::vector<NewtonStats>& stats);

}  // namespace pmelab

#endif
