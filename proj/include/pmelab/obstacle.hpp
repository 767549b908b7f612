#ifndef PMELAB_OBSTACLE_HPP
#define PMELAB_OBSTACLE_HPP

#include <string>

#include "pmelab/solver.hpp"

namespace pmelab {

/// Decreasing parameter sequences driving the delta -> 0 (and eps/gamma)
/// limits, plus the obstacle approximants psi_i used by solve_weak.
struct ApproximationChain {
  std::vector<double> delta_seq{0.1, 0.05, 0.025, 0.0125};
  std::vector<double> eps_seq{0.05};
  std::vector<double> gamma_seq{0.05};
  std::vector<ScalarField> obstacle_seq;
  int i_max = 4;

  void validate() const;
};

struct ConditionReport {
  std::string name;
  bool pass = true;
  bool informational = false;
  std::string detail;
};

struct Diagnostics {
  std::vector<ConditionReport> conditions;
  bool all_pass() const;
  std::string summary() const;
};

/// Checks the data conditions discretely: nonnegativity and boundedness of
/// psi, g, u0; compatibility g >= psi, u0 >= psi(.,0), g(.,0) = u0 on the
/// boundary; finiteness of the data energies. Boundedness of the discrete
/// obstacle forcing is reported as informational only.
Diagnostics validate_spec(const ObstacleProblemSpec& spec);

struct StrongSolveResult {
  ScalarField u;  // trajectory for the smallest delta
  std::vector<double> deltas;
  std::vector<double> feasibility_seq;   // max (psi - u_delta)_+ per delta
  std::vector<double> cauchy_increments; // max |u_{delta_{k+1}} - u_{delta_k}|
  std::vector<NewtonStats> newton;       // stats of the final (smallest-delta) run
  bool increments_decreasing = true;
};

/// Runs the penalized solver along delta_seq at the chain's final eps/gamma;
/// certifies convergence by Cauchy increments and asserts feasibility
/// u >= psi - feastol with feastol = max over nodes of (psi^m + delta_min)^{1/m} - psi.
StrongSolveResult solve_strong(const ObstacleProblemSpec& spec,
                               const ApproximationChain& chain);

struct WeakSolveResult {
  ScalarField u;  // final iterate
  std::vector<ScalarField> iterates;
  std::vector<double> interior_increments;  // L2 increments on the interior
  double min_ordering_gap = 0.0;            // min over nodes of u_{i+1} - u_i
};

/// Runs solve_strong for each obstacle approximant psi_i in the chain and
/// asserts the iterates are nondecreasing in i (tolerance 1e-6 to abort,
/// the observed minimum gap is reported either way).
WeakSolveResult solve_weak(const ObstacleProblemSpec& spec,
                           const ApproximationChain& chain);

/// psi_i = (1 - 2^{-i} + sigma_i) * base for i = 1..i_max, where base is a
/// smoothed minorant of psi (3 passes of 3-point spatial averaging, time
/// mollification at h = 2 dt, then nodewise min with psi) and sigma_i are
/// tiny strictly increasing offsets, so psi_i < psi_{i+1} < psi wherever
/// psi > 0 and psi == 0 gives the all-zero sequence.
std::vector<ScalarField> build_obstacle_sequence(const ScalarField& psi, int i_max);

/// Penalty violations scale like delta in u^m, hence delta^{1/m} in u.
double default_coincidence_tol(double delta, double m);

/// Node mask per time step of {u - psi <= tol}.
std::vector<std::vector<char>> coincidence_set(const ScalarField& u,
                                               const ScalarField& psi, double tol);

struct ComparisonReport {
  bool precondition_ok = true;  // u >= w on the discrete parabolic boundary
  double max_violation = 0.0;   // max over the region of (w - u)_+
  int step = -1;
  int node = -1;
  std::string message;
};

/// Comparison-principle check on a sub-cylinder: requires u >= w on the
/// region's discrete parabolic boundary (initial slice and lateral sides);
/// if that fails the check is skipped and reported.
ComparisonReport comparison_check(const ScalarField& u, const ScalarField& w,
                                  const Region& region);

struct SupercaloricResult {
  std::vector<ScalarField> obstacles;   // psi_i
  std::vector<ScalarField> iterates;    // u_i
  std::vector<double> l2_errors;        // ||u_i - target||_{L2(region)}
  double max_sandwich_violation = 0.0;  // over psi_i <= u_i <= u_{i+1} <= target
};

/// Monotone approximation of a nonnegative target from below: obstacle
/// problems with obstacle = boundary = initial data = psi_i. Throws when the
/// sandwich psi_i <= u_i <= u_{i+1} <= target is violated beyond sandwich_tol.
SupercaloricResult approximate_supercaloric(
    const ScalarField& target, double m, const Region& region, int i_max,
    const RegularizationParams& reg = {2e-9, 2e-9, 1e-16, 0.05},
    double sandwich_tol = 1e-8);

}  // namespace pmelab

#endif
