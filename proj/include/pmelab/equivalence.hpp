#ifndef PMELAB_EQUIVALENCE_HPP
#define PMELAB_EQUIVALENCE_HPP

#include <functional>

#include "pmelab/energy.hpp"

namespace pmelab {

/// Down: gradient of u^{(m+1)/2} via (m+1)/2 u^{(m-1)/2} grad u.
/// Up: gradient of u^m via (2m/(m+1)) u^{(m-1)/2} grad u^{(m+1)/2}.
enum class PowerDirection { Down, Up };

struct GradientTransformResult {
  std::vector<double> ladder;          // truncation levels k, increasing
  std::vector<double> level_mismatch;  // L2 chain-rule mismatch per level
  ScalarField transformed;             // |transformed gradient| at the top level
  double mismatch = 0.0;               // top-level (untruncated) mismatch
};

/// Truncations u_k = min{u, k} over the geometric ladder k = max(u) 2^{-j},
/// j = k_max..0. At each level the transformed gradient (per `dir`) is
/// compared in L2 against the direct nodal gradient of the target power;
/// the top level is the untruncated field, so its transformed-gradient
/// magnitudes stabilize the ladder.
GradientTransformResult gradient_power_transform(const ScalarField& u, double m,
                                                 PowerDirection dir, int k_max = 6);

using FieldSampler =
    std::function<ScalarField(const SpaceTimeGrid&)>;  // resamples u per grid

struct EquivalenceReport {
  struct Level {
    int nx = 0;
    int nt = 0;
    std::vector<double> residuals_i;   // flux grad u^m
    std::vector<double> residuals_ii;  // flux (2m/(m+1)) u^{(m-1)/2} grad u^{(m+1)/2}
    double max_residual_i = 0.0;
    double max_residual_ii = 0.0;
    double max_form_difference = 0.0;  // max per-phi |res_i - res_ii|
    double form_tolerance = 0.0;       // 10 (dx+dt) (1+||u||_inf)^m
    double gradient_mismatch = 0.0;    // L2 norm of the flux difference
    double time_modulus_Lm1 = 0.0;     // max adjacent-slice L^{m+1} difference
    double time_modulus_L2 = 0.0;      // max adjacent-slice L^2 difference
  };
  std::vector<Level> levels;
  std::vector<double> refinement_orders_i;   // log2 decay of max_residual_i
  std::vector<double> refinement_orders_ii;
  bool forms_agree = true;  // per-phi difference within tolerance at every level
};

/// Residual suites under both weak formulations across dyadic grid
/// refinements of base_grid; the basis is built once from the base geometry
/// so the same test functions are used at every level.
EquivalenceReport check_equivalence(const FieldSampler& sample, double m,
                                    const SpaceTimeGrid& base_grid,
                                    int refinement_levels, int basis_count = 20,
                                    uint64_t basis_seed = 20240901);

std::string equivalence_report_csv(const EquivalenceReport& rep);

}  // namespace pmelab

#endif
