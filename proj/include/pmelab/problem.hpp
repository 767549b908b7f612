#ifndef PMELAB_PROBLEM_HPP
#define PMELAB_PROBLEM_HPP

#include "pmelab/field.hpp"

namespace pmelab {

/// Obstacle-problem data: obstacle psi, boundary data g (stored on the full
/// grid; only boundary nodes are read), initial slice u0, and the exponent m.
struct ObstacleProblemSpec {
  ScalarField psi;
  ScalarField g;
  std::vector<double> u0;
  double m = 2.0;
};

/// Parameters of the approximation chain: data lifts eps and gamma, penalty
/// width delta, mollifier width h. All must lie in (0,1] with eps+gamma <= 1.
struct RegularizationParams {
  double eps = 0.05;
  double gamma = 0.05;
  double delta = 0.05;
  double h = 0.05;

  void validate() const {
    auto in_unit = [](double v) { return v > 0.0 && v <= 1.0; };
    if (!in_unit(eps) || !in_unit(gamma) || !in_unit(delta) || !in_unit(h))
      throw std::invalid_argument("regularization: parameters must lie in (0,1]");
    if (eps + gamma > 1.0)
      throw std::invalid_argument("regularization: need eps + gamma <= 1");
  }
};

}  // namespace pmelab

#endif
