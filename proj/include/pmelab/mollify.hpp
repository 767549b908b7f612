#ifndef PMELAB_MOLLIFY_HPP
#define PMELAB_MOLLIFY_HPP

#include <optional>

#include "pmelab/field.hpp"

namespace pmelab {

/// Exponential time mollification [[u]]_h(x,t) = e^{-t/h} v0
/// + (1/h) int_0^t e^{(s-t)/h} u(x,s) ds.
struct MollifierParams {
  enum class V0Mode { Zero, InitialSlice, Custom };

  double h = 0.1;
  V0Mode v0_mode = V0Mode::Zero;
  std::vector<double> v0_custom;  // one value per spatial node, Custom mode only

  static MollifierParams zero_start(double h) { return {h, V0Mode::Zero, {}}; }
  static MollifierParams initial_slice(double h) { return {h, V0Mode::InitialSlice, {}}; }
  static MollifierParams custom(double h, std::vector<double> v0) {
    return {h, V0Mode::Custom, std::move(v0)};
  }
};

/// [[u]]_h via the exact recurrence for the piecewise-linear interpolant of u:
/// with q = e^{-dt/h} and A = h(1-q),
///   [[u]](t+dt) = q [[u]](t) + (A/dt - q) u(t) + (1 - A/dt) u(t+dt).
/// Both weights are nonnegative and sum to 1-q, so constants are fixed points
/// and the map is monotone; linear-in-t inputs are reproduced exactly.
ScalarField mollify_time(const ScalarField& u, const MollifierParams& p);

/// The derivative identity d/dt [[u]]_h = (u - [[u]]_h)/h, evaluated pointwise.
ScalarField mollify_derivative(const ScalarField& u, const MollifierParams& p);

}  // namespace pmelab

#endif
