#ifndef PMELAB_CUTOFF_HPP
#define PMELAB_CUTOFF_HPP

#include <array>

#include "pmelab/grid.hpp"

namespace pmelab {

/// Smoothstep helpers: cubic is C^1, quintic is C^2. Argument clamped to [0,1].
double smoothstep3(double t);
double smoothstep3_deriv(double t);
double smoothstep5(double t);
double smoothstep5_deriv(double t);

enum class CutoffKind { SpaceTimeBump, TimeRamp };

/// Piecewise-polynomial cut-off: 0 <= zeta <= 1, zeta = 1 on the plateau,
/// zeta = 0 outside the support, with closed-form space and time derivatives.
/// The time-only variant is a ramp alpha(t) with alpha(T) = 0.
class CutoffFunction {
 public:
  /// Tensor bump: per-axis smoothstep ramps between support and plateau edges.
  static CutoffFunction bump(int dim, Region support, Region plateau, int degree = 3);
  /// alpha = 1 on [0, hold_until], smoothstep down to 0 at t_end, 0 afterwards.
  static CutoffFunction time_ramp(double hold_until, double t_end, int degree = 3);

  CutoffKind kind() const { return kind_; }
  const Region& support() const { return support_; }
  const Region& plateau() const { return plateau_; }
  int degree() const { return degree_; }

  double value(double x, double y, double t) const;
  double dt(double x, double y, double t) const;
  std::array<double, 2> grad(double x, double y, double t) const;

  /// Max of |d/ds smoothstep| / ramp width over all ramps; realizes the
  /// C / dist(plateau, boundary of support) bound.
  double gradient_bound() const;

 private:
  CutoffKind kind_ = CutoffKind::SpaceTimeBump;
  int dim_ = 1;
  Region support_;
  Region plateau_;
  int degree_ = 3;

  double axis_profile(double s, double s0, double p0, double p1, double s1,
                      double* deriv) const;
};

}  // namespace pmelab

#endif
