#include "pmelab/cutoff.hpp"

#include <algorithm>
#include <cmath>

namespace pmelab {

double smoothstep3(double t) {
  t = std::clamp(t, 0.0, 1.0);
  return t * t * (3.0 - 2.0 * t);
}

double smoothstep3_deriv(double t) {
  if (t <= 0.0 || t >= 1.0) return 0.0;
  return 6.0 * t * (1.0 - t);
}

double smoothstep5(double t) {
  t = std::clamp(t, 0.0, 1.0);
  return t * t * t * (10.0 + t * (-15.0 + 6.0 * t));
}

double smoothstep5_deriv(double t) {
  if (t <= 0.0 || t >= 1.0) return 0.0;
  const double u = t * (1.0 - t);
  return 30.0 * u * u;
}

CutoffFunction CutoffFunction::bump(int dim, Region support, Region plateau,
                                    int degree) {
  CutoffFunction z;
  z.kind_ = CutoffKind::SpaceTimeBump;
  z.dim_ = dim;
  z.support_ = support;
  z.plateau_ = plateau;
  z.degree_ = degree;
  for (int a = 0; a < dim; ++a) {
    if (!(support.xlo[a] < plateau.xlo[a] && plateau.xlo[a] < plateau.xhi[a] &&
          plateau.xhi[a] < support.xhi[a]))
      throw std::invalid_argument("cutoff: plateau must be strictly inside support");
  }
  if (!(support.t1 < plateau.t1 && plateau.t1 < plateau.t2 && plateau.t2 < support.t2))
    throw std::invalid_argument("cutoff: plateau must be strictly inside support (time)");
  return z;
}

CutoffFunction CutoffFunction::time_ramp(double hold_until, double t_end,
                                         int degree) {
  if (!(hold_until >= 0.0 && hold_until < t_end))
    throw std::invalid_argument("cutoff: need 0 <= hold_until < t_end");
  CutoffFunction z;
  z.kind_ = CutoffKind::TimeRamp;
  z.dim_ = 0;
  z.support_ = Region::box1d(0.0, 0.0, 0.0, t_end);
  z.plateau_ = Region::box1d(0.0, 0.0, 0.0, hold_until);
  z.degree_ = degree;
  return z;
}

double CutoffFunction::axis_profile(double s, double s0, double p0, double p1,
                                    double s1, double* deriv) const {
  const auto S = degree_ >= 5 ? smoothstep5 : smoothstep3;
  const auto dS = degree_ >= 5 ? smoothstep5_deriv : smoothstep3_deriv;
  *deriv = 0.0;
  if (s <= s0 || s >= s1) return 0.0;
  if (s < p0) {
    const double w = p0 - s0;
    *deriv = dS((s - s0) / w) / w;
    return S((s - s0) / w);
  }
  if (s > p1) {
    const double w = s1 - p1;
    *deriv = -dS((s1 - s) / w) / w;
    return S((s1 - s) / w);
  }
  return 1.0;
}

double CutoffFunction::value(double x, double y, double t) const {
  if (kind_ == CutoffKind::TimeRamp) {
    if (t <= plateau_.t2) return 1.0;
    if (t >= support_.t2) return 0.0;
    const double w = support_.t2 - plateau_.t2;
    const auto S = degree_ >= 5 ? smoothstep5 : smoothstep3;
    return S((support_.t2 - t) / w);
  }
  double d;
  double v = axis_profile(t, support_.t1, plateau_.t1, plateau_.t2, support_.t2, &d);
  v *= axis_profile(x, support_.xlo[0], plateau_.xlo[0], plateau_.xhi[0],
                    support_.xhi[0], &d);
  if (dim_ == 2)
    v *= axis_profile(y, support_.xlo[1], plateau_.xlo[1], plateau_.xhi[1],
                      support_.xhi[1], &d);
  return v;
}

double CutoffFunction::dt(double x, double y, double t) const {
  if (kind_ == CutoffKind::TimeRamp) {
    if (t <= plateau_.t2 || t >= support_.t2) return 0.0;
    const double w = support_.t2 - plateau_.t2;
    const auto dS = degree_ >= 5 ? smoothstep5_deriv : smoothstep3_deriv;
    return -dS((support_.t2 - t) / w) / w;
  }
  double dT, dX, dY = 0.0;
  const double vT = axis_profile(t, support_.t1, plateau_.t1, plateau_.t2,
                                 support_.t2, &dT);
  double v = axis_profile(x, support_.xlo[0], plateau_.xlo[0], plateau_.xhi[0],
                          support_.xhi[0], &dX);
  if (dim_ == 2)
    v *= axis_profile(y, support_.xlo[1], plateau_.xlo[1], plateau_.xhi[1],
                      support_.xhi[1], &dY);
  (void)vT;
  return dT * v;
}

std::array<double, 2> CutoffFunction::grad(double x, double y, double t) const {
  if (kind_ == CutoffKind::TimeRamp) return {0.0, 0.0};
  double dT, dX, dY;
  const double vT = axis_profile(t, support_.t1, plateau_.t1, plateau_.t2,
                                 support_.t2, &dT);
  const double vX = axis_profile(x, support_.xlo[0], plateau_.xlo[0],
                                 plateau_.xhi[0], support_.xhi[0], &dX);
  double vY = 1.0;
  dY = 0.0;
  if (dim_ == 2)
    vY = axis_profile(y, support_.xlo[1], plateau_.xlo[1], plateau_.xhi[1],
                      support_.xhi[1], &dY);
  return {vT * dX * vY, vT * vX * dY};
}

double CutoffFunction::gradient_bound() const {
  const double peak = degree_ >= 5 ? 15.0 / 8.0 : 1.5;
  double worst = 0.0;
  auto widths = [&](double s0, double p0, double p1, double s1) {
    worst = std::max(worst, peak / (p0 - s0));
    worst = std::max(worst, peak / (s1 - p1));
  };
  if (kind_ == CutoffKind::TimeRamp) {
    return peak / (support_.t2 - plateau_.t2);
  }
  widths(support_.t1, plateau_.t1, plateau_.t2, support_.t2);
  for (int a = 0; a < dim_; ++a)
    widths(support_.xlo[a], plateau_.xlo[a], plateau_.xhi[a], support_.xhi[a]);
  return worst;
}

}  // namespace pmelab
