#include "pmelab/mollify.hpp"

#include <cmath>

namespace pmelab {

namespace {

double v0_value(const ScalarField& u, const MollifierParams& p, int node) {
  switch (p.v0_mode) {
    case MollifierParams::V0Mode::Zero:
      return 0.0;
    case MollifierParams::V0Mode::InitialSlice:
      return u.at(0, node);
    case MollifierParams::V0Mode::Custom:
      if (static_cast<int>(p.v0_custom.size()) != u.grid().num_nodes())
        throw std::invalid_argument("mollify: custom v0 size mismatch");
      return p.v0_custom[node];
  }
  return 0.0;
}

}  // namespace

ScalarField mollify_time(const ScalarField& u, const MollifierParams& p) {
  if (!(p.h > 0.0)) throw std::invalid_argument("mollify: h must be positive");
  const SpaceTimeGrid& g = u.grid();
  const double q = std::exp(-g.dt / p.h);
  const double A = p.h * (1.0 - q);
  const double w_old = A / g.dt - q;
  const double w_new = 1.0 - A / g.dt;
  ScalarField out(g);
  for (int n = 0; n < g.num_nodes(); ++n) {
    double m = v0_value(u, p, n);
    out.at(0, n) = m;
    for (int k = 1; k < g.nt; ++k) {
      m = q * m + w_old * u.at(k - 1, n) + w_new * u.at(k, n);
      out.at(k, n) = m;
    }
  }
  return out;
}

ScalarField mollify_derivative(const ScalarField& u, const MollifierParams& p) {
  if (!(p.h > 0.0)) throw std::invalid_argument("mollify: h must be positive");
  const ScalarField m = mollify_time(u, p);
  const SpaceTimeGrid& g = u.grid();
  ScalarField out(g);
  for (int k = 0; k < g.nt; ++k)
    for (int n = 0; n < g.num_nodes(); ++n)
      out.at(k, n) = (u.at(k, n) - m.at(k, n)) / p.h;
  return out;
}

}  // namespace pmelab
