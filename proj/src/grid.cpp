#include "pmelab/grid.hpp"

#include <cmath>

namespace pmelab {

SpaceTimeGrid SpaceTimeGrid::make1d(double a, double b, int nodes, int steps,
                                    double horizon) {
  SpaceTimeGrid g;
  g.dim = 1;
  g.lo = {a, 0.0};
  g.hi = {b, 0.0};
  g.nx = {nodes, 1};
  g.nt = steps;
  g.T = horizon;
  g.dx = {(b - a) / (nodes - 1), 0.0};
  g.dt = horizon / (steps - 1);
  g.validate();
  return g;
}

SpaceTimeGrid SpaceTimeGrid::make2d(double ax, double bx, double ay, double by,
                                    int nodes_x, int nodes_y, int steps,
                                    double horizon) {
  SpaceTimeGrid g;
  g.dim = 2;
  g.lo = {ax, ay};
  g.hi = {bx, by};
  g.nx = {nodes_x, nodes_y};
  g.nt = steps;
  g.T = horizon;
  g.dx = {(bx - ax) / (nodes_x - 1), (by - ay) / (nodes_y - 1)};
  g.dt = horizon / (steps - 1);
  g.validate();
  return g;
}

void SpaceTimeGrid::validate() const {
  if (dim != 1 && dim != 2) throw std::invalid_argument("grid: dim must be 1 or 2");
  if (nt < 2) throw std::invalid_argument("grid: nt must be >= 2");
  if (T <= 0.0) throw std::invalid_argument("grid: T must be positive");
  for (int a = 0; a < dim; ++a) {
    if (nx[a] < 3) throw std::invalid_argument("grid: need at least 3 nodes per axis");
    if (hi[a] <= lo[a]) throw std::invalid_argument("grid: empty extent");
    if (dx[a] <= 0.0) throw std::invalid_argument("grid: dx must be positive");
  }
  if (dim == 1 && nx[1] != 1) throw std::invalid_argument("grid: nx[1] must be 1 in 1d");
  if (dt <= 0.0) throw std::invalid_argument("grid: dt must be positive");
}

Region Region::box1d(double a, double b, double t1, double t2) {
  Region r;
  r.xlo = {a, 0.0};
  r.xhi = {b, 0.0};
  r.t1 = t1;
  r.t2 = t2;
  return r;
}

Region Region::box2d(double ax, double bx, double ay, double by, double t1,
                     double t2) {
  Region r;
  r.xlo = {ax, ay};
  r.xhi = {bx, by};
  r.t1 = t1;
  r.t2 = t2;
  return r;
}

Region Region::full(const SpaceTimeGrid& g) {
  Region r;
  r.xlo = g.lo;
  r.xhi = g.hi;
  if (g.dim == 1) r.xlo[1] = r.xhi[1] = 0.0;
  r.t1 = 0.0;
  r.t2 = g.T;
  return r;
}

void Region::require_interior(const SpaceTimeGrid& g) const {
  for (int a = 0; a < g.dim; ++a) {
    if (!(xlo[a] > g.lo[a] && xhi[a] < g.hi[a] && xlo[a] < xhi[a]))
      throw std::invalid_argument("region: not strictly interior in space");
  }
  if (!(t1 > 0.0 && t2 < g.T && t1 < t2))
    throw std::invalid_argument("region: not strictly interior in time");
}

Region::IndexBox Region::clip(const SpaceTimeGrid& g) const {
  const double snap = 1e-9;
  IndexBox b{};
  b.ix0 = static_cast<int>(std::ceil((xlo[0] - g.lo[0]) / g.dx[0] - snap));
  b.ix1 = static_cast<int>(std::floor((xhi[0] - g.lo[0]) / g.dx[0] + snap));
  b.ix0 = std::max(b.ix0, 0);
  b.ix1 = std::min(b.ix1, g.nx[0] - 1);
  if (g.dim == 2) {
    b.iy0 = static_cast<int>(std::ceil((xlo[1] - g.lo[1]) / g.dx[1] - snap));
    b.iy1 = static_cast<int>(std::floor((xhi[1] - g.lo[1]) / g.dx[1] + snap));
    b.iy0 = std::max(b.iy0, 0);
    b.iy1 = std::min(b.iy1, g.nx[1] - 1);
  } else {
    b.iy0 = 0;
    b.iy1 = 0;
  }
  b.k0 = static_cast<int>(std::ceil(t1 / g.dt - snap));
  b.k1 = static_cast<int>(std::floor(t2 / g.dt + snap));
  b.k0 = std::max(b.k0, 0);
  b.k1 = std::min(b.k1, g.nt - 1);
  return b;
}

}  // namespace pmelab
