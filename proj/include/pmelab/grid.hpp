#ifndef PMELAB_GRID_HPP
#define PMELAB_GRID_HPP

#include <array>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace pmelab {

/// Uniform tensor discretization of the space-time cylinder Omega x (0,T).
/// Spatial dimension is 1 or 2; nodes are vertex-centered, so the spacing
/// along axis a is (hi[a]-lo[a])/(nx[a]-1) and dt = T/(nt-1).
struct SpaceTimeGrid {
  int dim = 1;
  std::array<double, 2> lo{0.0, 0.0};
  std::array<double, 2> hi{1.0, 1.0};
  std::array<int, 2> nx{2, 1};  // nodes per axis; nx[1] == 1 when dim == 1
  int nt = 2;
  double T = 1.0;

  std::array<double, 2> dx{0.0, 0.0};
  double dt = 0.0;

  static SpaceTimeGrid make1d(double a, double b, int nodes, int steps, double horizon);
  static SpaceTimeGrid make2d(double ax, double bx, double ay, double by,
                              int nodes_x, int nodes_y, int steps, double horizon);

  int num_nodes() const { return nx[0] * nx[1]; }
  int node(int ix, int iy = 0) const { return ix + nx[0] * iy; }
  int ix_of(int n) const { return n % nx[0]; }
  int iy_of(int n) const { return n / nx[0]; }

  double x(int ix) const { return lo[0] + ix * dx[0]; }
  double y(int iy) const { return lo[1] + iy * dx[1]; }
  double coord(int n, int axis) const {
    return axis == 0 ? x(ix_of(n)) : y(iy_of(n));
  }
  double t(int k) const { return k * dt; }

  bool boundary_node(int n) const {
    const int ix = ix_of(n), iy = iy_of(n);
    if (ix == 0 || ix == nx[0] - 1) return true;
    if (dim == 2 && (iy == 0 || iy == nx[1] - 1)) return true;
    return false;
  }

  bool same_layout(const SpaceTimeGrid& o) const {
    return dim == o.dim && nx == o.nx && nt == o.nt && lo == o.lo && hi == o.hi &&
           T == o.T;
  }

  void validate() const;
};

/// Interior sub-cylinder U x (t1,t2), strictly inside the grid's cylinder.
struct Region {
  std::array<double, 2> xlo{0.0, 0.0};
  std::array<double, 2> xhi{0.0, 0.0};
  double t1 = 0.0;
  double t2 = 0.0;

  static Region box1d(double a, double b, double t1, double t2);
  static Region box2d(double ax, double bx, double ay, double by, double t1, double t2);
  /// The whole cylinder of a grid (not strictly interior; used for global integrals).
  static Region full(const SpaceTimeGrid& g);

  bool contains(double px, double py, double pt) const {
    return px >= xlo[0] && px <= xhi[0] && py >= xlo[1] && py <= xhi[1] &&
           pt >= t1 && pt <= t2;
  }

  /// Throws unless the region has positive distance to the parabolic boundary.
  void require_interior(const SpaceTimeGrid& g) const;

  /// Node/step index ranges covering the region (bounds snapped to nodes).
  struct IndexBox {
    int ix0, ix1, iy0, iy1, k0, k1;  // inclusive
    bool empty() const { return ix1 < ix0 || iy1 < iy0 || k1 < k0; }
  };
  IndexBox clip(const SpaceTimeGrid& g) const;
};

}  // namespace pmelab

#endif
