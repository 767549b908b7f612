#include "pmelab/calculus.hpp"

#include <cmath>

namespace pmelab {

std::vector<Vec2> slice_gradient(const SpaceTimeGrid& g, const std::vector<double>& v) {
  if (static_cast<int>(v.size()) != g.num_nodes())
    throw std::invalid_argument("slice_gradient: size mismatch");
  std::vector<Vec2> out(v.size(), Vec2{0.0, 0.0});
  const int nx = g.nx[0], ny = g.nx[1];
  for (int iy = 0; iy < ny; ++iy) {
    for (int ix = 0; ix < nx; ++ix) {
      const int n = g.node(ix, iy);
      if (ix == 0)
        out[n][0] = (v[g.node(1, iy)] - v[n]) / g.dx[0];
      else if (ix == nx - 1)
        out[n][0] = (v[n] - v[g.node(nx - 2, iy)]) / g.dx[0];
      else
        out[n][0] = (v[g.node(ix + 1, iy)] - v[g.node(ix - 1, iy)]) / (2.0 * g.dx[0]);
      if (g.dim == 2) {
        if (iy == 0)
          out[n][1] = (v[g.node(ix, 1)] - v[n]) / g.dx[1];
        else if (iy == ny - 1)
          out[n][1] = (v[n] - v[g.node(ix, ny - 2)]) / g.dx[1];
        else
          out[n][1] = (v[g.node(ix, iy + 1)] - v[g.node(ix, iy - 1)]) / (2.0 * g.dx[1]);
      }
    }
  }
  return out;
}

std::vector<Vec2> discrete_gradient(const ScalarField& f, int t_index) {
  if (t_index < 0 || t_index >= f.grid().nt)
    throw std::out_of_range("discrete_gradient: t_index out of range");
  return slice_gradient(f.grid(), f.slice(t_index));
}

std::vector<double> slice_laplacian(const SpaceTimeGrid& g, const std::vector<double>& v) {
  if (static_cast<int>(v.size()) != g.num_nodes())
    throw std::invalid_argument("slice_laplacian: size mismatch");
  std::vector<double> out(v.size(), 0.0);
  const int nx = g.nx[0], ny = g.nx[1];
  const double ix2 = 1.0 / (g.dx[0] * g.dx[0]);
  const double iy2 = g.dim == 2 ? 1.0 / (g.dx[1] * g.dx[1]) : 0.0;
  for (int iy = 0; iy < ny; ++iy)
    for (int ix = 0; ix < nx; ++ix) {
      const int n = g.node(ix, iy);
      if (g.boundary_node(n)) continue;
      double l = (v[g.node(ix + 1, iy)] - 2.0 * v[n] + v[g.node(ix - 1, iy)]) * ix2;
      if (g.dim == 2)
        l += (v[g.node(ix, iy + 1)] - 2.0 * v[n] + v[g.node(ix, iy - 1)]) * iy2;
      out[n] = l;
    }
  // boundary nodes copy the nearest interior value
  for (int iy = 0; iy < ny; ++iy)
    for (int ix = 0; ix < nx; ++ix) {
      const int n = g.node(ix, iy);
      if (!g.boundary_node(n)) continue;
      int jx = std::min(std::max(ix, 1), nx - 2);
      int jy = g.dim == 2 ? std::min(std::max(iy, 1), ny - 2) : 0;
      out[n] = out[g.node(jx, jy)];
    }
  return out;
}

ScalarField time_derivative(const ScalarField& f) {
  const SpaceTimeGrid& g = f.grid();
  ScalarField out(g);
  for (int n = 0; n < g.num_nodes(); ++n) {
    out.at(0, n) = (f.at(1, n) - f.at(0, n)) / g.dt;
    out.at(g.nt - 1, n) = (f.at(g.nt - 1, n) - f.at(g.nt - 2, n)) / g.dt;
    for (int k = 1; k < g.nt - 1; ++k)
      out.at(k, n) = (f.at(k + 1, n) - f.at(k - 1, n)) / (2.0 * g.dt);
  }
  return out;
}

namespace {

double box_weight(int i, int i0, int i1, double spacing) {
  if (i0 == i1) return 0.0;  // zero-measure axis
  return (i == i0 || i == i1) ? 0.5 * spacing : spacing;
}

}  // namespace

double integrate(const ScalarField& f, const Region& region) {
  const SpaceTimeGrid& g = f.grid();
  const Region::IndexBox b = region.clip(g);
  if (b.empty()) throw std::invalid_argument("integrate: empty region");
  double sum = 0.0;
  for (int k = b.k0; k <= b.k1; ++k) {
    const double wt = box_weight(k, b.k0, b.k1, g.dt);
    if (wt == 0.0) return 0.0;
    double s = 0.0;
    for (int iy = b.iy0; iy <= b.iy1; ++iy) {
      const double wy = g.dim == 2 ? box_weight(iy, b.iy0, b.iy1, g.dx[1]) : 1.0;
      if (wy == 0.0) return 0.0;
      double row = 0.0;
      for (int ix = b.ix0; ix <= b.ix1; ++ix)
        row += box_weight(ix, b.ix0, b.ix1, g.dx[0]) * f.at(k, g.node(ix, iy));
      s += wy * row;
    }
    sum += wt * s;
  }
  return sum;
}

double integrate_slice(const SpaceTimeGrid& g, const std::vector<double>& v) {
  double sum = 0.0;
  for (int n = 0; n < g.num_nodes(); ++n) sum += trapezoid_space_weight(g, n) * v[n];
  return sum;
}

double integrate_slice_masked(const SpaceTimeGrid& g, const std::vector<double>& v,
                              const std::vector<char>& mask) {
  double sum = 0.0;
  for (int n = 0; n < g.num_nodes(); ++n)
    if (mask[n]) sum += trapezoid_space_weight(g, n) * v[n];
  return sum;
}

std::vector<char> ball_mask(const SpaceTimeGrid& g, double x0, double y0, double rho) {
  std::vector<char> mask(g.num_nodes(), 0);
  for (int n = 0; n < g.num_nodes(); ++n) {
    const double px = g.coord(n, 0) - x0;
    const double py = g.dim == 2 ? g.coord(n, 1) - y0 : 0.0;
    mask[n] = (px * px + py * py <= rho * rho) ? 1 : 0;
  }
  return mask;
}

double pow_nonneg(double s, double p) {
  if (s <= 0.0) return 0.0;
  return std::pow(s, p);
}

double trapezoid_time_weight(const SpaceTimeGrid& g, int k) {
  return (k == 0 || k == g.nt - 1) ? 0.5 * g.dt : g.dt;
}

double trapezoid_space_weight(const SpaceTimeGrid& g, int node) {
  const int ix = g.ix_of(node);
  double w = (ix == 0 || ix == g.nx[0] - 1) ? 0.5 * g.dx[0] : g.dx[0];
  if (g.dim == 2) {
    const int iy = g.iy_of(node);
    w *= (iy == 0 || iy == g.nx[1] - 1) ? 0.5 * g.dx[1] : g.dx[1];
  }
  return w;
}

}  // namespace pmelab
