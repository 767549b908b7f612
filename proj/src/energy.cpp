#include "pmelab/energy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "pmelab/calculus.hpp"
#include "pmelab/mollify.hpp"

namespace pmelab {

namespace {

constexpr double kVacuumFloor = 1e-12;

// grad u^{(m+1)/2} = (m+1)/(2m) u^{(1-m)/2} grad u^m on {u > floor}, else 0.
std::vector<Vec2> grad_umid_slice(const SpaceTimeGrid& g, const std::vector<double>& u,
                                  double m) {
  std::vector<double> um(u.size());
  for (size_t n = 0; n < u.size(); ++n) um[n] = pow_nonneg(u[n], m);
  std::vector<Vec2> gum = slice_gradient(g, um);
  const double c = (m + 1.0) / (2.0 * m);
  for (size_t n = 0; n < u.size(); ++n) {
    const double f = u[n] > kVacuumFloor ? c * std::pow(u[n], (1.0 - m) / 2.0) : 0.0;
    gum[n][0] *= f;
    gum[n][1] *= f;
  }
  return gum;
}

}  // namespace

TestFunctionBasis TestFunctionBasis::make(int dim, std::array<double, 2> lo,
                                          std::array<double, 2> hi, double T,
                                          int count, uint64_t seed,
                                          const Region* within) {
  TestFunctionBasis b;
  b.dim_ = dim;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  std::array<double, 2> blo = lo, bhi = hi;
  double bt1 = 0.0, bt2 = T;
  if (within) {
    blo = within->xlo;
    bhi = within->xhi;
    bt1 = within->t1;
    bt2 = within->t2;
  } else {
    for (int a = 0; a < dim; ++a) {
      const double w = hi[a] - lo[a];
      blo[a] += 0.02 * w;
      bhi[a] -= 0.02 * w;
    }
    bt1 = 0.02 * T;
    bt2 = 0.98 * T;
  }

  for (int i = 0; i < count; ++i) {
    // support half-widths between 35% and 60% of the available box; wide
    // ramps keep the trapezoid error of residual quadratures small
    std::array<double, 2> sh{0.0, 0.0}, c{0.0, 0.0};
    for (int a = 0; a < dim; ++a) {
      const double w = bhi[a] - blo[a];
      sh[a] = (0.35 + 0.25 * unit(rng)) * 0.5 * w;
      c[a] = blo[a] + sh[a] + unit(rng) * (w - 2.0 * sh[a]);
    }
    const double wt = bt2 - bt1;
    const double sht = (0.35 + 0.25 * unit(rng)) * 0.5 * wt;
    const double ct = bt1 + sht + unit(rng) * (wt - 2.0 * sht);
    const double plat = 0.30 + 0.25 * unit(rng);  // plateau fraction of support

    Region support, plateau;
    support.t1 = ct - sht;
    support.t2 = ct + sht;
    plateau.t1 = ct - plat * sht;
    plateau.t2 = ct + plat * sht;
    for (int a = 0; a < dim; ++a) {
      support.xlo[a] = c[a] - sh[a];
      support.xhi[a] = c[a] + sh[a];
      plateau.xlo[a] = c[a] - plat * sh[a];
      plateau.xhi[a] = c[a] + plat * sh[a];
    }
    b.bumps_.push_back(CutoffFunction::bump(dim, support, plateau, 3));
  }

  // normalization on a fixed reference quadrature, independent of any field grid
  const int ns = dim == 2 ? 96 : 384;
  const int ntq = 192;
  for (const CutoffFunction& phi : b.bumps_) {
    const Region& s = phi.support();
    double total = 0.0;
    const double hx = (s.xhi[0] - s.xlo[0]) / ns;
    const double hy = dim == 2 ? (s.xhi[1] - s.xlo[1]) / ns : 1.0;
    const double ht = (s.t2 - s.t1) / ntq;
    const int nyq = dim == 2 ? ns : 0;
    for (int k = 0; k <= ntq; ++k) {
      const double t = s.t1 + k * ht;
      const double wk = (k == 0 || k == ntq) ? 0.5 : 1.0;
      for (int jy = 0; jy <= nyq; ++jy) {
        const double y = dim == 2 ? s.xlo[1] + jy * hy : 0.0;
        const double wy = dim == 2 ? ((jy == 0 || jy == nyq) ? 0.5 : 1.0) : 1.0;
        for (int jx = 0; jx <= ns; ++jx) {
          const double x = s.xlo[0] + jx * hx;
          const double wx = (jx == 0 || jx == ns) ? 0.5 : 1.0;
          const Vec2 gr = phi.grad(x, y, t);
          const double dens = std::fabs(phi.value(x, y, t)) +
                              std::fabs(phi.dt(x, y, t)) +
                              std::hypot(gr[0], gr[1]);
          total += wk * wy * wx * dens;
        }
      }
    }
    total *= hx * ht * (dim == 2 ? hy : 1.0);
    b.norms_.push_back(total > 0.0 ? total : 1.0);
  }
  return b;
}

TestFunctionBasis TestFunctionBasis::make(const SpaceTimeGrid& g, int count,
                                          uint64_t seed, const Region* within) {
  return make(g.dim, g.lo, g.hi, g.T, count, seed, within);
}

double TestFunctionBasis::value(int i, double x, double y, double t) const {
  return bumps_[i].value(x, y, t) / norms_[i];
}

double TestFunctionBasis::dt(int i, double x, double y, double t) const {
  return bumps_[i].dt(x, y, t) / norms_[i];
}

Vec2 TestFunctionBasis::grad(int i, double x, double y, double t) const {
  Vec2 g = bumps_[i].grad(x, y, t);
  return {g[0] / norms_[i], g[1] / norms_[i]};
}

ScalarField discrete_obstacle_forcing(const ScalarField& psi, double m) {
  const SpaceTimeGrid& g = psi.grid();
  ScalarField psim = psi.map([m](double s) { return pow_nonneg(s, m); });
  ScalarField out(g);
  for (int k = 0; k < g.nt; ++k) {
    const int kk = std::max(k, 1);
    const std::vector<double> lap = slice_laplacian(g, psim.slice(kk));
    for (int n = 0; n < g.num_nodes(); ++n)
      out.at(k, n) = (psi.at(kk, n) - psi.at(kk - 1, n)) / g.dt - lap[n];
  }
  return out;
}

namespace {

double data_energy(const ObstacleProblemSpec& spec, bool with_forcing,
                   bool with_g2m) {
  const SpaceTimeGrid& g = spec.g.grid();
  const double m = spec.m;

  double sup_g = 0.0;
  for (int k = 0; k < g.nt; ++k) {
    std::vector<double> s = spec.g.slice(k);
    for (double& v : s) v = pow_nonneg(v, m + 1.0);
    sup_g = std::max(sup_g, integrate_slice(g, s));
  }
  std::vector<double> u0p = spec.u0;
  for (double& v : u0p) v = pow_nonneg(v, m + 1.0);
  const double int_u0 = integrate_slice(g, u0p);

  ScalarField gm = spec.g.map([m](double s) { return pow_nonneg(s, m); });
  ScalarField dtgm = time_derivative(gm);
  double bulk = 0.0;
  for (int k = 0; k < g.nt; ++k) {
    const double wt = trapezoid_time_weight(g, k);
    const std::vector<Vec2> gg = slice_gradient(g, gm.slice(k));
    for (int n = 0; n < g.num_nodes(); ++n) {
      const double ws = trapezoid_space_weight(g, n);
      double dens = gg[n][0] * gg[n][0] + gg[n][1] * gg[n][1] +
                    std::pow(std::fabs(dtgm.at(k, n)), (m + 1.0) / m);
      if (with_g2m) dens += pow_nonneg(spec.g.at(k, n), 2.0 * m);
      bulk += wt * ws * dens;
    }
  }
  if (with_forcing) {
    const ScalarField forcing = discrete_obstacle_forcing(spec.psi, m);
    for (int k = 0; k < g.nt; ++k) {
      const double wt = trapezoid_time_weight(g, k);
      for (int n = 0; n < g.num_nodes(); ++n) {
        const double fp = std::max(forcing.at(k, n), 0.0);
        bulk += wt * trapezoid_space_weight(g, n) * fp * fp;
      }
    }
  }
  return sup_g + int_u0 + bulk;
}

}  // namespace

double constant_A(const ObstacleProblemSpec& spec) {
  return data_energy(spec, /*with_forcing=*/true, /*with_g2m=*/false);
}

double constant_Atilde(const ObstacleProblemSpec& spec) {
  return data_energy(spec, /*with_forcing=*/false, /*with_g2m=*/true);
}

EnergyReport energy_report(const ScalarField& u, double m, const Region& interior,
                           const ObstacleProblemSpec* spec) {
  const SpaceTimeGrid& g = u.grid();
  EnergyReport rep;
  for (int k = 0; k < g.nt; ++k) {
    std::vector<double> s = u.slice(k);
    for (double& v : s) v = pow_nonneg(v, m + 1.0);
    rep.sup_Lm1 = std::max(rep.sup_Lm1, integrate_slice(g, s));
  }
  ScalarField um = u.map([m](double s) { return pow_nonneg(s, m); });
  const Region::IndexBox box = interior.clip(g);
  for (int k = 0; k < g.nt; ++k) {
    const double wt = trapezoid_time_weight(g, k);
    const std::vector<Vec2> gum = slice_gradient(g, um.slice(k));
    for (int n = 0; n < g.num_nodes(); ++n)
      rep.grad_um_sq += wt * trapezoid_space_weight(g, n) *
                        (gum[n][0] * gum[n][0] + gum[n][1] * gum[n][1]);
    if (k >= box.k0 && k <= box.k1) {
      const std::vector<Vec2> gmid = grad_umid_slice(g, u.slice(k), m);
      const double wtt = (k == box.k0 || k == box.k1) ? 0.5 * g.dt : g.dt;
      for (int iy = box.iy0; iy <= box.iy1; ++iy)
        for (int ix = box.ix0; ix <= box.ix1; ++ix) {
          const int n = g.node(ix, iy);
          double ws = (ix == box.ix0 || ix == box.ix1) ? 0.5 * g.dx[0] : g.dx[0];
          if (g.dim == 2)
            ws *= (iy == box.iy0 || iy == box.iy1) ? 0.5 * g.dx[1] : g.dx[1];
          rep.grad_umid_sq +=
              wtt * ws * (gmid[n][0] * gmid[n][0] + gmid[n][1] * gmid[n][1]);
        }
    }
  }
  if (spec) {
    rep.A = constant_A(*spec);
    rep.A_tilde = constant_Atilde(*spec);
    rep.ratio_energy = (rep.sup_Lm1 + rep.grad_um_sq) / std::max(rep.A, 1e-12);
    rep.ratio_grad = rep.grad_umid_sq / (rep.A + 1.0);
  }
  return rep;
}

CaccioppoliResult caccioppoli_check(const ScalarField& u, double M,
                                    const CutoffFunction& zeta, double m) {
  const SpaceTimeGrid& g = u.grid();
  CaccioppoliResult r;
  for (int k = 0; k < g.nt; ++k) {
    const double t = g.t(k);
    const double wt = trapezoid_time_weight(g, k);
    const std::vector<double> us = u.slice(k);
    const std::vector<Vec2> gmid = grad_umid_slice(g, us, m);
    for (int n = 0; n < g.num_nodes(); ++n) {
      const double x = g.coord(n, 0), y = g.coord(n, 1);
      const double z = zeta.value(x, y, t);
      if (z <= 0.0) continue;
      const double uv = us[n];
      if (uv > M + 1e-12)
        throw std::invalid_argument("caccioppoli_check: u exceeds M on supp zeta");
      const double w = wt * trapezoid_space_weight(g, n);
      r.lhs += w * z * z * (gmid[n][0] * gmid[n][0] + gmid[n][1] * gmid[n][1]);
      const Vec2 gz = zeta.grad(x, y, t);
      const double gap = M - uv;
      r.rhs += w * (gap * gap * z * std::fabs(zeta.dt(x, y, t)) +
                    pow_nonneg(uv, m - 1.0) * gap * gap *
                        (gz[0] * gz[0] + gz[1] * gz[1]));
    }
  }
  if (r.rhs > 0.0)
    r.ratio = r.lhs / r.rhs;
  else
    r.ratio = r.lhs > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
  return r;
}

SobolevResult sobolev_check(const ScalarField& v, double p, double r, double x0,
                            double y0, double rho, double t1, double t2) {
  if (!(p > 1.0) || !(r >= 1.0))
    throw std::invalid_argument("sobolev_check: need p in (1,inf), r in [1,inf)");
  const SpaceTimeGrid& g = v.grid();
  const int k0 = std::max(0, static_cast<int>(std::ceil(t1 / g.dt - 1e-9)));
  const int k1 = std::min(g.nt - 1, static_cast<int>(std::floor(t2 / g.dt + 1e-9)));
  if (k1 <= k0) throw std::invalid_argument("sobolev_check: degenerate time window");
  const std::vector<char> mask = ball_mask(g, x0, y0, rho);

  SobolevResult out;
  out.ell = p * (g.dim + r) / g.dim;
  double sup_r = 0.0;
  double grad_part = 0.0;
  for (int k = k0; k <= k1; ++k) {
    const double wt = (k == k0 || k == k1) ? 0.5 * g.dt : g.dt;
    const std::vector<double> vs = v.slice(k);
    const std::vector<Vec2> gv = slice_gradient(g, vs);
    double slice_r = 0.0;
    for (int n = 0; n < g.num_nodes(); ++n) {
      if (!mask[n]) continue;
      const double ws = trapezoid_space_weight(g, n);
      const double av = std::fabs(vs[n]);
      out.lhs += wt * ws * std::pow(av, out.ell);
      grad_part += wt * ws * (std::pow(av / rho, p) +
                              std::pow(std::hypot(gv[n][0], gv[n][1]), p));
      slice_r += ws * std::pow(av, r);
    }
    sup_r = std::max(sup_r, slice_r);
  }
  out.rhs_without_C = grad_part * std::pow(sup_r, p / g.dim);
  return out;
}

std::vector<double> weak_residual(const ScalarField& u, double m,
                                  const TestFunctionBasis& basis, WeakForm form) {
  const SpaceTimeGrid& g = u.grid();
  std::vector<double> res(basis.size(), 0.0);
  for (int k = 0; k < g.nt; ++k) {
    const double t = g.t(k);
    const double wt = trapezoid_time_weight(g, k);
    const std::vector<double> us = u.slice(k);
    std::vector<Vec2> flux;
    if (form == WeakForm::GradUm) {
      std::vector<double> um(us.size());
      for (size_t n = 0; n < us.size(); ++n) um[n] = pow_nonneg(us[n], m);
      flux = slice_gradient(g, um);
    } else {
      std::vector<double> umid(us.size());
      for (size_t n = 0; n < us.size(); ++n)
        umid[n] = pow_nonneg(us[n], (m + 1.0) / 2.0);
      flux = slice_gradient(g, umid);
      const double c = 2.0 * m / (m + 1.0);
      for (size_t n = 0; n < us.size(); ++n) {
        const double f = c * pow_nonneg(us[n], (m - 1.0) / 2.0);
        flux[n][0] *= f;
        flux[n][1] *= f;
      }
    }
    for (int n = 0; n < g.num_nodes(); ++n) {
      const double w = wt * trapezoid_space_weight(g, n);
      const double x = g.coord(n, 0), y = g.coord(n, 1);
      for (int i = 0; i < basis.size(); ++i) {
        if (!basis.bump(i).support().contains(x, y, t)) continue;
        const Vec2 gp = basis.grad(i, x, y, t);
        res[i] += w * (-us[n] * basis.dt(i, x, y, t) +
                       flux[n][0] * gp[0] + flux[n][1] * gp[1]);
      }
    }
  }
  return res;
}

std::vector<double> regularized_residual(const ScalarField& u, double m, double h,
                                         const TestFunctionBasis& basis,
                                         const ScalarField* penalty_source,
                                         const std::vector<double>* u0) {
  if (!(h > 0.0)) throw std::invalid_argument("regularized_residual: h must be > 0");
  const SpaceTimeGrid& g = u.grid();
  const MollifierParams mp = MollifierParams::zero_start(h);
  const ScalarField dtMu = mollify_derivative(u, mp);
  const ScalarField um = u.map([m](double s) { return pow_nonneg(s, m); });
  const ScalarField Mum = mollify_time(um, mp);
  ScalarField Msrc;
  if (penalty_source) Msrc = mollify_time(*penalty_source, mp);
  const std::vector<double> init = u0 ? *u0 : u.slice(0);

  std::vector<double> res(basis.size(), 0.0);
  for (int k = 0; k < g.nt; ++k) {
    const double t = g.t(k);
    const double wt = trapezoid_time_weight(g, k);
    const std::vector<Vec2> gMum = slice_gradient(g, Mum.slice(k));
    const double kern = std::exp(-t / h) / h;
    for (int n = 0; n < g.num_nodes(); ++n) {
      const double w = wt * trapezoid_space_weight(g, n);
      const double x = g.coord(n, 0), y = g.coord(n, 1);
      for (int i = 0; i < basis.size(); ++i) {
        if (!basis.bump(i).support().contains(x, y, t)) continue;
        const double phi = basis.value(i, x, y, t);
        const Vec2 gp = basis.grad(i, x, y, t);
        double val = dtMu.at(k, n) * phi + gMum[n][0] * gp[0] + gMum[n][1] * gp[1];
        val -= init[n] * kern * phi;
        if (penalty_source) val -= Msrc.at(k, n) * phi;
        res[i] += w * val;
      }
    }
  }
  return res;
}

double variational_residual(const ScalarField& u, const ScalarField& v,
                            const CutoffFunction& alpha,
                            const ObstacleProblemSpec& spec) {
  u.check_same_grid(v);
  const SpaceTimeGrid& g = u.grid();
  const double m = spec.m;
  if (alpha.value(0.0, 0.0, g.T) > 1e-14)
    throw std::invalid_argument("variational_residual: alpha(T) must vanish");
  for (int k = 0; k < g.nt; ++k)
    for (int n = 0; n < g.num_nodes(); ++n) {
      if (v.at(k, n) < spec.psi.at(k, n) - 1e-9)
        throw std::invalid_argument("variational_residual: comparison map below obstacle");
      if (g.boundary_node(n) && std::fabs(v.at(k, n) - u.at(k, n)) > 1e-8)
        throw std::invalid_argument(
            "variational_residual: comparison map has different boundary data");
    }

  const ScalarField um = u.map([m](double s) { return pow_nonneg(s, m); });
  const ScalarField vm = v.map([m](double s) { return pow_nonneg(s, m); });
  const ScalarField dtvm = time_derivative(vm);

  double total = 0.0;
  for (int k = 0; k < g.nt; ++k) {
    const double t = g.t(k);
    const double wt = trapezoid_time_weight(g, k);
    const double a = alpha.value(0.0, 0.0, t);
    const double ap = alpha.dt(0.0, 0.0, t);
    const std::vector<Vec2> gum = slice_gradient(g, um.slice(k));
    const std::vector<Vec2> gvm = slice_gradient(g, vm.slice(k));
    for (int n = 0; n < g.num_nodes(); ++n) {
      const double w = wt * trapezoid_space_weight(g, n);
      const double uu = u.at(k, n);
      total += w * (ap * (pow_nonneg(uu, m + 1.0) / (m + 1.0) - uu * vm.at(k, n)) -
                    a * uu * dtvm.at(k, n));
      total += w * a * (gum[n][0] * (gvm[n][0] - gum[n][0]) +
                        gum[n][1] * (gvm[n][1] - gum[n][1]));
    }
  }
  const double a0 = alpha.value(0.0, 0.0, 0.0);
  for (int n = 0; n < g.num_nodes(); ++n) {
    const double u0 = spec.u0[n];
    total += a0 * trapezoid_space_weight(g, n) *
             (pow_nonneg(u0, m + 1.0) / (m + 1.0) - u0 * vm.at(0, n));
  }
  return total;
}

double truncation_g(double s, double eps) { return std::max(eps, s); }

double truncation_G(double s, double eps) {
  if (s <= eps) return eps * s;
  return 0.5 * (eps * eps + s * s);
}

TruncationEnergy truncation_energy(const ScalarField& u, double eps,
                                   const CutoffFunction& zeta) {
  if (!(eps > 0.0)) throw std::invalid_argument("truncation_energy: eps must be > 0");
  const SpaceTimeGrid& g = u.grid();
  TruncationEnergy out;
  for (int k = 0; k < g.nt; ++k) {
    const double t = g.t(k);
    const double wt = trapezoid_time_weight(g, k);
    for (int n = 0; n < g.num_nodes(); ++n) {
      const double x = g.coord(n, 0), y = g.coord(n, 1);
      const double w = wt * trapezoid_space_weight(g, n);
      const Vec2 gz = zeta.grad(x, y, t);
      const double ge = truncation_g(u.at(k, n), eps);
      out.G_term += w * std::fabs(zeta.dt(x, y, t)) * truncation_G(u.at(k, n), eps);
      out.g_term += w * (gz[0] * gz[0] + gz[1] * gz[1]) * ge * ge;
    }
  }
  return out;
}

}  // namespace pmelab
