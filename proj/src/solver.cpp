#include "pmelab/solver.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <cmath>
#include <sstream>

#include "pmelab/calculus.hpp"
#include "pmelab/cutoff.hpp"

namespace pmelab {

double regularized_diffusivity(double s, double eps, double m) {
  if (s < 0.0) throw std::invalid_argument("regularized_diffusivity: s must be >= 0");
  if (!(eps > 0.0 && eps <= 1.0))
    throw std::invalid_argument("regularized_diffusivity: eps must lie in (0,1]");
  if (s <= eps) return m * std::pow(eps, m - 1.0);
  if (s <= 1.0 / eps) return m * std::pow(s, m - 1.0);
  return m * std::pow(eps, 1.0 - m);
}

namespace {

// Lenient variant used inside Newton: defined for all s, constant below eps.
double diffusivity_any(double s, double eps, double m) {
  if (eps <= 0.0) return s <= 0.0 ? 0.0 : m * std::pow(s, m - 1.0);
  if (s <= eps) return m * std::pow(eps, m - 1.0);
  if (s <= 1.0 / eps) return m * std::pow(s, m - 1.0);
  return m * std::pow(eps, 1.0 - m);
}

}  // namespace

double diffusivity_primitive(double s, double eps, double m) {
  if (eps <= 0.0) return pow_nonneg(s, m);
  const double a0 = m * std::pow(eps, m - 1.0);
  if (s <= eps) return a0 * s;  // linear through 0, also below 0
  const double shift = (m - 1.0) * std::pow(eps, m);
  if (s <= 1.0 / eps) return std::pow(s, m) + shift;
  const double cap = 1.0 / eps;
  return std::pow(cap, m) + shift + m * std::pow(eps, 1.0 - m) * (s - cap);
}

double penalty_profile(double s, double delta) {
  if (!(delta > 0.0)) throw std::invalid_argument("penalty_profile: delta must be > 0");
  if (s >= 0.0) return 1.0;
  if (s <= -delta) return 0.0;
  return smoothstep5((s + delta) / delta);
}

double penalty_profile_deriv(double s, double delta) {
  if (!(delta > 0.0)) throw std::invalid_argument("penalty_profile: delta must be > 0");
  if (s >= 0.0 || s <= -delta) return 0.0;
  return smoothstep5_deriv((s + delta) / delta) / delta;
}

void PenaltySpec::validate() const {
  if (!(delta > 0.0)) throw std::invalid_argument("penalty: delta must be > 0");
  if (psi.min() < 0.0) throw std::invalid_argument("penalty: psi must be nonnegative");
  if (psi_forcing.min() < 0.0)
    throw std::invalid_argument("penalty: psi_forcing must be nonnegative");
}

double barenblatt(double x, double y, double t, const BarenblattParams& p) {
  if (!(t + p.t0 > 0.0)) throw std::invalid_argument("barenblatt: need t + t0 > 0");
  const double tau = t + p.t0;
  const double a = p.alpha();
  const double r2 = x * x + (p.n == 2 ? y * y : 0.0);
  const double inner = p.C - p.beta() * r2 * std::pow(tau, -2.0 * a / p.n);
  return std::pow(tau, -a) * pow_nonneg(inner, 1.0 / (p.m - 1.0));
}

namespace {

struct Stencil {
  // Per node: up to 4 (neighbor, lambda) pairs; Dirichlet nodes have none.
  struct Edge {
    int neighbor;
    double lambda;
  };
  std::vector<std::array<Edge, 4>> edges;
  std::vector<int> degree;
  std::vector<char> dirichlet;
};

Stencil build_stencil(const SpaceTimeGrid& g, double dt, BoundaryKind bkind) {
  Stencil st;
  const int nn = g.num_nodes();
  st.edges.resize(nn);
  st.degree.assign(nn, 0);
  st.dirichlet.assign(nn, 0);
  const double lx = dt / (g.dx[0] * g.dx[0]);
  const double ly = g.dim == 2 ? dt / (g.dx[1] * g.dx[1]) : 0.0;
  for (int n = 0; n < nn; ++n) {
    const int ix = g.ix_of(n), iy = g.iy_of(n);
    if (bkind == BoundaryKind::Dirichlet && g.boundary_node(n)) {
      st.dirichlet[n] = 1;
      continue;
    }
    auto add = [&](int nb, double lam) {
      st.edges[n][st.degree[n]++] = {nb, lam};
    };
    if (ix > 0 && ix < g.nx[0] - 1) {
      add(g.node(ix - 1, iy), lx);
      add(g.node(ix + 1, iy), lx);
    } else if (ix == 0) {
      add(g.node(1, iy), 2.0 * lx);  // reflecting ghost
    } else {
      add(g.node(g.nx[0] - 2, iy), 2.0 * lx);
    }
    if (g.dim == 2) {
      if (iy > 0 && iy < g.nx[1] - 1) {
        add(g.node(ix, iy - 1), ly);
        add(g.node(ix, iy + 1), ly);
      } else if (iy == 0) {
        add(g.node(ix, 1), 2.0 * ly);
      } else {
        add(g.node(ix, g.nx[1] - 2), 2.0 * ly);
      }
    }
  }
  return st;
}

double residual(const SpaceTimeGrid& g, const Stencil& st, const std::vector<double>& u,
                const std::vector<double>& b, const std::vector<double>& bc,
                const PMEParams& p, double dt, const SourceTerm* src,
                std::vector<double>& F) {
  const int nn = g.num_nodes();
  std::vector<double> phi(nn);
  for (int n = 0; n < nn; ++n) phi[n] = diffusivity_primitive(u[n], p.eps, p.m);
  double worst = 0.0;
  for (int n = 0; n < nn; ++n) {
    double f;
    if (st.dirichlet[n]) {
      f = u[n] - bc[n];
    } else {
      f = u[n] - b[n];
      for (int e = 0; e < st.degree[n]; ++e)
        f -= st.edges[n][e].lambda * (phi[st.edges[n][e].neighbor] - phi[n]);
      if (src && src->value) f -= dt * src->value(n, u[n]);
    }
    F[n] = f;
    worst = std::max(worst, std::fabs(f));
  }
  return worst;
}

// Tridiagonal elimination for the 1d Jacobian.
void solve_tridiag(std::vector<double>& sub, std::vector<double>& diag,
                   std::vector<double>& sup, std::vector<double>& rhs) {
  const int n = static_cast<int>(diag.size());
  for (int i = 1; i < n; ++i) {
    const double w = sub[i] / diag[i - 1];
    diag[i] -= w * sup[i - 1];
    rhs[i] -= w * rhs[i - 1];
  }
  rhs[n - 1] /= diag[n - 1];
  for (int i = n - 2; i >= 0; --i) rhs[i] = (rhs[i] - sup[i] * rhs[i + 1]) / diag[i];
}

void newton_direction(const SpaceTimeGrid& g, const Stencil& st,
                      const std::vector<double>& u, const std::vector<double>& F,
                      const PMEParams& p, double dt, const SourceTerm* src,
                      std::vector<double>& d) {
  const int nn = g.num_nodes();
  std::vector<double> a(nn);
  for (int n = 0; n < nn; ++n) a[n] = diffusivity_any(u[n], p.eps, p.m);
  if (g.dim == 1) {
    std::vector<double> sub(nn, 0.0), diag(nn, 0.0), sup(nn, 0.0), rhs(nn);
    for (int n = 0; n < nn; ++n) {
      rhs[n] = -F[n];
      if (st.dirichlet[n]) {
        diag[n] = 1.0;
        continue;
      }
      double dg = 1.0;
      for (int e = 0; e < st.degree[n]; ++e) {
        const auto& ed = st.edges[n][e];
        dg += ed.lambda * a[n];
        const double off = -ed.lambda * a[ed.neighbor];
        if (ed.neighbor == n - 1)
          sub[n] += off;
        else
          sup[n] += off;
      }
      if (src && src->deriv) dg -= dt * src->deriv(n, u[n]);
      diag[n] = dg;
    }
    solve_tridiag(sub, diag, sup, rhs);
    d = std::move(rhs);
    return;
  }
  using Trip = Eigen::Triplet<double>;
  std::vector<Trip> trips;
  trips.reserve(static_cast<size_t>(nn) * 5);
  Eigen::VectorXd rhs(nn);
  for (int n = 0; n < nn; ++n) {
    rhs[n] = -F[n];
    if (st.dirichlet[n]) {
      trips.emplace_back(n, n, 1.0);
      continue;
    }
    double dg = 1.0;
    for (int e = 0; e < st.degree[n]; ++e) {
      const auto& ed = st.edges[n][e];
      dg += ed.lambda * a[n];
      trips.emplace_back(n, ed.neighbor, -ed.lambda * a[ed.neighbor]);
    }
    if (src && src->deriv) dg -= dt * src->deriv(n, u[n]);
    trips.emplace_back(n, n, dg);
  }
  Eigen::SparseMatrix<double> J(nn, nn);
  J.setFromTriplets(trips.begin(), trips.end());
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.compute(J);
  if (lu.info() != Eigen::Success)
    throw std::runtime_error("step: singular Jacobian");
  Eigen::VectorXd sol = lu.solve(rhs);
  d.assign(sol.data(), sol.data() + nn);
}

}  // namespace

std::vector<double> step(const SpaceTimeGrid& grid, const std::vector<double>& u_prev,
                         const PMEParams& params, const std::vector<double>& bc,
                         double dt, const SourceTerm* source, BoundaryKind bkind,
                         NewtonStats* stats) {
  params.validate();
  const int nn = grid.num_nodes();
  if (static_cast<int>(u_prev.size()) != nn || static_cast<int>(bc.size()) != nn)
    throw std::invalid_argument("step: slice size mismatch");
  for (int n = 0; n < nn; ++n)
    if (u_prev[n] < 0.0) throw std::invalid_argument("step: negative input");

  const Stencil st = build_stencil(grid, dt, bkind);
  std::vector<double> u = u_prev;
  for (int n = 0; n < nn; ++n)
    if (st.dirichlet[n]) u[n] = bc[n];

  std::vector<double> F(nn), d;
  double res = residual(grid, st, u, u_prev, bc, params, dt, source, F);
  int iter = 0;
  while (res > params.newton_tol && iter < params.newton_max_iters) {
    newton_direction(grid, st, u, F, params, dt, source, d);
    double lam = 1.0;
    std::vector<double> u_try(nn), F_try(nn);
    double res_try = res;
    bool accepted = false;
    while (lam > 1e-12) {
      for (int n = 0; n < nn; ++n) u_try[n] = u[n] + lam * d[n];
      res_try = residual(grid, st, u_try, u_prev, bc, params, dt, source, F_try);
      if (res_try < res) {
        accepted = true;
        break;
      }
      lam *= 0.5;
    }
    if (!accepted) break;
    u.swap(u_try);
    F.swap(F_try);
    res = res_try;
    ++iter;
  }
  if (res > params.newton_tol) {
    std::ostringstream os;
    os << "step: Newton did not converge, residual " << res << " after " << iter
       << " iterations";
    throw std::runtime_error(os.str());
  }
  // negative zeros and tiny negative round-off on nonneg problems
  for (double& v : u)
    if (v == 0.0) v = 0.0;
  if (stats) {
    stats->iterations = iter;
    stats->residual = res;
  }
  return u;
}

TrajectoryResult solve_pme(const std::vector<double>& u0, const ScalarField& g,
                           const PMEParams& params, const SpaceTimeGrid& grid,
                           const ScalarField* source, BoundaryKind bkind) {
  TrajectoryResult out{ScalarField(grid), {}};
  out.u.set_slice(0, u0);
  std::vector<double> u = u0;
  for (int k = 1; k < grid.nt; ++k) {
    const std::vector<double> bc = g.slice(k);
    SourceTerm src;
    std::vector<double> fslice;
    const SourceTerm* src_ptr = nullptr;
    if (source) {
      fslice = source->slice(k);
      src.value = [&fslice](int n, double) { return fslice[n]; };
      src_ptr = &src;
    }
    NewtonStats ns;
    ns.step = k;
    u = step(grid, u, params, bc, grid.dt, src_ptr, bkind, &ns);
    out.u.set_slice(k, u);
    out.newton.push_back(ns);
  }
  return out;
}

PenalizedResult solve_penalized(const ObstacleProblemSpec& spec,
                                const RegularizationParams& reg,
                                const PMEParams* params_override) {
  reg.validate();
  const SpaceTimeGrid& grid = spec.psi.grid();
  spec.psi.check_same_grid(spec.g);
  const double m = spec.m;
  const double lift = reg.eps + reg.gamma;

  // lifted data
  ScalarField psi_eps = spec.psi.map([&](double s) { return s + reg.eps; });
  ScalarField psi_eps_m = psi_eps.map([&](double s) { return pow_nonneg(s, m); });
  ScalarField g_lift = spec.g.map([&](double s) {
    return std::pow(pow_nonneg(s, m) + std::pow(reg.gamma, m), 1.0 / m) + reg.eps;
  });
  std::vector<double> u0_lift = spec.u0;
  for (double& v : u0_lift) v += lift;

  // discrete forcing Psi_eps = dt psi_eps - Lap psi_eps^m, with the same
  // stencils the stepping uses (backward time difference at each level)
  ScalarField forcing(grid);
  for (int k = 0; k < grid.nt; ++k) {
    const int kk = std::max(k, 1);
    const std::vector<double> lap = slice_laplacian(grid, psi_eps_m.slice(kk));
    for (int n = 0; n < grid.num_nodes(); ++n) {
      const double dpsi = (psi_eps.at(kk, n) - psi_eps.at(kk - 1, n)) / grid.dt;
      forcing.at(k, n) = std::max(0.0, dpsi - lap[n]);
    }
  }

  double N = 0.0;
  for (double v : psi_eps_m.values())
    N = std::max(N, std::pow(v + reg.delta, 1.0 / m));
  N = std::max(N, g_lift.max());
  for (double v : u0_lift) N = std::max(N, v);
  if (N > 1.0 / lift)
    throw std::invalid_argument(
        "solve_penalized: barrier N exceeds 1/(eps+gamma); shrink eps, gamma");

  PMEParams params;
  params.m = m;
  params.eps = reg.eps;
  params.newton_max_iters = 100;
  if (params_override) params = *params_override;

  PenalizedResult out;
  out.u = ScalarField(grid);
  out.u.set_slice(0, u0_lift);
  out.barrier_lo = lift;
  out.barrier_hi = N;
  out.psi_lifted = psi_eps;
  out.psi_forcing = forcing;

  const double barrier_tol = 1e-7;
  std::vector<double> u = u0_lift;
  for (int k = 1; k < grid.nt; ++k) {
    const std::vector<double> bc = g_lift.slice(k);
    const std::vector<double> psim = psi_eps_m.slice(k);
    const std::vector<double> force = forcing.slice(k);
    SourceTerm src;
    src.value = [&](int n, double uu) {
      return force[n] * penalty_profile(psim[n] - pow_nonneg(uu, m), reg.delta);
    };
    src.deriv = [&](int n, double uu) {
      const double xi_d = penalty_profile_deriv(psim[n] - pow_nonneg(uu, m), reg.delta);
      return -force[n] * xi_d * m * pow_nonneg(uu, m - 1.0);
    };
    NewtonStats ns;
    ns.step = k;
    u = step(grid, u, params, bc, grid.dt, &src, BoundaryKind::Dirichlet, &ns);
    for (int n = 0; n < grid.num_nodes(); ++n) {
      if (u[n] < lift - barrier_tol || u[n] > N + barrier_tol)
        throw std::runtime_error("solve_penalized: barrier violated (non-monotone step)");
    }
    out.u.set_slice(k, u);
    out.newton.push_back(ns);
  }
  for (int k = 0; k < grid.nt; ++k)
    for (int n = 0; n < grid.num_nodes(); ++n)
      out.max_obstacle_violation = std::max(
          out.max_obstacle_violation, psi_eps.at(k, n) - out.u.at(k, n));
  out.max_obstacle_violation = std::max(out.max_obstacle_violation, 0.0);
  return out;
}

std::string newton_stats_csv(const std::vector<NewtonStats>& stats) {
  std::ostringstream os;
  os << "step,iterations,residual\n";
  for (const auto& s : stats)
    os << s.step << ',' << s.iterations << ',' << format_double(s.residual) << '\n';
  return os.str();
}

}  // namespace pmelab
