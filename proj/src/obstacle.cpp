#include "pmelab/obstacle.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "pmelab/calculus.hpp"
#include "pmelab/energy.hpp"
#include "pmelab/mollify.hpp"

namespace pmelab {

namespace {

void require_decreasing(const std::vector<double>& s, const char* name) {
  if (s.empty()) throw std::invalid_argument(std::string("chain: empty ") + name);
  for (size_t k = 0; k < s.size(); ++k) {
    if (!(s[k] > 0.0))
      throw std::invalid_argument(std::string("chain: nonpositive entry in ") + name);
    if (k > 0 && !(s[k] < s[k - 1]))
      throw std::invalid_argument(std::string("chain: ") + name +
                                  " must be strictly decreasing");
  }
}

// one pass of 3-point averaging along each axis; boundary nodes kept
std::vector<double> average_slice(const SpaceTimeGrid& g, std::vector<double> v) {
  std::vector<double> w = v;
  for (int iy = 0; iy < g.nx[1]; ++iy)
    for (int ix = 1; ix < g.nx[0] - 1; ++ix) {
      const int n = g.node(ix, iy);
      w[n] = 0.25 * (v[n - 1] + 2.0 * v[n] + v[n + 1]);
    }
  if (g.dim == 2) {
    v = w;
    for (int iy = 1; iy < g.nx[1] - 1; ++iy)
      for (int ix = 0; ix < g.nx[0]; ++ix) {
        const int n = g.node(ix, iy);
        w[n] = 0.25 * (v[n - g.nx[0]] + 2.0 * v[n] + v[n + g.nx[0]]);
      }
  }
  return w;
}

struct Extreme {
  double value;
  int step;
  int node;
};

Extreme field_min(const ScalarField& f) {
  Extreme e{std::numeric_limits<double>::infinity(), 0, 0};
  const SpaceTimeGrid& g = f.grid();
  for (int k = 0; k < g.nt; ++k)
    for (int n = 0; n < g.num_nodes(); ++n)
      if (f.at(k, n) < e.value) e = {f.at(k, n), k, n};
  return e;
}

std::string locate(const SpaceTimeGrid& g, int step, int node) {
  std::ostringstream os;
  os << "node " << node << " (x=" << format_double(g.coord(node, 0));
  if (g.dim == 2) os << ", y=" << format_double(g.coord(node, 1));
  os << "), step " << step << " (t=" << format_double(g.t(step)) << ")";
  return os.str();
}

}  // namespace

void ApproximationChain::validate() const {
  require_decreasing(delta_seq, "delta_seq");
  require_decreasing(eps_seq, "eps_seq");
  require_decreasing(gamma_seq, "gamma_seq");
  if (i_max < 1) throw std::invalid_argument("chain: i_max must be >= 1");
}

bool Diagnostics::all_pass() const {
  for (const ConditionReport& c : conditions)
    if (!c.pass && !c.informational) return false;
  return true;
}

std::string Diagnostics::summary() const {
  std::ostringstream os;
  for (const ConditionReport& c : conditions)
    os << (c.pass ? "pass" : (c.informational ? "info" : "FAIL")) << "  "
       << c.name << (c.detail.empty() ? "" : ": " + c.detail) << "\n";
  return os.str();
}

Diagnostics validate_spec(const ObstacleProblemSpec& spec) {
  Diagnostics d;
  const SpaceTimeGrid& g = spec.psi.grid();
  spec.psi.validate();
  spec.g.validate();
  spec.g.check_same_grid(spec.psi);
  if (static_cast<int>(spec.u0.size()) != g.num_nodes())
    throw std::invalid_argument("validate_spec: u0 size mismatch");
  if (!(spec.m > 1.0)) throw std::invalid_argument("validate_spec: m must be > 1");

  {
    ConditionReport c{"data-nonnegative-bounded"};
    const Extreme pmin = field_min(spec.psi);
    const Extreme gmin = field_min(spec.g);
    double u0min = std::numeric_limits<double>::infinity();
    int u0arg = 0;
    for (int n = 0; n < g.num_nodes(); ++n)
      if (spec.u0[n] < u0min) { u0min = spec.u0[n]; u0arg = n; }
    if (pmin.value < 0.0) {
      c.pass = false;
      c.detail = "psi < 0 at " + locate(g, pmin.step, pmin.node);
    } else if (gmin.value < 0.0) {
      c.pass = false;
      c.detail = "g < 0 at " + locate(g, gmin.step, gmin.node);
    } else if (u0min < 0.0) {
      c.pass = false;
      c.detail = "u0 < 0 at " + locate(g, 0, u0arg);
    }
    d.conditions.push_back(c);
  }
  {
    ConditionReport c{"compatibility-g-ge-psi"};
    for (int k = 0; k < g.nt && c.pass; ++k)
      for (int n = 0; n < g.num_nodes(); ++n)
        if (spec.g.at(k, n) < spec.psi.at(k, n) - 1e-12) {
          c.pass = false;
          c.detail = "g < psi at " + locate(g, k, n);
          break;
        }
    d.conditions.push_back(c);
  }
  {
    ConditionReport c{"compatibility-u0-ge-psi0"};
    for (int n = 0; n < g.num_nodes(); ++n)
      if (spec.u0[n] < spec.psi.at(0, n) - 1e-12) {
        c.pass = false;
        c.detail = "u0 < psi(.,0) at " + locate(g, 0, n);
        break;
      }
    d.conditions.push_back(c);
  }
  {
    ConditionReport c{"compatibility-boundary-initial"};
    for (int n = 0; n < g.num_nodes(); ++n)
      if (g.boundary_node(n) && std::fabs(spec.g.at(0, n) - spec.u0[n]) > 1e-12) {
        c.pass = false;
        c.detail = "g(.,0) != u0 at boundary " + locate(g, 0, n);
        break;
      }
    d.conditions.push_back(c);
  }
  {
    ConditionReport c{"data-energies-finite"};
    const double A = constant_A(spec);
    const double At = constant_Atilde(spec);
    if (!std::isfinite(A) || !std::isfinite(At)) {
      c.pass = false;
      c.detail = "A=" + format_double(A) + " A~=" + format_double(At);
    }
    d.conditions.push_back(c);
  }
  {
    ConditionReport c{"obstacle-forcing-bound"};
    c.informational = true;
    const ScalarField f = discrete_obstacle_forcing(spec.psi, spec.m);
    c.detail = "max |dt psi - Lap psi^m| = " + format_double(f.max_abs());
    d.conditions.push_back(c);
  }
  return d;
}

StrongSolveResult solve_strong(const ObstacleProblemSpec& spec,
                               const ApproximationChain& chain) {
  chain.validate();
  const Diagnostics diag = validate_spec(spec);
  if (!diag.all_pass())
    throw std::invalid_argument("solve_strong: invalid data\n" + diag.summary());

  StrongSolveResult out;
  const double eps = chain.eps_seq.back();
  const double gamma = chain.gamma_seq.back();
  const SpaceTimeGrid& g = spec.psi.grid();

  ScalarField prev;
  for (double delta : chain.delta_seq) {
    RegularizationParams reg{eps, gamma, delta, 0.05};
    const PenalizedResult run = solve_penalized(spec, reg);
    out.deltas.push_back(delta);
    double feas = 0.0;
    double incr = 0.0;
    for (int k = 0; k < g.nt; ++k)
      for (int n = 0; n < g.num_nodes(); ++n) {
        feas = std::max(feas, spec.psi.at(k, n) - run.u.at(k, n));
        if (!prev.values().empty())
          incr = std::max(incr, std::fabs(run.u.at(k, n) - prev.at(k, n)));
      }
    out.feasibility_seq.push_back(std::max(feas, 0.0));
    if (!prev.values().empty()) out.cauchy_increments.push_back(incr);
    prev = run.u;
    out.newton = run.newton;
  }
  out.u = prev;

  for (size_t k = 1; k < out.cauchy_increments.size(); ++k)
    if (out.cauchy_increments[k] > out.cauchy_increments[k - 1] + 1e-12)
      out.increments_decreasing = false;

  // feasibility within the penalty's reach: (psi^m + delta_min)^{1/m} - psi
  const double dmin = chain.delta_seq.back();
  double feastol = 0.0;
  for (int k = 0; k < g.nt; ++k)
    for (int n = 0; n < g.num_nodes(); ++n) {
      const double p = spec.psi.at(k, n);
      feastol = std::max(
          feastol, std::pow(pow_nonneg(p, spec.m) + dmin, 1.0 / spec.m) - p);
    }
  if (out.feasibility_seq.back() > feastol + 1e-9)
    throw std::runtime_error("solve_strong: feasibility " +
                             format_double(out.feasibility_seq.back()) +
                             " exceeds tolerance " + format_double(feastol));
  return out;
}

WeakSolveResult solve_weak(const ObstacleProblemSpec& spec,
                           const ApproximationChain& chain) {
  chain.validate();
  if (chain.obstacle_seq.empty())
    throw std::invalid_argument("solve_weak: obstacle sequence not built");

  const SpaceTimeGrid& g = spec.psi.grid();
  Region interior;
  const double mx = 0.1 * (g.hi[0] - g.lo[0]);
  const double my = g.dim == 2 ? 0.1 * (g.hi[1] - g.lo[1]) : 0.0;
  interior.xlo = {g.lo[0] + mx, g.lo[1] + my};
  interior.xhi = {g.hi[0] - mx, g.hi[1] - my};
  interior.t1 = 0.1 * g.T;
  interior.t2 = g.T;

  WeakSolveResult out;
  out.min_ordering_gap = std::numeric_limits<double>::infinity();
  for (const ScalarField& psi_i : chain.obstacle_seq) {
    psi_i.check_same_grid(spec.psi);
    ObstacleProblemSpec sub = spec;
    sub.psi = psi_i;
    const StrongSolveResult run = solve_strong(sub, chain);
    if (!out.iterates.empty()) {
      const ScalarField& last = out.iterates.back();
      double gap = std::numeric_limits<double>::infinity();
      for (int k = 0; k < g.nt; ++k)
        for (int n = 0; n < g.num_nodes(); ++n)
          gap = std::min(gap, run.u.at(k, n) - last.at(k, n));
      out.min_ordering_gap = std::min(out.min_ordering_gap, gap);
      if (gap < -1e-6)
        throw std::runtime_error("solve_weak: iterate ordering violated by " +
                                 format_double(-gap));
      const ScalarField diff2 = [&] {
        ScalarField d(g);
        for (int k = 0; k < g.nt; ++k)
          for (int n = 0; n < g.num_nodes(); ++n) {
            const double e = run.u.at(k, n) - last.at(k, n);
            d.at(k, n) = e * e;
          }
        return d;
      }();
      out.interior_increments.push_back(std::sqrt(integrate(diff2, interior)));
    }
    out.iterates.push_back(run.u);
  }
  if (out.iterates.size() == 1)
    out.min_ordering_gap = 0.0;
  out.u = out.iterates.back();
  return out;
}

std::vector<ScalarField> build_obstacle_sequence(const ScalarField& psi, int i_max) {
  if (i_max < 1)
    throw std::invalid_argument("build_obstacle_sequence: i_max must be >= 1");
  if (psi.min() < 0.0)
    throw std::invalid_argument("build_obstacle_sequence: psi must be >= 0");
  const SpaceTimeGrid& g = psi.grid();

  ScalarField base = psi;
  for (int pass = 0; pass < 3; ++pass)
    for (int k = 0; k < g.nt; ++k)
      base.set_slice(k, average_slice(g, base.slice(k)));
  base = mollify_time(base, MollifierParams::initial_slice(2.0 * g.dt));
  for (int k = 0; k < g.nt; ++k)
    for (int n = 0; n < g.num_nodes(); ++n)
      base.at(k, n) = std::min(base.at(k, n), psi.at(k, n));

  std::vector<ScalarField> seq;
  for (int i = 1; i <= i_max; ++i) {
    // strict offsets keep psi_i < psi_{i+1} < psi wherever the base is positive
    const double sigma = i * std::ldexp(1.0, -(i_max + 2)) / (i_max + 1);
    const double factor = 1.0 - std::ldexp(1.0, -i) + sigma;
    seq.push_back(base.map([factor](double s) { return factor * s; }));
    seq.back().set_nonneg(true);
  }
  return seq;
}

double default_coincidence_tol(double delta, double m) {
  return 2.0 * std::pow(delta, 1.0 / m);
}

std::vector<std::vector<char>> coincidence_set(const ScalarField& u,
                                               const ScalarField& psi, double tol) {
  u.check_same_grid(psi);
  const SpaceTimeGrid& g = u.grid();
  std::vector<std::vector<char>> masks(g.nt, std::vector<char>(g.num_nodes(), 0));
  for (int k = 0; k < g.nt; ++k)
    for (int n = 0; n < g.num_nodes(); ++n)
      masks[k][n] = (u.at(k, n) - psi.at(k, n) <= tol) ? 1 : 0;
  return masks;
}

ComparisonReport comparison_check(const ScalarField& u, const ScalarField& w,
                                  const Region& region) {
  u.check_same_grid(w);
  const SpaceTimeGrid& g = u.grid();
  const Region::IndexBox box = region.clip(g);
  if (box.empty()) throw std::invalid_argument("comparison_check: empty region");

  ComparisonReport rep;
  auto lateral = [&](int ix, int iy) {
    if (ix == box.ix0 || ix == box.ix1) return true;
    return g.dim == 2 && (iy == box.iy0 || iy == box.iy1);
  };
  for (int k = box.k0; k <= box.k1 && rep.precondition_ok; ++k)
    for (int iy = box.iy0; iy <= box.iy1; ++iy)
      for (int ix = box.ix0; ix <= box.ix1; ++ix) {
        if (k != box.k0 && !lateral(ix, iy)) continue;
        const int n = g.node(ix, iy);
        if (u.at(k, n) < w.at(k, n) - 1e-12) {
          rep.precondition_ok = false;
          rep.message = "u < w on the parabolic boundary at " + locate(g, k, n);
          break;
        }
      }
  if (!rep.precondition_ok) return rep;

  for (int k = box.k0; k <= box.k1; ++k)
    for (int iy = box.iy0; iy <= box.iy1; ++iy)
      for (int ix = box.ix0; ix <= box.ix1; ++ix) {
        const int n = g.node(ix, iy);
        const double v = w.at(k, n) - u.at(k, n);
        if (v > rep.max_violation) {
          rep.max_violation = v;
          rep.step = k;
          rep.node = n;
        }
      }
  rep.max_violation = std::max(rep.max_violation, 0.0);
  return rep;
}

SupercaloricResult approximate_supercaloric(const ScalarField& target, double m,
                                            const Region& region, int i_max,
                                            const RegularizationParams& reg,
                                            double sandwich_tol) {
  if (target.min() < 0.0)
    throw std::invalid_argument("approximate_supercaloric: target must be >= 0");
  const SpaceTimeGrid& g = target.grid();

  SupercaloricResult out;
  out.obstacles = build_obstacle_sequence(target, i_max);
  for (const ScalarField& psi_i : out.obstacles) {
    ObstacleProblemSpec sub;
    sub.psi = psi_i;
    sub.g = psi_i;
    sub.u0 = psi_i.slice(0);
    sub.m = m;
    const PenalizedResult run = solve_penalized(sub, reg);
    double viol = 0.0;
    for (int k = 0; k < g.nt; ++k)
      for (int n = 0; n < g.num_nodes(); ++n) {
        viol = std::max(viol, psi_i.at(k, n) - run.u.at(k, n));
        viol = std::max(viol, run.u.at(k, n) - target.at(k, n));
        if (!out.iterates.empty())
          viol = std::max(viol, out.iterates.back().at(k, n) - run.u.at(k, n));
      }
    out.max_sandwich_violation = std::max(out.max_sandwich_violation, viol);

    ScalarField diff2(g);
    for (int k = 0; k < g.nt; ++k)
      for (int n = 0; n < g.num_nodes(); ++n) {
        const double e = run.u.at(k, n) - target.at(k, n);
        diff2.at(k, n) = e * e;
      }
    out.l2_errors.push_back(std::sqrt(integrate(diff2, region)));
    out.iterates.push_back(run.u);
  }
  if (out.max_sandwich_violation > sandwich_tol)
    throw std::runtime_error("approximate_supercaloric: sandwich violated by " +
                             format_double(out.max_sandwich_violation));
  return out;
}

}  // namespace pmelab
