#include "pmelab/equivalence.hpp"

#include <cmath>
#include <sstream>

#include "pmelab/calculus.hpp"

namespace pmelab {

namespace {

// flux of formulation (ii): (2m/(m+1)) u^{(m-1)/2} grad u^{(m+1)/2}, the
// gradient taken from the nodal u^{(m+1)/2} field
std::vector<Vec2> flux_umid(const SpaceTimeGrid& g, const std::vector<double>& us,
                            double m) {
  std::vector<double> umid(us.size());
  for (size_t n = 0; n < us.size(); ++n)
    umid[n] = pow_nonneg(us[n], (m + 1.0) / 2.0);
  std::vector<Vec2> f = slice_gradient(g, umid);
  const double c = 2.0 * m / (m + 1.0);
  for (size_t n = 0; n < us.size(); ++n) {
    const double w = c * pow_nonneg(us[n], (m - 1.0) / 2.0);
    f[n][0] *= w;
    f[n][1] *= w;
  }
  return f;
}

}  // namespace

GradientTransformResult gradient_power_transform(const ScalarField& u, double m,
                                                 PowerDirection dir, int k_max) {
  if (k_max < 0)
    throw std::invalid_argument("gradient_power_transform: k_max must be >= 0");
  if (u.min() < 0.0)
    throw std::invalid_argument("gradient_power_transform: u must be >= 0");
  const SpaceTimeGrid& g = u.grid();
  const double top = u.max();

  GradientTransformResult out;
  for (int j = k_max; j >= 0; --j)
    out.ladder.push_back(top > 0.0 ? std::ldexp(top, -j) : 0.0);

  for (size_t lvl = 0; lvl < out.ladder.size(); ++lvl) {
    const double k = out.ladder[lvl];
    const ScalarField trunc = u.map([k](double s) { return std::min(s, k); });
    const bool at_top = lvl + 1 == out.ladder.size();
    ScalarField mag(g);
    double mis2 = 0.0;
    for (int step = 0; step < g.nt; ++step) {
      const std::vector<double> ts = trunc.slice(step);
      std::vector<Vec2> chain, direct;
      std::vector<double> target(ts.size());
      if (dir == PowerDirection::Down) {
        chain = slice_gradient(g, ts);
        const double c = (m + 1.0) / 2.0;
        for (size_t n = 0; n < ts.size(); ++n) {
          const double w = c * pow_nonneg(ts[n], (m - 1.0) / 2.0);
          chain[n][0] *= w;
          chain[n][1] *= w;
          target[n] = pow_nonneg(ts[n], (m + 1.0) / 2.0);
        }
      } else {
        chain = flux_umid(g, ts, m);
        for (size_t n = 0; n < ts.size(); ++n) target[n] = pow_nonneg(ts[n], m);
      }
      direct = slice_gradient(g, target);
      const double wt = trapezoid_time_weight(g, step);
      for (int n = 0; n < g.num_nodes(); ++n) {
        const double ex = chain[n][0] - direct[n][0];
        const double ey = chain[n][1] - direct[n][1];
        mis2 += wt * trapezoid_space_weight(g, n) * (ex * ex + ey * ey);
        if (at_top) mag.at(step, n) = std::hypot(chain[n][0], chain[n][1]);
      }
    }
    out.level_mismatch.push_back(std::sqrt(mis2));
    if (at_top) {
      out.transformed = mag;
      out.mismatch = out.level_mismatch.back();
    }
  }
  return out;
}

EquivalenceReport check_equivalence(const FieldSampler& sample, double m,
                                    const SpaceTimeGrid& base_grid,
                                    int refinement_levels, int basis_count,
                                    uint64_t basis_seed) {
  if (refinement_levels < 1)
    throw std::invalid_argument("check_equivalence: need at least one level");
  base_grid.validate();
  const TestFunctionBasis basis =
      TestFunctionBasis::make(base_grid, basis_count, basis_seed);

  EquivalenceReport rep;
  for (int l = 0; l < refinement_levels; ++l) {
    SpaceTimeGrid g = base_grid;
    const int scale = 1 << l;
    g.nx[0] = (base_grid.nx[0] - 1) * scale + 1;
    if (g.dim == 2) g.nx[1] = (base_grid.nx[1] - 1) * scale + 1;
    g.nt = (base_grid.nt - 1) * scale + 1;
    for (int a = 0; a < g.dim; ++a) g.dx[a] = (g.hi[a] - g.lo[a]) / (g.nx[a] - 1);
    g.dt = g.T / (g.nt - 1);
    g.validate();

    const ScalarField u = sample(g);
    if (!u.grid().same_layout(g))
      throw std::invalid_argument("check_equivalence: sampler grid mismatch");

    EquivalenceReport::Level lev;
    lev.nx = g.nx[0];
    lev.nt = g.nt;
    lev.residuals_i = weak_residual(u, m, basis, WeakForm::GradUm);
    lev.residuals_ii = weak_residual(u, m, basis, WeakForm::GradUmid);
    for (int i = 0; i < basis.size(); ++i) {
      lev.max_residual_i = std::max(lev.max_residual_i, std::fabs(lev.residuals_i[i]));
      lev.max_residual_ii =
          std::max(lev.max_residual_ii, std::fabs(lev.residuals_ii[i]));
      lev.max_form_difference =
          std::max(lev.max_form_difference,
                   std::fabs(lev.residuals_i[i] - lev.residuals_ii[i]));
    }
    lev.form_tolerance =
        10.0 * (g.dx[0] + g.dt) * std::pow(1.0 + u.max(), m);

    double mis2 = 0.0;
    for (int k = 0; k < g.nt; ++k) {
      const std::vector<double> us = u.slice(k);
      std::vector<double> um(us.size());
      for (size_t n = 0; n < us.size(); ++n) um[n] = pow_nonneg(us[n], m);
      const std::vector<Vec2> fi = slice_gradient(g, um);
      const std::vector<Vec2> fii = flux_umid(g, us, m);
      const double wt = trapezoid_time_weight(g, k);
      for (int n = 0; n < g.num_nodes(); ++n) {
        const double ex = fi[n][0] - fii[n][0];
        const double ey = fi[n][1] - fii[n][1];
        mis2 += wt * trapezoid_space_weight(g, n) * (ex * ex + ey * ey);
      }
      if (k > 0) {
        const std::vector<double> prev = u.slice(k - 1);
        std::vector<double> dLm1(us.size()), dL2(us.size());
        for (size_t n = 0; n < us.size(); ++n) {
          const double d = std::fabs(us[n] - prev[n]);
          dLm1[n] = std::pow(d, m + 1.0);
          dL2[n] = d * d;
        }
        lev.time_modulus_Lm1 =
            std::max(lev.time_modulus_Lm1,
                     std::pow(integrate_slice(g, dLm1), 1.0 / (m + 1.0)));
        lev.time_modulus_L2 =
            std::max(lev.time_modulus_L2, std::sqrt(integrate_slice(g, dL2)));
      }
    }
    lev.gradient_mismatch = std::sqrt(mis2);
    if (lev.max_form_difference > lev.form_tolerance) rep.forms_agree = false;
    rep.levels.push_back(lev);
  }

  auto order = [](double prev, double cur) {
    if (cur <= 0.0) return 10.0;
    if (prev <= 0.0) return 0.0;
    return std::log2(prev / cur);
  };
  for (size_t l = 1; l < rep.levels.size(); ++l) {
    rep.refinement_orders_i.push_back(
        order(rep.levels[l - 1].max_residual_i, rep.levels[l].max_residual_i));
    rep.refinement_orders_ii.push_back(
        order(rep.levels[l - 1].max_residual_ii, rep.levels[l].max_residual_ii));
  }
  return rep;
}

std::string equivalence_report_csv(const EquivalenceReport& rep) {
  std::ostringstream os;
  os << "level,nx,nt,max_residual_i,max_residual_ii,max_form_difference,"
        "form_tolerance,gradient_mismatch,time_modulus_Lm1,time_modulus_L2,"
        "order_i,order_ii\n";
  for (size_t l = 0; l < rep.levels.size(); ++l) {
    const EquivalenceReport::Level& lev = rep.levels[l];
    os << l << ',' << lev.nx << ',' << lev.nt << ','
       << format_double(lev.max_residual_i) << ','
       << format_double(lev.max_residual_ii) << ','
       << format_double(lev.max_form_difference) << ','
       << format_double(lev.form_tolerance) << ','
       << format_double(lev.gradient_mismatch) << ','
       << format_double(lev.time_modulus_Lm1) << ','
       << format_double(lev.time_modulus_L2) << ',';
    if (l > 0)
      os << format_double(rep.refinement_orders_i[l - 1]) << ','
         << format_double(rep.refinement_orders_ii[l - 1]);
    else
      os << ',';
    os << '\n';
  }
  return os.str();
}

}  // namespace pmelab
