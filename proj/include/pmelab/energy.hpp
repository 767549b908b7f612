#ifndef PMELAB_ENERGY_HPP
#define PMELAB_ENERGY_HPP

#include <cstdint>

#include "pmelab/calculus.hpp"
#include "pmelab/cutoff.hpp"
#include "pmelab/problem.hpp"

namespace pmelab {

struct EnergyReport {
  double sup_Lm1 = 0.0;       // sup_t int u^{m+1} dx
  double grad_um_sq = 0.0;    // iint |grad u^m|^2
  double grad_umid_sq = 0.0;  // iint |grad u^{(m+1)/2}|^2 over the interior region
  double A = 0.0;
  double A_tilde = 0.0;
  double ratio_energy = 0.0;  // (sup_Lm1 + grad_um_sq) / max(A, 1e-12)
  double ratio_grad = 0.0;    // grad_umid_sq / (A + 1)
};

/// Compactly supported space-time bumps with quasi-random plateau centers,
/// normalized so that iint (|phi| + |dt phi| + |grad phi|) = 1 on a fixed
/// reference quadrature (grid-independent, usable across refinement levels).
class TestFunctionBasis {
 public:
  static TestFunctionBasis make(int dim, std::array<double, 2> lo,
                                std::array<double, 2> hi, double T, int count,
                                uint64_t seed, const Region* within = nullptr);
  static TestFunctionBasis make(const SpaceTimeGrid& g, int count, uint64_t seed,
                                const Region* within = nullptr);

  int size() const { return static_cast<int>(bumps_.size()); }
  const CutoffFunction& bump(int i) const { return bumps_[i]; }
  double norm(int i) const { return norms_[i]; }
  /// phi_i and its derivatives, normalization included.
  double value(int i, double x, double y, double t) const;
  double dt(int i, double x, double y, double t) const;
  Vec2 grad(int i, double x, double y, double t) const;

 private:
  int dim_ = 1;
  std::vector<CutoffFunction> bumps_;
  std::vector<double> norms_;
};

/// Discrete forcing Psi = dt psi - Lap psi^m (signed), with the stepping
/// scheme's stencils: backward time difference, 3/5-point Laplacian.
ScalarField discrete_obstacle_forcing(const ScalarField& psi, double m);

/// A of the penalized energy estimate:
/// sup_t int g^{m+1} + int u0^{m+1} + iint (Psi_+^2 + |grad g^m|^2 + |dt g^m|^{(m+1)/m}).
double constant_A(const ObstacleProblemSpec& spec);

/// A-tilde of the weak-solution energy estimate: adds iint g^{2m}, drops Psi.
double constant_Atilde(const ObstacleProblemSpec& spec);

EnergyReport energy_report(const ScalarField& u, double m, const Region& interior,
                           const ObstacleProblemSpec* spec = nullptr);

struct CaccioppoliResult {
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
};

/// lhs = iint zeta^2 |grad u^{(m+1)/2}|^2,
/// rhs = iint ((M-u)^2 zeta |dt zeta| + u^{m-1} (M-u)^2 |grad zeta|^2).
CaccioppoliResult caccioppoli_check(const ScalarField& u, double M,
                                    const CutoffFunction& zeta, double m);

struct SobolevResult {
  double lhs = 0.0;
  double rhs_without_C = 0.0;
  double ell = 0.0;
};

SobolevResult sobolev_check(const ScalarField& v, double p, double r, double x0,
                            double y0, double rho, double t1, double t2);

enum class WeakForm { GradUm, GradUmid };

/// Per-phi residuals iint (-u dt phi + flux . grad phi). GradUm differences
/// the nodal u^m field; GradUmid uses (2m/(m+1)) u^{(m-1)/2} grad u^{(m+1)/2}
/// with the gradient taken from the nodal u^{(m+1)/2} field, so the two
/// formulations differ only by the discrete chain-rule error.
std::vector<double> weak_residual(const ScalarField& u, double m,
                                  const TestFunctionBasis& basis, WeakForm form);

/// lhs - rhs of the averaged (time-mollified) equation per basis element:
/// iint (dt [[u]]_h phi + grad [[u^m]]_h . grad phi)
///   - iint [[penalty source]]_h phi - (1/h) int u0 int phi e^{-s/h}.
/// penalty_source may be null (plain supersolution form); u0 defaults to u(.,0).
std::vector<double> regularized_residual(const ScalarField& u, double m, double h,
                                         const TestFunctionBasis& basis,
                                         const ScalarField* penalty_source = nullptr,
                                         const std::vector<double>* u0 = nullptr);

/// Discrete evaluation of the variational inequality pairing for comparison
/// map v and time cut-off alpha (alpha(T) = 0): the time-bracket term plus
/// iint alpha grad u^m . grad(v^m - u^m).
double variational_residual(const ScalarField& u, const ScalarField& v,
                            const CutoffFunction& alpha,
                            const ObstacleProblemSpec& spec);

struct TruncationEnergy {
  double G_term = 0.0;  // iint |dt zeta| G_eps(u)
  double g_term = 0.0;  // iint |grad zeta|^2 g_eps(u)^2
};

double truncation_g(double s, double eps);  // max(eps, s)
double truncation_G(double s, double eps);  // eps s below eps, (eps^2+s^2)/2 above

TruncationEnergy truncation_energy(const ScalarField& u, double eps,
                                   const CutoffFunction& zeta);

}  // namespace pmelab

#endif
