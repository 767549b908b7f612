#ifndef PMELAB_CALCULUS_HPP
#define PMELAB_CALCULUS_HPP

#include <array>
#include <vector>

#include "pmelab/field.hpp"

namespace pmelab {

using Vec2 = std::array<double, 2>;

/// Central differences at interior nodes, one-sided at boundary nodes.
/// Exact on affine fields; central part exact on quadratics.
std::vector<Vec2> slice_gradient(const SpaceTimeGrid& g, const std::vector<double>& v);
std::vector<Vec2> discrete_gradient(const ScalarField& f, int t_index);

/// Standard 3/5-point Laplacian at interior nodes; boundary nodes copy the
/// nearest interior value (used only for data-derived source terms).
std::vector<double> slice_laplacian(const SpaceTimeGrid& g, const std::vector<double>& v);

/// Forward/backward differences at the ends, central in between.
ScalarField time_derivative(const ScalarField& f);

/// Composite space-time trapezoid integral over the node box covered by the region.
double integrate(const ScalarField& f, const Region& region);

/// Spatial trapezoid integral of one slice over the whole domain.
double integrate_slice(const SpaceTimeGrid& g, const std::vector<double>& v);

/// Spatial trapezoid integral of f(., t_k) restricted to a node mask
/// ({|x - x0| <= rho} ball masks are built this way).
double integrate_slice_masked(const SpaceTimeGrid& g, const std::vector<double>& v,
                              const std::vector<char>& mask);

std::vector<char> ball_mask(const SpaceTimeGrid& g, double x0, double y0, double rho);

/// s^p extended by 0 for s <= 0 (continuous extension for p > 0).
double pow_nonneg(double s, double p);

double trapezoid_time_weight(const SpaceTimeGrid& g, int k);
double trapezoid_space_weight(const SpaceTimeGrid& g, int node);

}  // namespace pmelab

#endif
