#pragma once

#include <span>
#include <vector>

#include "vclab/params.hpp"

namespace vclab {

/// One eigenpair of the adjoint spatial operator
///   P = eps d^4/dx^4 + 2 eps^{2/3} M^{1/3} d^3/dx^3 - M d/dx
/// on (0,L) with Dirichlet + natural flux conditions. The eigenfunctions are
/// e_k(x) = exp(-weight_rate x) sin(k pi x / L).
struct Eigenpair {
  int index;
  double lambda;
  double weight_rate;
};

double eigenvalue(const PhysicalParams& p, int k);
Eigenpair eigenpair(const PhysicalParams& p, int k);

/// e_k(x); exact zeros at x = 0 and x = L. Throws std::domain_error outside [0,L].
double eigenfunction_eval(const PhysicalParams& p, int k, double x);

/// e_k'(0) = k pi / L.
double eigenfunction_derivative_at_zero(const PhysicalParams& p, int k);

/// Tilt-conjugate mode ê_k(x) = exp(+weight_rate x) sin(k pi x / L); eigenmode of
/// the forward operator with the same eigenvalue, satisfying the homogeneous
/// flux condition of the control system.
double tilted_mode_eval(const PhysicalParams& p, int k, double x);

/// Exact L^2(0,L) norms (elementary closed forms).
double eigenfunction_l2_norm(const PhysicalParams& p, int k);
double tilted_mode_l2_norm(const PhysicalParams& p, int k);

/// Quadrature approximation (composite Simpson / trapezoid on the sampled grid)
/// of <u,v> = int_0^L exp(M^{1/3} eps^{-1/3} x) u v dx. The family
/// sqrt(2/L) e_k is orthonormal under this product.
double weighted_inner_product(const PhysicalParams& p, std::span<const double> u,
                              std::span<const double> v, std::span<const double> grid);

/// Max over interior stencil points of |P e_k - lambda_k e_k| with centered
/// finite differences (5-point 4th derivative, 4th-order 1st/3rd derivatives).
/// Converges at the 4th-derivative stencil's order (2) as spacing -> 0.
double apply_operator_residual(const PhysicalParams& p, int k, double grid_spacing);

/// Closed-form products int_0^L exp(-nu x) sin(k pi x/L) sin(j pi x/L) dx.
double tilted_sine_product(double nu, double L, int j, int k);

/// Matrix E with E[j][k] = int_0^L e_k(x) sin(j pi x / L) dx, 1-based modes,
/// stored row-major with 0-based indexing. Maps sine coefficients of initial
/// data to eigen-expansion pairings.
struct DualExpansion {
  int order = 0;
  std::vector<double> entries;
  double operator()(int j, int k) const { return entries[static_cast<size_t>(j) * order + k]; }
};

DualExpansion dual_expansion(const PhysicalParams& p, int N);

/// Plain-L^2 Gram of {e_1..e_N} (the tilt doubles): S[j][k] = int e_j e_k.
DualExpansion eigenmode_gram(const PhysicalParams& p, int N);

}  // namespace vclab
