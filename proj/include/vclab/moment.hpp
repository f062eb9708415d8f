#pragma once

#include <optional>
#include <vector>

#include "vclab/mp.hpp"
#include "vclab/params.hpp"

namespace vclab {

/// Finite-section moment problem for the exponential family
/// {exp(-lambda_k (T-t))}: a null control u must satisfy
///   int_0^T u(t) exp(-lambda_k (T-t)) dt = d_k,  k = 1..N.
struct MomentProblem {
  PhysicalParams params;
  int order = 0;
  long precision_bits = 256;
  mp::Vector lambdas;
  mp::Vector targets;
};

/// Pairwise L^2(0,T) inner products of the exponential family,
/// G[j][k] = (1 - exp(-(l_j+l_k) T)) / (l_j + l_k), SPD-verified by Cholesky.
struct GramMatrix {
  int order = 0;
  long precision_bits = 256;
  double horizon = 0.0;
  mp::Vector lambdas;
  mp::Matrix entries;
  mp::Matrix chol;               // lower Cholesky factor
  double log10_condition = 0.0;  // log10 of the spectral condition number
};

/// u(t) = sum_k alpha_k exp(-lambda_k (T - t)).
struct ControlFunction {
  double horizon = 0.0;
  mp::Vector lambdas;
  mp::Vector alphas;
  BigFloat norm;                      // ||u||_{L^2(0,T)} = sqrt(alpha^T G alpha)
  double max_moment_residual = 0.0;   // max_k |(G alpha - d)_k| / scale

  double operator()(double t) const;  // evaluated in mp, returned as double
  BigFloat eval_mp(const BigFloat& t) const;
};

/// Eigenvalues lifted to working precision (same closed form as spectral_core).
mp::Vector eigenvalues_mp(const PhysicalParams& p, int N, long bits);

/// Closed-form matrix of int_0^L exp(-nu x) sin(k pi x/L) sin(j pi x/L) dx at
/// working precision; row j, column k (0-based storage of 1-based modes).
mp::Matrix tilted_sine_matrix_mp(double nu, double L, int N, long bits);

GramMatrix gram_matrix(const mp::Vector& lambdas, double T, long precision_bits);
GramMatrix gram_matrix(const PhysicalParams& p, int N, long precision_bits);

/// Moment targets d_k = -(L/(k pi)) exp(-lambda_k T) mu_k for initial data
/// given by plain sine coefficients (mu = E^T b via the dual expansion).
/// Throws std::domain_error if fewer than N coefficients are supplied and
/// pad_with_zeros is false.
mp::Vector target_moments(const PhysicalParams& p, const std::vector<double>& y0_sine_coeffs,
                          int N, long precision_bits, bool pad_with_zeros = false);

/// Targets for the tilt-conjugate datum y0 = ê_mode (mu_k = (L/2) delta_{k,mode}).
mp::Vector target_moments_tilted_mode(const PhysicalParams& p, int mode, int N,
                                      long precision_bits);

/// Normal-equations minimal-norm solution alpha = G^{-1} d.
/// Throws SingularError on coincident rates, ConditioningError if the Gram
/// factorization fails at the problem's precision.
ControlFunction solve_min_norm_control(const MomentProblem& problem);

/// sqrt((G^{-1})_{kk}): L^2 norm of the k-th finite-section biorthogonal element.
BigFloat biorthogonal_norm(const GramMatrix& gram, int k);

/// Independent check of the biorthogonal property by tanh-sinh quadrature:
/// returns int_0^T psi_k(t) exp(-lambda_j (T-t)) dt.
BigFloat biorthogonal_pairing_quadrature(const GramMatrix& gram, int j, int k);

struct CostEstimate {
  BigFloat value;             // K_N
  double log_value = 0.0;     // ln K_N
  double log10_condition = 0.0;
  long bits_used = 256;
  int order = 0;
};

/// K_N: operator norm of (unit-L^2 sine data) -> minimal control norm,
/// sqrt(lambda_max((2/L) (D E^T)^T G^{-1} (D E^T))). Nondecreasing in N and a
/// certified lower bound for the continuum cost. Starts at precision_bits and
/// doubles up to 4096 on ConditioningError before failing loudly.
CostEstimate cost_estimate(const PhysicalParams& p, int N, long precision_bits = 256);

/// Parameter maps of the two exact cost scaling relations.
PhysicalParams scaled_params_time_length(const PhysicalParams& p, double a);
PhysicalParams scaled_params_viscosity(const PhysicalParams& p, double a);

/// Relative residual of a^{1/8} K_N(eps, aT, a^{1/4}L, a^{-3/4}M) = K_N(...).
double cost_scaling_residual_time_length(const PhysicalParams& p, double a, int N,
                                         long precision_bits = 256);
/// Relative residual of a^{-3/8} K_N(a eps, T, a^{1/4}L, a^{1/4}M) = K_N(...).
double cost_scaling_residual_viscosity(const PhysicalParams& p, double a, int N,
                                       long precision_bits = 256);

}  // namespace vclab
