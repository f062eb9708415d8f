#pragma once

#include <functional>
#include <vector>

#include "vclab/moment.hpp"
#include "vclab/params.hpp"

namespace vclab {

/// Uniform interior grid on (0,L); Dirichlet endpoints are held at zero exactly
/// and are not stored.
struct Grid {
  int n_interior = 0;
  double length = 0.0;
  double spacing() const { return length / (n_interior + 1); }
  double node(int i) const { return (i + 1) * spacing(); }
};

Grid make_grid(int n_interior, double length);

enum class TimeScheme { backward_euler, trapezoidal };

struct Trajectory {
  Grid grid;
  double dt = 0.0;
  int steps = 0;
  std::vector<double> times;                // steps+1
  std::vector<std::vector<double>> states;  // (steps+1) x n_interior
  std::vector<double> trace0;               // d/dx at x = 0 per step, steps+1 entries
};

/// Implicit method-of-lines solve of the control system
///   y_t + eps y_xxxx + delta y_xxx + M y_x = 0,
///   y(t,0) = y(t,L) = 0,  eps y_xx + (delta/2) y_x = u at x=0, = 0 at x=L,
/// with ghost-node elimination of the flux conditions. The control is sampled
/// at step midpoints from its analytic form.
Trajectory solve_forward(const PhysicalParams& p, const std::vector<double>& y0_samples,
                         const std::function<double(double)>& u, const Grid& grid, double dt,
                         TimeScheme scheme = TimeScheme::backward_euler);

/// Forward-in-time form of the adjoint system
///   phi_t + eps phi_xxxx - delta phi_xxx - M phi_x = g,
///   phi = 0 and eps phi_xx - (delta/2) phi_x = 0 at both ends.
/// Callers pairing against the control system apply the time reflection
/// t -> T - t explicitly.
Trajectory solve_adjoint(const PhysicalParams& p, const std::vector<double>& phi0_samples,
                         const std::function<double(double, double)>& g, const Grid& grid,
                         double dt, TimeScheme scheme = TimeScheme::backward_euler);

/// One-sided 4th-order estimate of d/dx at x=0 per stored step.
std::vector<double> boundary_trace(const Trajectory& traj);

/// Trapezoid L^2(0,L) norm of one stored state (zero boundary values included).
double state_l2_norm(const Trajectory& traj, int step_index);

/// Discrete residual of the transposition identity at t = T:
///   int y(T) phi0 = int y0 phi(0,.) + int_0^T u(s) phi_x(s,0) ds,
/// normalized by the larger side. phi solves the backward adjoint with datum
/// phi0; the solver's forward-time trace is reflected here.
double duality_residual(const PhysicalParams& p, const std::vector<double>& y0_samples,
                        const std::function<double(double)>& u,
                        const std::vector<double>& phi0_samples, const Grid& grid, double dt,
                        TimeScheme scheme = TimeScheme::backward_euler);

/// Energy-identity defect of an unforced/forced adjoint trajectory:
/// max over steps of |d/dt (1/2)||phi||^2 + eps ||phi_xx||^2 - <g,phi>|.
double energy_identity_residual(const PhysicalParams& p, const Trajectory& traj,
                                const std::function<double(double, double)>& g = {});

/// L^2 deviation of the solution from pure transport y0(x - tM) over the
/// subdomain {x > tM} at the given step.
double transport_deviation(const PhysicalParams& p, const Trajectory& traj,
                           const std::function<double(double)>& y0, int step_index);

/// ||phi(0,.)||_{L^2(0,L)} / ||phi_x(.,0)||_{L^2(0,T)} for the exact spectral
/// adjoint solution with eigen-coefficients c (phi0 = sum c_k e_k at the
/// terminal time). Evaluated in working precision; lower-bounds the cost.
struct ObservabilityRatio {
  BigFloat value;
  double log_value = 0.0;
};
ObservabilityRatio observability_ratio(const PhysicalParams& p,
                                       const std::vector<double>& eigen_coeffs,
                                       long precision_bits = 256);

/// Supremum of the ratio over the N-mode span (generalized symmetric eigensolve).
ObservabilityRatio observability_sup_ratio(const PhysicalParams& p, int N,
                                           long precision_bits = 256);

/// Initial datum specification: plain sine coefficients, or the tilt-conjugate
/// eigenmode ê_k (the natural worst-case datum).
struct Y0Spec {
  enum class Kind { sine_coeffs, tilted_mode } kind = Kind::sine_coeffs;
  std::vector<double> coeffs;
  int mode = 1;

  static Y0Spec sine(std::vector<double> c);
  static Y0Spec tilted(int mode);
  std::vector<double> samples(const PhysicalParams& p, const Grid& grid) const;
  double l2_norm(const PhysicalParams& p) const;
  bool is_zero() const;
};

struct NullControlRun {
  double final_norm_ratio = 0.0;  // ||y(T)|| / ||y0||
  double control_norm = 0.0;      // ||u||_{L^2(0,T)}
  double max_moment_residual = 0.0;
  long bits_used = 256;
  Trajectory trajectory;
};

/// Moment-method synthesis of the minimal-norm control for the first N modes,
/// fed through the forward solver.
NullControlRun end_to_end_null_control(const PhysicalParams& p, const Y0Spec& y0, int N,
                                       const Grid& grid, double dt, long precision_bits = 256,
                                       TimeScheme scheme = TimeScheme::backward_euler);

}  // namespace vclab
