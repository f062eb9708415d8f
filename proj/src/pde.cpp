#include "vclab/pde.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "vclab/errors.hpp"
#include "vclab/spectral.hpp"

namespace vclab {

namespace {
constexpr double kPi = std::numbers::pi;

struct Discretization {
  Eigen::SparseMatrix<double> A;  // semi-discrete dy/dt = -A y + b u(t) + g(t)
  Eigen::VectorXd b;
};

// Interior operator with ghost-node elimination of the two flux conditions.
// adjoint=false: eps D4 + delta D3 + M D1 with  eps y_xx + (del/2) y_x = u | 0.
// adjoint=true:  eps D4 - delta D3 - M D1 with  eps p_xx - (del/2) p_x = 0 | 0.
Discretization assemble(const PhysicalParams& p, const Grid& grid, bool adjoint) {
  const int n = grid.n_interior;
  const double h = grid.spacing();
  const double c4 = p.epsilon / (h * h * h * h);
  const double s3 = (adjoint ? -p.delta : p.delta) / (2.0 * h * h * h);
  const double s1 = (adjoint ? -p.mach : p.mach) / (2.0 * h);
  const double off[5] = {c4 - s3, -4.0 * c4 + 2.0 * s3 - s1, 6.0 * c4,
                         -4.0 * c4 - 2.0 * s3 + s1, c4 + s3};

  const double fa = p.epsilon / (h * h);
  const double fb = p.delta / (4.0 * h);
  const double scale = fa + std::fabs(fb);
  // left end: forward eliminates against the control flux, adjoint against B* = 0
  const double den_left = adjoint ? (fa + fb) : (fa - fb);
  const double num_left = adjoint ? (fa - fb) : (fa + fb);
  const double den_right = adjoint ? (fa - fb) : (fa + fb);
  const double num_right = adjoint ? (fa + fb) : (fa - fb);
  if (std::fabs(den_left) < 1e-10 * scale || std::fabs(den_right) < 1e-10 * scale)
    throw LinearSolveError("assemble: flux closure degenerate at this grid spacing");

  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<size_t>(5 * n));
  for (int i = 0; i < n; ++i)
    for (int o = -2; o <= 2; ++o) {
      const int j = i + o;
      if (j >= 0 && j < n) trip.emplace_back(i, j, off[o + 2]);
    }
  // ghost folds
  trip.emplace_back(0, 0, off[0] * (-num_left / den_left));
  trip.emplace_back(n - 1, n - 1, off[4] * (-num_right / den_right));

  Discretization d;
  d.A.resize(n, n);
  d.A.setFromTriplets(trip.begin(), trip.end());
  d.b = Eigen::VectorXd::Zero(n);
  if (!adjoint) d.b(0) = -off[0] / den_left;  // ghost = u/den_left - ...
  return d;
}

double trace_at_zero(const std::vector<double>& y, double h) {
  // one-sided 4th order with y(0) = 0
  return (48.0 * y[0] - 36.0 * y[1] + 16.0 * y[2] - 3.0 * y[3]) / (12.0 * h);
}

Trajectory run_solver(const PhysicalParams& p, const std::vector<double>& init,
                      const std::function<double(double)>& u,
                      const std::function<double(double, double)>& g, const Grid& grid,
                      double dt, TimeScheme scheme, bool adjoint) {
  const int n = grid.n_interior;
  if (static_cast<int>(init.size()) != n)
    throw std::domain_error("solver: initial samples do not match the grid");
  if (!(dt > 0.0)) throw std::domain_error("solver: dt must be positive");
  const int steps = std::max(1, static_cast<int>(std::llround(p.horizon / dt)));
  const double dt_eff = p.horizon / steps;

  Discretization d = assemble(p, grid, adjoint);
  const double c = (scheme == TimeScheme::trapezoidal) ? 0.5 * dt_eff : dt_eff;
  Eigen::SparseMatrix<double> lhs(n, n);
  lhs.setIdentity();
  lhs += c * d.A;
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.compute(lhs);
  if (lu.info() != Eigen::Success)
    throw LinearSolveError("solver: per-step system is singular (bad grid/dt combination)");

  Trajectory traj;
  traj.grid = grid;
  traj.dt = dt_eff;
  traj.steps = steps;
  traj.times.resize(steps + 1);
  traj.states.assign(steps + 1, std::vector<double>(n, 0.0));
  traj.trace0.resize(steps + 1);
  traj.states[0] = init;
  traj.times[0] = 0.0;
  traj.trace0[0] = trace_at_zero(init, grid.spacing());

  Eigen::VectorXd y = Eigen::Map<const Eigen::VectorXd>(init.data(), n);
  for (int m = 0; m < steps; ++m) {
    const double t_mid = (m + 0.5) * dt_eff;
    Eigen::VectorXd rhs = (scheme == TimeScheme::trapezoidal)
                              ? Eigen::VectorXd(y - (0.5 * dt_eff) * (d.A * y))
                              : y;
    if (u) rhs += dt_eff * u(t_mid) * d.b;
    if (g) {
      for (int i = 0; i < n; ++i) rhs(i) += dt_eff * g(t_mid, grid.node(i));
    }
    y = lu.solve(rhs);
    if (!y.allFinite())
      throw LinearSolveError("solver: step produced non-finite state");
    auto& row = traj.states[m + 1];
    Eigen::Map<Eigen::VectorXd>(row.data(), n) = y;
    traj.times[m + 1] = (m + 1) * dt_eff;
    traj.trace0[m + 1] = trace_at_zero(row, grid.spacing());
  }
  return traj;
}
}  // namespace

Grid make_grid(int n_interior, double length) {
  if (n_interior < 8) throw std::domain_error("make_grid: need at least 8 interior nodes");
  if (!(length > 0.0)) throw std::domain_error("make_grid: length must be positive");
  return Grid{n_interior, length};
}

Trajectory solve_forward(const PhysicalParams& p, const std::vector<double>& y0_samples,
                         const std::function<double(double)>& u, const Grid& grid, double dt,
                         TimeScheme scheme) {
  return run_solver(p, y0_samples, u, {}, grid, dt, scheme, /*adjoint=*/false);
}

Trajectory solve_adjoint(const PhysicalParams& p, const std::vector<double>& phi0_samples,
                         const std::function<double(double, double)>& g, const Grid& grid,
                         double dt, TimeScheme scheme) {
  return run_solver(p, phi0_samples, {}, g, grid, dt, scheme, /*adjoint=*/true);
}

std::vector<double> boundary_trace(const Trajectory& traj) { return traj.trace0; }

double state_l2_norm(const Trajectory& traj, int step_index) {
  const auto& s = traj.states.at(step_index);
  double acc = 0.0;
  for (double v : s) acc += v * v;
  return std::sqrt(acc * traj.grid.spacing());
}

double duality_residual(const PhysicalParams& p, const std::vector<double>& y0_samples,
                        const std::function<double(double)>& u,
                        const std::vector<double>& phi0_samples, const Grid& grid, double dt,
                        TimeScheme scheme) {
  Trajectory fwd = solve_forward(p, y0_samples, u, grid, dt, scheme);
  Trajectory adj = solve_adjoint(p, phi0_samples, {}, grid, dt, scheme);
  const double h = grid.spacing();
  const int n = grid.n_interior;

  double lhs = 0.0;
  for (int i = 0; i < n; ++i) lhs += fwd.states.back()[i] * phi0_samples[i];
  lhs *= h;

  double rhs = 0.0;
  for (int i = 0; i < n; ++i) rhs += y0_samples[i] * adj.states.back()[i];
  rhs *= h;

  // int_0^T u(s) phi_x(s,0) ds with the adjoint trace reflected in time;
  // the flux pairing contributes it with a minus sign
  double ctrl = 0.0;
  for (int m = 0; m <= fwd.steps; ++m) {
    const double w = (m == 0 || m == fwd.steps) ? 0.5 : 1.0;
    const double s = fwd.times[m];
    ctrl += w * (u ? u(s) : 0.0) * adj.trace0[fwd.steps - m];
  }
  ctrl *= fwd.dt;
  rhs -= ctrl;

  const double denom = std::max({std::fabs(lhs), std::fabs(rhs), 1e-300});
  return std::fabs(lhs - rhs) / denom;
}

double energy_identity_residual(const PhysicalParams& p, const Trajectory& traj,
                                const std::function<double(double, double)>& g) {
  const Grid& grid = traj.grid;
  const int n = grid.n_interior;
  const double h = grid.spacing();
  const double fa = p.epsilon / (h * h);
  const double fb = p.delta / (4.0 * h);
  const double ghost_left = -(fa - fb) / (fa + fb);   // B* closure at x=0
  const double ghost_right = -(fa + fb) / (fa - fb);  // B* closure at x=L

  auto energy = [&](const std::vector<double>& s) {
    double acc = 0.0;
    for (double v : s) acc += v * v;
    return 0.5 * acc * h;
  };
  auto bending = [&](const std::vector<double>& s) {
    double acc = 0.0;
    // endpoint curvatures via the eliminated ghosts (Dirichlet value is 0)
    const double c0 = (ghost_left * s[0] + s[0]) / (h * h);
    const double cn = (s[n - 1] + ghost_right * s[n - 1]) / (h * h);
    acc += 0.5 * (c0 * c0 + cn * cn);
    for (int i = 0; i < n; ++i) {
      const double lm = (i == 0) ? 0.0 : s[i - 1];
      const double rp = (i == n - 1) ? 0.0 : s[i + 1];
      const double c = (lm - 2.0 * s[i] + rp) / (h * h);
      acc += c * c;
    }
    return acc * h;
  };
  auto source = [&](const std::vector<double>& s, double t) {
    if (!g) return 0.0;
    double acc = 0.0;
    for (int i = 0; i < n; ++i) acc += g(t, grid.node(i)) * s[i];
    return acc * h;
  };

  double worst = 0.0;
  for (int m = 0; m < traj.steps; ++m) {
    const double dE = (energy(traj.states[m + 1]) - energy(traj.states[m])) / traj.dt;
    const double D = 0.5 * (bending(traj.states[m]) + bending(traj.states[m + 1]));
    const double P = 0.5 * (source(traj.states[m], traj.times[m]) +
                            source(traj.states[m + 1], traj.times[m + 1]));
    worst = std::max(worst, std::fabs(dE + p.epsilon * D - P));
  }
  return worst;
}

double transport_deviation(const PhysicalParams& p, const Trajectory& traj,
                           const std::function<double(double)>& y0, int step_index) {
  const double t = traj.times.at(step_index);
  const double shift = t * p.mach;
  const Grid& grid = traj.grid;
  double acc = 0.0;
  for (int i = 0; i < grid.n_interior; ++i) {
    const double x = grid.node(i);
    const double xs = x - shift;
    if (xs <= 0.0 || xs >= grid.length) continue;
    const double diff = traj.states[step_index][i] - y0(xs);
    acc += diff * diff;
  }
  return std::sqrt(acc * grid.spacing());
}

ObservabilityRatio observability_ratio(const PhysicalParams& p,
                                       const std::vector<double>& eigen_coeffs,
                                       long precision_bits) {
  const int N = static_cast<int>(eigen_coeffs.size());
  if (N < 1) throw std::domain_error("observability_ratio: need coefficients");
  const long bits = precision_bits;
  mp::Vector lam = eigenvalues_mp(p, N, bits);
  mp::Matrix S = tilted_sine_matrix_mp(2.0 * p.tilt(), p.length, N, bits);
  const BigFloat T(p.horizon, bits), L(p.length, bits);
  const BigFloat pi = BigFloat::pi(bits);

  BigFloat num2(bits), den2(bits);
  for (int j = 0; j < N; ++j)
    for (int k = 0; k < N; ++k) {
      if (eigen_coeffs[j] == 0.0 || eigen_coeffs[k] == 0.0) continue;
      BigFloat cjk = BigFloat(eigen_coeffs[j], bits) * BigFloat(eigen_coeffs[k], bits);
      num2 += cjk * exp(-(lam[j] + lam[k]) * T) * S.at(j, k);
      BigFloat gram = -expm1(-(lam[j] + lam[k]) * T) / (lam[j] + lam[k]);
      BigFloat wj = BigFloat(static_cast<long>(j + 1), bits) * pi / L;
      BigFloat wk = BigFloat(static_cast<long>(k + 1), bits) * pi / L;
      den2 += cjk * wj * wk * gram;
    }
  ObservabilityRatio r{BigFloat(bits), 0.0};
  if (den2.sign() <= 0 || num2.sign() < 0) return r;
  r.value = sqrt(num2 / den2);
  r.log_value = r.value.log_abs_double();
  return r;
}

ObservabilityRatio observability_sup_ratio(const PhysicalParams& p, int N, long precision_bits) {
  const long bits = precision_bits;
  mp::Vector lam = eigenvalues_mp(p, N, bits);
  mp::Matrix S = tilted_sine_matrix_mp(2.0 * p.tilt(), p.length, N, bits);
  const BigFloat T(p.horizon, bits), L(p.length, bits);
  const BigFloat pi = BigFloat::pi(bits);
  mp::Matrix Q = mp::Matrix::zeros(N, N, bits);
  mp::Matrix Gb = mp::Matrix::zeros(N, N, bits);
  for (int j = 0; j < N; ++j)
    for (int k = 0; k < N; ++k) {
      Q.at(j, k) = exp(-(lam[j] + lam[k]) * T) * S.at(j, k);
      BigFloat gram = -expm1(-(lam[j] + lam[k]) * T) / (lam[j] + lam[k]);
      BigFloat wj = BigFloat(static_cast<long>(j + 1), bits) * pi / L;
      BigFloat wk = BigFloat(static_cast<long>(k + 1), bits) * pi / L;
      Gb.at(j, k) = wj * wk * gram;
    }
  mp::Matrix Lb = mp::cholesky(Gb);
  mp::Matrix Y = mp::lower_solve(Lb, Q);
  mp::Matrix C = mp::lower_solve(Lb, mp::transpose(Y));
  mp::Vector ev = mp::jacobi_eigenvalues(C);
  BigFloat lmax = ev.back();
  ObservabilityRatio r{BigFloat(bits), 0.0};
  if (lmax.sign() <= 0) return r;
  r.value = sqrt(lmax);
  r.log_value = r.value.log_abs_double();
  return r;
}

Y0Spec Y0Spec::sine(std::vector<double> c) {
  Y0Spec s;
  s.kind = Kind::sine_coeffs;
  s.coeffs = std::move(c);
  return s;
}

Y0Spec Y0Spec::tilted(int mode) {
  Y0Spec s;
  s.kind = Kind::tilted_mode;
  s.mode = mode;
  return s;
}

std::vector<double> Y0Spec::samples(const PhysicalParams& p, const Grid& grid) const {
  std::vector<double> out(grid.n_interior, 0.0);
  for (int i = 0; i < grid.n_interior; ++i) {
    const double x = grid.node(i);
    if (kind == Kind::tilted_mode) {
      out[i] = tilted_mode_eval(p, mode, x);
    } else {
      double v = 0.0;
      for (size_t j = 0; j < coeffs.size(); ++j)
        v += coeffs[j] * std::sin((j + 1) * kPi * x / p.length);
      out[i] = v;
    }
  }
  return out;
}

double Y0Spec::l2_norm(const PhysicalParams& p) const {
  if (kind == Kind::tilted_mode) return tilted_mode_l2_norm(p, mode);
  double s2 = 0.0;
  for (double b : coeffs) s2 += b * b;
  return std::sqrt(s2 * p.length / 2.0);
}

bool Y0Spec::is_zero() const {
  if (kind == Kind::tilted_mode) return false;
  for (double b : coeffs)
    if (b != 0.0) return false;
  return true;
}

NullControlRun end_to_end_null_control(const PhysicalParams& p, const Y0Spec& y0, int N,
                                       const Grid& grid, double dt, long precision_bits,
                                       TimeScheme scheme) {
  NullControlRun run;
  std::vector<double> y0_samples = y0.samples(p, grid);
  if (y0.is_zero()) {
    run.trajectory = solve_forward(p, y0_samples, {}, grid, dt, scheme);
    run.final_norm_ratio = 0.0;
    run.control_norm = 0.0;
    run.bits_used = precision_bits;
    return run;
  }

  long bits = std::max<long>(64, precision_bits);
  ControlFunction u;
  for (;;) {
    try {
      MomentProblem prob;
      prob.params = p;
      prob.order = N;
      prob.precision_bits = bits;
      prob.lambdas = eigenvalues_mp(p, N, bits);
      prob.targets = (y0.kind == Y0Spec::Kind::tilted_mode)
                         ? target_moments_tilted_mode(p, y0.mode, N, bits)
                         : target_moments(p, y0.coeffs, N, bits, /*pad_with_zeros=*/true);
      u = solve_min_norm_control(prob);
      break;
    } catch (const ConditioningError&) {
      if (bits >= 4096) throw;
      bits = std::min<long>(4096, bits * 2);
    }
  }
  run.bits_used = bits;
  run.control_norm = u.norm.to_double();
  run.max_moment_residual = u.max_moment_residual;

  auto u_fn = [u](double t) { return u(t); };
  run.trajectory = solve_forward(p, y0_samples, u_fn, grid, dt, scheme);
  const double y0n = state_l2_norm(run.trajectory, 0);
  const double yTn = state_l2_norm(run.trajectory, run.trajectory.steps);
  run.final_norm_ratio = (y0n > 0.0) ? yTn / y0n : 0.0;
  return run;
}

}  // namespace vclab
