#include "vclab/moment.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "vclab/errors.hpp"

namespace vclab {

namespace {
// (1 - exp(-x)) / x at full precision, x != 0.
BigFloat expm1_ratio_mp(const BigFloat& x) {
  return -expm1(-x) / x;
}

void check_lambdas(const mp::Vector& lambdas) {
  for (size_t i = 0; i < lambdas.size(); ++i) {
    if (!(lambdas[i].sign() > 0))
      throw std::domain_error("gram_matrix: rates must be positive");
    if (i > 0) {
      double rel = ((lambdas[i] - lambdas[i - 1]) / lambdas[i]).to_double();
      if (!(rel > 0))
        throw std::domain_error("gram_matrix: rates must be strictly increasing");
      if (rel < 1e-12)
        throw SingularError("exponential rates " + std::to_string(i) + "," +
                            std::to_string(i + 1) + " coincide to working precision");
    }
  }
}
}  // namespace

double ControlFunction::operator()(double t) const {
  const long bits = alphas.empty() ? 64 : alphas[0].precision();
  return eval_mp(BigFloat(t, bits)).to_double();
}

BigFloat ControlFunction::eval_mp(const BigFloat& t) const {
  const long bits = alphas.empty() ? 64 : alphas[0].precision();
  BigFloat T(horizon, bits);
  BigFloat s(bits);
  for (size_t k = 0; k < alphas.size(); ++k) s += alphas[k] * exp(-lambdas[k] * (T - t));
  return s;
}

mp::Vector eigenvalues_mp(const PhysicalParams& p, int N, long bits) {
  const BigFloat pi = BigFloat::pi(bits);
  const BigFloat eps(p.epsilon, bits), M(p.mach, bits), L(p.length, bits);
  const BigFloat m13 = cbrt(M), e13 = cbrt(eps);
  const BigFloat tilt_sq = BigFloat(0.75, bits) * m13 * m13 / (e13 * e13);
  const BigFloat shift = pow_int(m13, 4) / (BigFloat(4.0, bits) * e13);
  mp::Vector lam(static_cast<size_t>(N), BigFloat(bits));
  for (int k = 1; k <= N; ++k) {
    BigFloat s = BigFloat(static_cast<long>(k), bits) * pi / L;
    BigFloat bracket = s * s + tilt_sq;
    lam[k - 1] = eps * bracket * bracket - shift;
  }
  return lam;
}

mp::Matrix tilted_sine_matrix_mp(double nu, double L, int N, long bits) {
  const BigFloat pi = BigFloat::pi(bits);
  const BigFloat bl(L, bits), bnu(nu, bits);
  mp::Matrix E = mp::Matrix::zeros(N, N, bits);
  for (int j = 1; j <= N; ++j)
    for (int k = 1; k <= N; ++k) {
      if (j == k) {
        BigFloat c = BigFloat(2L * k, bits) * pi / bl;
        // int exp(-nu x) sin^2 = (1-e^{-nu L})/(2 nu) * c^2/(nu^2+c^2)
        BigFloat q = (nu == 0.0) ? bl : expm1_ratio_mp(bnu * bl) * bl;
        E.at(j - 1, k - 1) = BigFloat(0.5, bits) * q * c * c / (bnu * bnu + c * c);
      } else {
        BigFloat am = BigFloat(static_cast<long>(k - j), bits) * pi / bl;
        BigFloat ap = BigFloat(static_cast<long>(k + j), bits) * pi / bl;
        BigFloat sign(((k + j) % 2 == 0) ? 1.0 : -1.0, bits);
        BigFloat pref = BigFloat(0.5, bits) * bnu * (BigFloat(1.0, bits) - sign * exp(-bnu * bl));
        E.at(j - 1, k - 1) =
            pref * (BigFloat(1.0, bits) / (bnu * bnu + am * am) -
                    BigFloat(1.0, bits) / (bnu * bnu + ap * ap));
      }
    }
  return E;
}

GramMatrix gram_matrix(const mp::Vector& lambdas, double T, long precision_bits) {
  if (lambdas.empty()) throw std::domain_error("gram_matrix: need at least one rate");
  if (precision_bits < 64) throw std::domain_error("gram_matrix: precision_bits must be >= 64");
  check_lambdas(lambdas);
  const int N = static_cast<int>(lambdas.size());
  GramMatrix g;
  g.order = N;
  g.precision_bits = precision_bits;
  g.horizon = T;
  g.lambdas = lambdas;
  g.entries = mp::Matrix::zeros(N, N, precision_bits);
  const BigFloat bt(T, precision_bits);
  for (int j = 0; j < N; ++j)
    for (int k = j; k < N; ++k) {
      BigFloat s = lambdas[j] + lambdas[k];
      BigFloat e = -expm1(-s * bt) / s;
      g.entries.at(j, k) = e;
      g.entries.at(k, j) = e;
    }
  g.chol = mp::cholesky(g.entries);  // throws ConditioningError when precision is too low
  mp::Vector ev = mp::jacobi_eigenvalues(g.entries);
  const double lmin = ev.front().log_abs_double();
  const double lmax = ev.back().log_abs_double();
  g.log10_condition = (lmax - lmin) / std::log(10.0);
  return g;
}

GramMatrix gram_matrix(const PhysicalParams& p, int N, long precision_bits) {
  return gram_matrix(eigenvalues_mp(p, N, precision_bits), p.horizon, precision_bits);
}

namespace {
// d_k = (L/(k pi)) exp(-lambda_k T) mu_k. The transposition identity pairs the
// control against the adjoint trace with a minus sign once both flux operators
// are eliminated, so the null-control moments carry a positive prefactor here;
// a control cancels y0 iff int u exp(-lambda_k (T-t)) = d_k with this sign
// (the opposite choice doubles the tracked modes instead of steering them out).
mp::Vector targets_from_mu(const PhysicalParams& p, const mp::Vector& mu, int N, long bits) {
  const BigFloat pi = BigFloat::pi(bits);
  const BigFloat L(p.length, bits), T(p.horizon, bits);
  mp::Vector lam = eigenvalues_mp(p, N, bits);
  mp::Vector d(static_cast<size_t>(N), BigFloat(bits));
  for (int k = 1; k <= N; ++k)
    d[k - 1] = (L / (BigFloat(static_cast<long>(k), bits) * pi)) * exp(-lam[k - 1] * T) * mu[k - 1];
  return d;
}
}  // namespace

mp::Vector target_moments(const PhysicalParams& p, const std::vector<double>& y0_sine_coeffs,
                          int N, long precision_bits, bool pad_with_zeros) {
  if (N < 1) throw std::domain_error("target_moments: N must be >= 1");
  if (static_cast<int>(y0_sine_coeffs.size()) < N && !pad_with_zeros)
    throw std::domain_error(
        "target_moments: coefficient vector shorter than N (pass pad_with_zeros to extend)");
  mp::Matrix E = tilted_sine_matrix_mp(p.tilt(), p.length, N, precision_bits);
  mp::Vector mu(static_cast<size_t>(N), BigFloat(precision_bits));
  for (int k = 0; k < N; ++k)
    for (int j = 0; j < N; ++j) {
      const double bj = (j < static_cast<int>(y0_sine_coeffs.size())) ? y0_sine_coeffs[j] : 0.0;
      if (bj != 0.0) mu[k] += BigFloat(bj, precision_bits) * E.at(j, k);
    }
  return targets_from_mu(p, mu, N, precision_bits);
}

mp::Vector target_moments_tilted_mode(const PhysicalParams& p, int mode, int N,
                                      long precision_bits) {
  if (mode < 1 || mode > N) throw std::domain_error("target_moments_tilted_mode: mode out of range");
  mp::Vector mu(static_cast<size_t>(N), BigFloat(precision_bits));
  mu[mode - 1] = BigFloat(p.length, precision_bits) / BigFloat(2.0, precision_bits);
  return targets_from_mu(p, mu, N, precision_bits);
}

ControlFunction solve_min_norm_control(const MomentProblem& problem) {
  GramMatrix g = gram_matrix(problem.lambdas, problem.params.horizon, problem.precision_bits);
  ControlFunction u;
  u.horizon = problem.params.horizon;
  u.lambdas = problem.lambdas;
  u.alphas = mp::cholesky_solve(g.chol, problem.targets);
  u.norm = sqrt(mp::dot(u.alphas, mp::multiply(g.entries, u.alphas)));
  // residual of the normal equations, relative to the target scale; the
  // 10^{-bits/4} budget is compared in logs (the values underflow double)
  mp::Vector r = mp::multiply(g.entries, u.alphas);
  BigFloat scale(problem.precision_bits);
  for (const auto& d : problem.targets) scale = max(scale, abs(d));
  double worst_log10 = -std::numeric_limits<double>::infinity();
  for (size_t k = 0; k < r.size(); ++k) {
    BigFloat res = abs(r[k] - problem.targets[k]);
    if (!scale.is_zero() && !res.is_zero())
      worst_log10 = std::max(worst_log10, (res / scale).log_abs_double() / std::log(10.0));
  }
  u.max_moment_residual = std::pow(10.0, std::max(worst_log10, -300.0));
  if (worst_log10 == -std::numeric_limits<double>::infinity()) u.max_moment_residual = 0.0;
  if (worst_log10 > -static_cast<double>(problem.precision_bits) / 4.0)
    throw ConditioningError("solve_min_norm_control: moment residual 1e" +
                            std::to_string(worst_log10) + " exceeds the precision budget");
  return u;
}

BigFloat biorthogonal_norm(const GramMatrix& gram, int k) {
  if (k < 1 || k > gram.order) throw std::domain_error("biorthogonal_norm: k out of range");
  mp::Vector e(static_cast<size_t>(gram.order), BigFloat(gram.precision_bits));
  e[k - 1] = BigFloat(1.0, gram.precision_bits);
  mp::Vector col = mp::cholesky_solve(gram.chol, e);
  return sqrt(col[k - 1]);
}

BigFloat biorthogonal_pairing_quadrature(const GramMatrix& gram, int j, int k) {
  const long bits = gram.precision_bits;
  mp::Vector e(static_cast<size_t>(gram.order), BigFloat(bits));
  e[k - 1] = BigFloat(1.0, bits);
  mp::Vector psi = mp::cholesky_solve(gram.chol, e);  // psi_k coefficients
  const BigFloat T(gram.horizon, bits);
  auto integrand = [&](const BigFloat& t) {
    BigFloat s(bits);
    for (int m = 0; m < gram.order; ++m) s += psi[m] * exp(-gram.lambdas[m] * (T - t));
    return s * exp(-gram.lambdas[j - 1] * (T - t));
  };
  const double tol = -static_cast<double>(bits) * 0.30103 * 0.5;
  // pairings are Kronecker deltas; converge against that unit scale
  return mp::integrate_tanh_sinh(integrand, BigFloat(0.0, bits), T, bits, tol, 14, 1.0);
}

namespace {
CostEstimate cost_estimate_at(const PhysicalParams& p, int N, long bits) {
  mp::Vector lam = eigenvalues_mp(p, N, bits);
  GramMatrix g = gram_matrix(lam, p.horizon, bits);
  mp::Matrix E = tilted_sine_matrix_mp(p.tilt(), p.length, N, bits);
  const BigFloat pi = BigFloat::pi(bits);
  const BigFloat L(p.length, bits), T(p.horizon, bits);
  // M_map = D E^T with D_k = (L/(k pi)) exp(-lambda_k T) (sign dropped, quadratic use)
  mp::Matrix Mmap = mp::Matrix::zeros(N, N, bits);
  for (int k = 0; k < N; ++k) {
    BigFloat Dk = (L / (BigFloat(static_cast<long>(k + 1), bits) * pi)) * exp(-lam[k] * T);
    for (int j = 0; j < N; ++j) Mmap.at(k, j) = Dk * E.at(j, k);
  }
  mp::Matrix X = mp::cholesky_solve_matrix(g.chol, Mmap);   // G^{-1} M
  mp::Matrix A = mp::multiply(mp::transpose(Mmap), X);      // M^T G^{-1} M
  mp::Vector ev = mp::jacobi_eigenvalues(A);
  BigFloat lmax = ev.back();
  if (lmax.sign() < 0) lmax = BigFloat(0.0, bits);
  CostEstimate c;
  c.value = sqrt(BigFloat(2.0, bits) / L * lmax);
  c.log_value = c.value.log_abs_double();
  c.log10_condition = g.log10_condition;
  c.bits_used = bits;
  c.order = N;
  return c;
}
}  // namespace

CostEstimate cost_estimate(const PhysicalParams& p, int N, long precision_bits) {
  if (N < 1) throw std::domain_error("cost_estimate: N must be >= 1");
  long bits = std::max<long>(64, precision_bits);
  for (;;) {
    try {
      return cost_estimate_at(p, N, bits);
    } catch (const ConditioningError&) {
      if (bits >= 4096) throw;
      bits = std::min<long>(4096, bits * 2);
    }
  }
}

PhysicalParams scaled_params_time_length(const PhysicalParams& p, double a) {
  if (!(a > 0.0)) throw std::domain_error("scaling factor a must be positive");
  return make_params(p.epsilon, p.mach * std::pow(a, -0.75), p.length * std::pow(a, 0.25),
                     p.horizon * a);
}

PhysicalParams scaled_params_viscosity(const PhysicalParams& p, double a) {
  if (!(a > 0.0)) throw std::domain_error("scaling factor a must be positive");
  return make_params(p.epsilon * a, p.mach * std::pow(a, 0.25), p.length * std::pow(a, 0.25),
                     p.horizon);
}

double cost_scaling_residual_time_length(const PhysicalParams& p, double a, int N,
                                         long precision_bits) {
  CostEstimate base = cost_estimate(p, N, precision_bits);
  CostEstimate mapped = cost_estimate(scaled_params_time_length(p, a), N, precision_bits);
  const long bits = std::max(base.bits_used, mapped.bits_used);
  BigFloat pref = pow(BigFloat(a, bits), BigFloat(0.125, bits));
  return relative_difference(pref * mapped.value, base.value);
}

double cost_scaling_residual_viscosity(const PhysicalParams& p, double a, int N,
                                       long precision_bits) {
  CostEstimate base = cost_estimate(p, N, precision_bits);
  CostEstimate mapped = cost_estimate(scaled_params_viscosity(p, a), N, precision_bits);
  const long bits = std::max(base.bits_used, mapped.bits_used);
  BigFloat pref = pow(BigFloat(a, bits), BigFloat(-0.375, bits));
  return relative_difference(pref * mapped.value, base.value);
}

}  // namespace vclab
