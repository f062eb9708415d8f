#include "vclab/spectral.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace vclab {

namespace {
constexpr double kPi = std::numbers::pi;

void require_mode(int k) {
  if (k < 1) throw std::domain_error("mode index k must be >= 1");
}

// (1 - exp(-nu L)) / nu, stable for small nu.
double expm1_ratio(double nu, double L) {
  if (nu == 0.0) return L;
  return -std::expm1(-nu * L) / nu;
}
}  // namespace

double eigenvalue(const PhysicalParams& p, int k) {
  require_mode(k);
  const double m13 = std::cbrt(p.mach);
  const double e13 = std::cbrt(p.epsilon);
  const double s = static_cast<double>(k) * kPi / p.length;
  const double bracket = s * s + 0.75 * (m13 * m13) / (e13 * e13);
  return p.epsilon * bracket * bracket - (m13 * m13 * m13 * m13) / (4.0 * e13);
}

Eigenpair eigenpair(const PhysicalParams& p, int k) {
  require_mode(k);
  return Eigenpair{k, eigenvalue(p, k), p.tilt()};
}

double eigenfunction_eval(const PhysicalParams& p, int k, double x) {
  require_mode(k);
  if (x < 0.0 || x > p.length) throw std::domain_error("eigenfunction_eval: x outside [0,L]");
  if (x == 0.0 || x == p.length) return 0.0;
  return std::exp(-p.tilt() * x) * std::sin(k * kPi * x / p.length);
}

double eigenfunction_derivative_at_zero(const PhysicalParams& p, int k) {
  require_mode(k);
  return k * kPi / p.length;
}

double tilted_mode_eval(const PhysicalParams& p, int k, double x) {
  require_mode(k);
  if (x < 0.0 || x > p.length) throw std::domain_error("tilted_mode_eval: x outside [0,L]");
  if (x == 0.0 || x == p.length) return 0.0;
  return std::exp(p.tilt() * x) * std::sin(k * kPi * x / p.length);
}

namespace {
// ||exp(-beta/2 x) sin(k pi x/L)||^2 with beta the full tilt of the square.
double tilted_sine_square_integral(double beta, double L, int k) {
  const double c = 2.0 * k * kPi / L;
  return 0.5 * expm1_ratio(beta, L) * c * c / (beta * beta + c * c);
}
}  // namespace

double eigenfunction_l2_norm(const PhysicalParams& p, int k) {
  require_mode(k);
  return std::sqrt(tilted_sine_square_integral(2.0 * p.tilt(), p.length, k));
}

double tilted_mode_l2_norm(const PhysicalParams& p, int k) {
  require_mode(k);
  return std::sqrt(tilted_sine_square_integral(-2.0 * p.tilt(), p.length, k));
}

double weighted_inner_product(const PhysicalParams& p, std::span<const double> u,
                              std::span<const double> v, std::span<const double> grid) {
  if (u.size() != grid.size() || v.size() != grid.size())
    throw std::domain_error("weighted_inner_product: sample/grid length mismatch");
  if (grid.size() < 2) throw std::domain_error("weighted_inner_product: need at least 2 samples");
  const size_t n = grid.size();
  const double beta = 2.0 * p.tilt();
  auto w = [&](size_t i) { return std::exp(beta * grid[i]) * u[i] * v[i]; };

  const double h = grid[1] - grid[0];
  bool uniform = true;
  for (size_t i = 1; i + 1 < n; ++i)
    if (std::fabs((grid[i + 1] - grid[i]) - h) > 1e-9 * std::fabs(h)) { uniform = false; break; }

  if (uniform && n % 2 == 1) {
    // composite Simpson
    double s = w(0) + w(n - 1);
    for (size_t i = 1; i + 1 < n; i += 2) s += 4.0 * w(i);
    for (size_t i = 2; i + 1 < n; i += 2) s += 2.0 * w(i);
    return s * h / 3.0;
  }
  double s = 0.0;
  for (size_t i = 0; i + 1 < n; ++i) s += 0.5 * (grid[i + 1] - grid[i]) * (w(i) + w(i + 1));
  return s;
}

double apply_operator_residual(const PhysicalParams& p, int k, double grid_spacing) {
  require_mode(k);
  const double h = grid_spacing;
  if (!(h > 0.0)) throw std::domain_error("apply_operator_residual: spacing must be positive");
  const long m = std::lround(p.length / h);
  if (m < 8) throw std::domain_error("apply_operator_residual: grid too coarse for stencils");
  const double lam = eigenvalue(p, k);
  const double a3 = 2.0 * std::pow(p.epsilon, 2.0 / 3.0) * std::cbrt(p.mach);

  auto e = [&](double x) { return std::exp(-p.tilt() * x) * std::sin(k * kPi * x / p.length); };

  double worst = 0.0;
  for (long i = 3; i <= m - 3; ++i) {
    const double x = i * h;
    if (x - 3.0 * h <= 0.0 || x + 3.0 * h >= p.length) continue;
    const double f3m = e(x - 3 * h), f2m = e(x - 2 * h), f1m = e(x - h);
    const double f0 = e(x);
    const double f1 = e(x + h), f2 = e(x + 2 * h), f3 = e(x + 3 * h);
    const double d1 = (-f2 + 8.0 * f1 - 8.0 * f1m + f2m) / (12.0 * h);
    const double d3 = (f3m - 8.0 * f2m + 13.0 * f1m - 13.0 * f1 + 8.0 * f2 - f3) / (8.0 * h * h * h);
    const double d4 = (f2m - 4.0 * f1m + 6.0 * f0 - 4.0 * f1 + f2) / (h * h * h * h);
    const double res = p.epsilon * d4 + a3 * d3 - p.mach * d1 - lam * f0;
    worst = std::max(worst, std::fabs(res));
  }
  return worst;
}

double tilted_sine_product(double nu, double L, int j, int k) {
  if (j < 1 || k < 1) throw std::domain_error("tilted_sine_product: modes must be >= 1");
  if (j == k) return tilted_sine_square_integral(nu, L, k);
  const double am = (k - j) * kPi / L;
  const double ap = (k + j) * kPi / L;
  const double sign = ((k + j) % 2 == 0) ? 1.0 : -1.0;
  const double pref = 0.5 * nu * (1.0 - sign * std::exp(-nu * L));
  return pref * (1.0 / (nu * nu + am * am) - 1.0 / (nu * nu + ap * ap));
}

namespace {
DualExpansion build_product_matrix(double nu, double L, int N) {
  if (N < 1) throw std::domain_error("expansion order must be >= 1");
  DualExpansion E;
  E.order = N;
  E.entries.assign(static_cast<size_t>(N) * N, 0.0);
  for (int j = 1; j <= N; ++j)
    for (int k = 1; k <= N; ++k)
      E.entries[static_cast<size_t>(j - 1) * N + (k - 1)] = tilted_sine_product(nu, L, j, k);
  return E;
}
}  // namespace

DualExpansion dual_expansion(const PhysicalParams& p, int N) {
  return build_product_matrix(p.tilt(), p.length, N);
}

DualExpansion eigenmode_gram(const PhysicalParams& p, int N) {
  return build_product_matrix(2.0 * p.tilt(), p.length, N);
}

}  // namespace vclab
