#include "vclab/multiplier.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "vclab/errors.hpp"
#include "vclab/quadrature.hpp"
#include "vclab/spectral.hpp"

namespace vclab {

namespace {
constexpr double kPi = std::numbers::pi;
const double kSqrt2 = std::sqrt(2.0);
const double kCotPi8 = 1.0 + kSqrt2;           // cot(pi/8)
const double kSecPi8 = 1.0 / std::cos(kPi / 8.0);

// W(z) = L sqrt(R(z)), R(z) = sqrt(i z + M^{4/3}/(4 eps^{1/3}))/sqrt(eps) - 3 M^{2/3}/(4 eps^{2/3})
std::complex<double> w_of_z(const PhysicalParams& p, std::complex<double> z) {
  const double m13 = std::cbrt(p.mach);
  const double e13 = std::cbrt(p.epsilon);
  const double c = m13 * m13 * m13 * m13 / (4.0 * e13);
  const double b = 0.75 * (m13 * m13) / (e13 * e13);
  const std::complex<double> inner = std::sqrt(std::complex<double>(0.0, 1.0) * z + c);
  const std::complex<double> R = inner / std::sqrt(p.epsilon) - b;
  return p.length * std::sqrt(R);
}

std::complex<double> sinc_c(std::complex<double> w) {
  if (std::abs(w) < 1e-2) {
    const std::complex<double> w2 = w * w;
    return 1.0 - w2 / 6.0 + w2 * w2 / 120.0 - w2 * w2 * w2 / 5040.0;
  }
  return std::sin(w) / w;
}
}  // namespace

std::complex<double> phi_eval(const PhysicalParams& p, std::complex<double> z) {
  return sinc_c(w_of_z(p, z));
}

double phi_derivative_at_eigen(const PhysicalParams& p, int k) {
  if (k < 1) throw std::domain_error("phi_derivative_at_eigen: k must be >= 1");
  const double e13 = std::cbrt(p.epsilon);
  const double m13 = std::cbrt(p.mach);
  const double S = k * k * kPi * kPi / (p.length * p.length) + 0.75 * m13 * m13 / (e13 * e13);
  const double sign = (k % 2 == 0) ? 1.0 : -1.0;
  return sign * p.length * p.length / (4.0 * p.epsilon * kPi * kPi * k * k) / S;
}

double phi_modulus_bound(const PhysicalParams& p, double x) {
  const double e13 = std::cbrt(p.epsilon);
  const double am13 = std::cbrt(std::fabs(p.mach));
  const double c0 = p.length / kSqrt2 * (1.0 / kSqrt2 + std::sqrt(3.0) / 2.0) * am13 / e13;
  const double c1 = p.length / (kSqrt2 * std::pow(p.epsilon, 0.25));
  const double denom = std::abs(w_of_z(p, {x, 0.0}));
  return std::exp(c0 + c1 * std::pow(std::fabs(x), 0.25)) / denom;
}

MultiplierParams make_multiplier_params(const PhysicalParams& p, std::optional<double> alpha,
                                        std::optional<double> tau) {
  MultiplierParams mp;
  mp.params = p;
  const double e14 = std::pow(p.epsilon, 0.25);
  if (alpha) {
    mp.alpha = *alpha;
  } else {
    // alpha > max(1, 2^{-1/4} (1+sqrt2)^{3/2} (8!)^{3/8} T - L) keeps B^2 >= 8!
    const double fac = std::pow(2.0, -0.25) * std::pow(1.0 + kSqrt2, 1.5) * std::pow(40320.0, 0.375);
    mp.alpha = std::max(1.0, fac * p.horizon - p.length) + 1.0;
  }
  if (tau) {
    mp.tau = *tau;
  } else {
    const double thr = (p.mach > 0 ? 4.57 : 6.19) * p.length / std::fabs(p.mach);
    const double slack = p.horizon - thr;
    mp.tau = (slack > 0) ? std::min(0.01 * p.horizon, 0.5 * slack) : 0.01 * p.horizon;
  }
  if (!(mp.alpha > 0.0))
    throw std::domain_error("make_multiplier_params: alpha must be positive");
  if (!(mp.tau > 0.0 && mp.tau < p.horizon))
    throw std::domain_error("make_multiplier_params: tau must lie in (0, T)");
  const double Tt = p.horizon - mp.tau;
  mp.a = Tt / (2.0 * kPi);
  mp.Ltilde = (p.length + mp.alpha * e14) / std::sqrt(2.0 + kSqrt2);
  mp.Lhat = kSecPi8 / kSqrt2 * mp.Ltilde + mp.alpha * e14;
  const double e13 = std::cbrt(p.epsilon);
  mp.A = std::pow(mp.Ltilde / (2.0 * kSqrt2 * Tt * kCotPi8), 4.0 / 3.0) / e13;
  mp.B = std::pow(2.0 * mp.Ltilde / (kSqrt2 * Tt * kCotPi8), 4.0 / 3.0) / e13;
  return mp;
}

double density_eval(const MultiplierParams& mp, double t) {
  if (!(t > 0.0)) throw std::domain_error("density_eval: t must be positive");
  const double e14 = std::pow(mp.params.epsilon, 0.25);
  return mp.a * t - mp.Ltilde / (kSqrt2 * kPi * kCotPi8) * std::pow(t, 0.25) / e14;
}

namespace {
double rel_err(double value, double reference) {
  const double denom = (std::fabs(reference) > 1e-8) ? std::fabs(reference) : 1.0;
  return std::fabs(value - reference) / denom;
}

QuadratureOptions identity_opts() {
  QuadratureOptions o;
  o.abs_tol = 1e-12;
  o.rel_tol = 1e-10;
  o.max_panels = 60000;
  return o;
}
}  // namespace

double verify_log_identity(double gamma, double x) {
  if (!(gamma > 0.0 && gamma < 2.0))
    throw std::domain_error("verify_log_identity: gamma must lie in (0,2)");
  const double ax = std::fabs(x);
  const double closed = std::pow(ax, gamma) * kPi / std::tan(kPi * gamma / 2.0);
  if (ax == 0.0) return 0.0;
  auto opts = identity_opts();
  // t in (0,|x|): t = |x| w^{1/gamma} linearizes the d t^gamma weight
  const double inner = integrate(
      [gamma](double w) { return std::log(std::fabs(1.0 - std::pow(w, -2.0 / gamma))); }, 0.0, 1.0,
      opts);
  // t in (|x|, inf): t = |x| / sigma
  const double outer = integrate(
      [gamma](double s) {
        return std::log1p(-s * s) * gamma * std::pow(s, -gamma - 1.0);
      },
      0.0, 1.0, opts);
  const double quad = std::pow(ax, gamma) * (inner + outer);
  return rel_err(quad, closed);
}

double verify_csc_identity(double y) {
  if (y == 0.0) throw std::domain_error("verify_csc_identity: y must be nonzero");
  const double ay = std::fabs(y);
  const double closed = kPi / std::sin(kPi / 8.0) * std::pow(ay, 0.25);
  auto opts = identity_opts();
  const double inner =
      integrate([](double w) { return std::log1p(std::pow(w, -8.0)); }, 0.0, 1.0, opts);
  const double outer = integrate(
      [](double s) { return std::log1p(s * s) * 0.25 * std::pow(s, -1.25); }, 0.0, 1.0, opts);
  const double quad = std::pow(ay, 0.25) * (inner + outer);
  return rel_err(quad, closed);
}

double verify_abs_identity(double y) {
  if (y == 0.0) throw std::domain_error("verify_abs_identity: y must be nonzero");
  const double ay = std::fabs(y);
  auto opts = identity_opts();
  const double inner = integrate([](double w) { return std::log1p(1.0 / (w * w)); }, 0.0, 1.0, opts);
  const double outer = integrate([](double s) { return std::log1p(s * s) / (s * s); }, 0.0, 1.0, opts);
  return rel_err(ay * (inner + outer), kPi * ay);
}

double log_kernel_integral(double y) {
  if (y == 0.0) return 0.0;
  auto opts = identity_opts();
  // single pass after t = w^4: weight d(t - t^{1/4}) -> (4 w^3 - 1) dw
  return integrate(
      [y](double w) { return std::log1p(y * y * std::pow(w, -8.0)) * (4.0 * w * w * w - 1.0); },
      0.0, 1.0, opts);
}

double log_kernel_two_route_gap(double y) {
  const double route1 = log_kernel_integral(y);
  auto opts = identity_opts();
  const double t_part = integrate(
      [y](double t) { return std::log1p(y * y / (t * t)); }, 0.0, 1.0, opts);
  const double w_part = integrate(
      [y](double w) { return std::log1p(y * y * std::pow(w, -8.0)); }, 0.0, 1.0, opts);
  const double route2 = t_part - w_part;
  return rel_err(route1, route2);
}

double log_kernel_signed_integral(double x) {
  const double ax = std::fabs(x);
  if (ax == 0.0) return 0.0;
  auto opts = identity_opts();
  auto f_t = [ax](double t) { return std::log(std::fabs(1.0 - ax * ax / (t * t))); };
  auto f_w = [ax](double w) { return std::log(std::fabs(1.0 - ax * ax * std::pow(w, -8.0))); };
  double t_part, w_part;
  if (ax < 1.0) {
    t_part = integrate_split(f_t, 0.0, 1.0, {ax}, opts);
    w_part = integrate_split(f_w, 0.0, 1.0, {std::pow(ax, 0.25)}, opts);
  } else {
    t_part = integrate(f_t, 0.0, 1.0, opts);
    w_part = integrate(f_w, 0.0, 1.0, opts);
  }
  return t_part - w_part;
}

double log_kernel_signed_integral_closed(double x) {
  const double ax = std::fabs(x);
  if (ax == 0.0) return 0.0;
  // I1 = (1-x)log|1-x| + (1+x)log(1+x)
  const double one_minus = (ax == 1.0) ? 0.0 : (1.0 - ax) * std::log(std::fabs(1.0 - ax));
  const double I1 = one_minus + (1.0 + ax) * std::log1p(ax);
  // I2 = int_0^1 log|w^8 - x^2| dw + 8, assembled from the eight roots rho e^{i pi j/4}
  const double rho = std::pow(ax, 0.25);
  double I2 = 8.0;
  I2 += (rho == 1.0 ? 0.0 : (1.0 - rho) * std::log(std::fabs(1.0 - rho))) + rho * std::log(rho) - 1.0;
  I2 += (1.0 + rho) * std::log1p(rho) - rho * std::log(rho) - 1.0;
  for (double th : {kPi / 4.0, kPi / 2.0, 3.0 * kPi / 4.0}) {
    const double c = std::cos(th), s = std::sin(th);
    const double q1 = 1.0 - 2.0 * rho * c + rho * rho;
    const double at1 = (1.0 - rho * c) * std::log(q1) - 2.0 +
                       2.0 * rho * s * std::atan((1.0 - rho * c) / (rho * s));
    const double at0 = -2.0 * rho * c * std::log(rho) - 2.0 * rho * s * std::atan(c / s);
    I2 += at1 - at0;
  }
  return I1 - I2;
}

double compute_c1() {
  // coarse geometric scan, then golden section on the quadrature evaluations
  const int scan_points = 80;
  const double x_lo = 0.05, x_hi = 50.0;
  double best_x = x_lo, best_v = std::numeric_limits<double>::max();
  int best_i = 0;
  for (int i = 0; i < scan_points; ++i) {
    const double x = x_lo * std::pow(x_hi / x_lo, static_cast<double>(i) / (scan_points - 1));
    const double v = log_kernel_signed_integral(x);
    if (v < best_v) { best_v = v; best_x = x; best_i = i; }
  }
  if (best_i == 0 || best_i == scan_points - 1)
    throw BracketError("compute_c1: coarse scan did not bracket an interior minimum");
  double a = best_x * std::pow(x_hi / x_lo, -1.0 / (scan_points - 1));
  double b = best_x * std::pow(x_hi / x_lo, 1.0 / (scan_points - 1));
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - gr * (b - a), d = a + gr * (b - a);
  double fc = log_kernel_signed_integral(c), fd = log_kernel_signed_integral(d);
  for (int it = 0; it < 90 && (b - a) > 1e-12 * b; ++it) {
    if (fc < fd) {
      b = d; d = c; fd = fc;
      c = b - gr * (b - a);
      fc = log_kernel_signed_integral(c);
    } else {
      a = c; c = d; fc = fd;
      d = a + gr * (b - a);
      fd = log_kernel_signed_integral(d);
    }
  }
  return -std::min(fc, fd);
}

double compute_c2() {
  const double yhat = (1.0 + kSqrt2) * (1.0 + kSqrt2) * 5.0 / std::pow(2.0, 5.0 / 3.0);
  return -log_kernel_integral(yhat);
}

double threshold_expression(RegimeSign sign, double c1, double c2, double X) {
  const double kappa = (sign == RegimeSign::plus ? 1.0 : 2.0) + std::sqrt(3.0) / kSqrt2 +
                       std::pow(5.0, 0.25) / (1.0 + kSqrt2);
  const double cst = std::cbrt(2.0) * (c1 - c2) / ((1.0 + kSqrt2) * (1.0 + kSqrt2) * kPi);
  return kappa * X + cst - 0.625 * X * X * X * X;
}

double threshold_root(RegimeSign sign, double c1, double c2) {
  auto f = [&](double X) { return threshold_expression(sign, c1, c2, X); };
  const double kappa = (sign == RegimeSign::plus ? 1.0 : 2.0) + std::sqrt(3.0) / kSqrt2 +
                       std::pow(5.0, 0.25) / (1.0 + kSqrt2);
  double lo = std::cbrt(0.4 * kappa);  // stationary point of the expression
  if (!(f(lo) > 0)) throw BracketError("threshold_root: expression not positive at its peak");
  double hi = 2.0 * lo;
  int guard = 0;
  while (f(hi) > 0) {
    hi *= 2.0;
    if (++guard > 60) throw BracketError("threshold_root: no sign change found");
  }
  for (int it = 0; it < 200 && (hi - lo) > 1e-14 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) > 0 ? lo : hi) = mid;
  }
  const double X = 0.5 * (lo + hi);
  return X * X * X;
}

ResidueCheck residue_integral(RegimeSign sign) {
  const double q = (sign == RegimeSign::plus) ? 5.0 / 9.0 : 5.0 / 18.0;
  auto h = [q](double x) {
    const double x2 = x * x;
    return (2.0 * x2 + 1.0) / ((x2 * x2 + x2 + q) * (x2 + 1.0));
  };
  auto opts = identity_opts();
  const double head = integrate(h, 0.0, 1.0, opts);
  const double tail = integrate([&h](double u) { return h(1.0 / u) / (u * u); }, 0.0, 1.0, opts);
  ResidueCheck r;
  r.quadrature = 2.0 * (head + tail);
  r.closed_form = (sign == RegimeSign::plus)
                      ? 3.0 * kPi / 5.0 * (std::sqrt(3.0 * (3.0 + 2.0 * std::sqrt(5.0))) - 3.0)
                      : 6.0 * kPi / 5.0 * (std::sqrt(3.0 * (3.0 + std::sqrt(10.0))) - 3.0);
  r.relative_error = std::fabs(r.quadrature - r.closed_form) / r.closed_form;
  return r;
}

LowerBoundRate lower_bound_rate(const PhysicalParams& p) {
  const double chat = std::sqrt(3.0 * (3.0 + 2.0 * std::sqrt(5.0))) - 3.0;
  const double ctil = std::sqrt(3.0 * (3.0 + std::sqrt(10.0))) - 3.0;
  LowerBoundRate r;
  if (p.mach > 0) {
    r.threshold = 8.0 * chat / (5.0 * std::sqrt(6.0)) - 0.8;
    const double m13 = std::cbrt(p.mach);
    r.rate_constant = 5.0 * m13 / 8.0 * (r.threshold * p.length - p.horizon * p.mach);
  } else {
    r.threshold = 16.0 * ctil / (5.0 * std::sqrt(6.0));
    const double am = std::fabs(p.mach);
    r.rate_constant = 5.0 * std::cbrt(am) / 16.0 * (r.threshold * p.length - p.horizon * am);
  }
  return r;
}

double worst_datum_norm(const PhysicalParams& p) {
  const double m13 = std::cbrt(p.mach);
  const double e13 = std::cbrt(p.epsilon);
  const double a = m13 * p.length / (e13 * kPi);
  const double n2 = 2.0 / m13 * e13 * std::expm1(kPi * a) / (a * a + 4.0);
  return std::sqrt(n2);
}

EnvelopeCheck multiplier_envelope_check(const PhysicalParams& p, int k,
                                        std::span<const double> x_samples) {
  if (p.epsilon > 0.5)
    throw std::domain_error("multiplier_envelope_check: guarded to eps <= 0.5");
  if (k < 1 || k > 10)
    throw std::domain_error("multiplier_envelope_check: k must lie in 1..10");
  const double lam = eigenvalue(p, k);
  const double mk = std::fabs(phi_derivative_at_eigen(p, k));
  const double e13 = std::cbrt(p.epsilon);
  const double m13a = std::cbrt(std::fabs(p.mach));
  const double inv_deriv_bound = 4.0 * e13 * kPi * kPi * k * k *
                                 (kPi * kPi * k * k / (p.length * p.length) +
                                  0.75 * m13a * m13a) /
                                 (p.length * p.length);
  EnvelopeCheck res;
  for (double x : x_samples) {
    const double lhs = std::abs(phi_eval(p, {x, 0.0})) /
                       (mk * std::sqrt(x * x + lam * lam));
    const double env = phi_modulus_bound(p, x) * inv_deriv_bound / std::sqrt(x * x + lam * lam);
    const double margin = lhs / env;
    if (margin > res.worst_margin) {
      res.worst_margin = margin;
      res.violating_x = x;
    }
    if (margin > 1.0) res.holds = false;
  }
  return res;
}

}  // namespace vclab
