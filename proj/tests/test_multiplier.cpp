#include "doctest.h"

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "vclab/errors.hpp"
#include "vclab/multiplier.hpp"
#include "vclab/quadrature.hpp"
#include "vclab/spectral.hpp"

using namespace vclab;
namespace {
constexpr double kPi = std::numbers::pi;
using cplx = std::complex<double>;
}  // namespace

TEST_CASE("phi vanishes at the spectral points for both transport signs") {
  for (double M : {1.0, -1.0}) {
    auto p = make_params(0.1, M, 1.0, 1.0);
    for (int k = 1; k <= 10; ++k) {
      const double lam = eigenvalue(p, k);
      const cplx v = phi_eval(p, cplx(0.0, -lam));
      const double scale = 1.0 + std::fabs(phi_derivative_at_eigen(p, k)) * std::fabs(lam);
      CHECK(std::abs(v) < 1e-10 * scale);
    }
  }
}

TEST_CASE("phi sinc point evaluates to one and is continuous there") {
  auto p = make_params(0.2, 1.0, 1.0, 1.0);
  const double e13 = std::cbrt(p.epsilon);
  const double shift = 1.0 / (4.0 * e13);  // M = 1
  const double b = 0.75 / (e13 * e13);
  // R = 0 when sqrt(iz + shift) = b sqrt(eps), i.e. iz = b^2 eps - shift
  const cplx z0 = cplx(0.0, -(b * b * p.epsilon - shift));
  CHECK(std::abs(phi_eval(p, z0) - 1.0) < 1e-10);
  const double step = 1e-9 * (1.0 + std::abs(z0));
  std::vector<cplx> dirs{{step, 0}, {-step, 0}, {0, step}, {0, -step}};
  for (auto d : dirs) CHECK(std::abs(phi_eval(p, z0 + d) - phi_eval(p, z0)) < 1e-8);
}

TEST_CASE("phi modulus bound holds on the real line") {
  for (double M : {1.0, -1.0}) {
    auto p = make_params(0.1, M, 1.0, 1.0);
    for (double x : {0.0, 0.5, 1.0, 5.0, 25.0, 300.0, 4000.0, -2.0, -80.0}) {
      CHECK(std::abs(phi_eval(p, cplx(x, 0.0))) <= phi_modulus_bound(p, x) * (1.0 + 1e-12));
    }
  }
}

TEST_CASE("phi derivative closed form against complex central differencing") {
  for (auto [eps, M, L] : std::vector<std::array<double, 3>>{
           {1.0, 1.0, kPi}, {0.1, 1.0, 1.0}, {0.1, -1.0, 1.0}}) {
    auto p = make_params(eps, M, L, 1.0);
    for (int k = 1; k <= 10; ++k) {
      const double lam = eigenvalue(p, k);
      const cplx z0 = cplx(0.0, -lam);
      const double h = 1e-7 * (1.0 + std::fabs(lam));
      const cplx cd = (phi_eval(p, z0 + cplx(h, 0)) - phi_eval(p, z0 - cplx(h, 0))) / (2.0 * h);
      const cplx closed = cplx(0.0, 1.0) * phi_derivative_at_eigen(p, k);
      CHECK(std::abs(cd - closed) <= 1e-6 * std::abs(closed));
    }
  }
}

TEST_CASE("phi derivative signs alternate and the scalar value is exact") {
  auto p = make_params(1.0, 1.0, kPi, 1.0);
  // the true derivative magnitude carries the L^2 factor: -1/7 at L = pi
  CHECK(phi_derivative_at_eigen(p, 1) == doctest::Approx(-1.0 / 7.0).epsilon(1e-14));
  for (int k = 1; k <= 8; ++k) {
    const double mk = phi_derivative_at_eigen(p, k);
    CHECK(((k % 2 == 1) ? mk < 0 : mk > 0));
  }
}

TEST_CASE("phi derivative inverse bound") {
  auto p = make_params(0.1, 1.0, 1.0, 1.0);
  for (int k = 1; k <= 10; ++k) {
    const double inv = 1.0 / std::fabs(phi_derivative_at_eigen(p, k));
    const double bound = 4.0 * std::cbrt(p.epsilon) * kPi * kPi * k * k *
                         (kPi * kPi * k * k / (p.length * p.length) + 0.75);
    CHECK(inv <= bound * (1.0 + 1e-12));
  }
}

TEST_CASE("multiplier geometry: density root, growth, ratio of breakpoints") {
  auto p = make_params(0.05, 1.0, 1.0, 6.0);
  MultiplierParams mp = make_multiplier_params(p);
  CHECK(std::fabs(density_eval(mp, mp.B)) <= 1e-12 * mp.a * mp.B);
  CHECK(mp.B / mp.A == doctest::Approx(std::pow(4.0, 4.0 / 3.0)).epsilon(1e-12));
  for (double f : {1.01, 1.5, 2.0, 5.0, 10.0}) {
    const double t = f * mp.A;
    CHECK(density_eval(mp, t * 1.0001) > density_eval(mp, t));
  }
  CHECK(density_eval(mp, 1e9 * mp.B) / (1e9 * mp.B) == doctest::Approx(mp.a).epsilon(1e-3));
  CHECK_THROWS_AS(density_eval(mp, 0.0), std::domain_error);
  CHECK(mp.Lhat == doctest::Approx((1.0 / std::cos(kPi / 8)) / std::sqrt(2.0) * mp.Ltilde +
                                   mp.alpha * std::pow(p.epsilon, 0.25)));
}

TEST_CASE("log identity: quadrature against pi cot(pi gamma/2)") {
  CHECK(verify_log_identity(0.25, 1.0) < 1e-6);
  CHECK(verify_log_identity(1.0, 1.0) < 1e-6);  // cot(pi/2) = 0
  CHECK(verify_log_identity(0.25, 16.0) < 1e-6);
  CHECK(verify_log_identity(0.5, 2.0) < 1e-6);
  CHECK(verify_log_identity(0.75, 0.3) < 1e-6);
  CHECK(verify_log_identity(1.25, 4.0) < 1e-6);
  CHECK_THROWS_AS(verify_log_identity(2.5, 1.0), std::domain_error);
}

TEST_CASE("csc identity and its companion") {
  CHECK(verify_csc_identity(1.0) < 1e-6);
  CHECK(verify_csc_identity(16.0) < 1e-6);
  CHECK(verify_csc_identity(0.2) < 1e-6);
  CHECK(verify_csc_identity(-3.0) < 1e-6);
  CHECK(verify_abs_identity(1.0) < 1e-8);
  CHECK(verify_abs_identity(7.0) < 1e-8);
  CHECK(kPi / std::sin(kPi / 8) == doctest::Approx(8.2093772238).epsilon(1e-9));
}

TEST_CASE("log kernel integral: zero at zero, C2 value, two routes, monotone") {
  CHECK(log_kernel_integral(0.0) == 0.0);
  const double c2 = compute_c2();
  CHECK(c2 > 5.98);
  CHECK(c2 < 6.00);
  CHECK(c2 == doctest::Approx(5.997372473520519).epsilon(1e-7));
  for (double y : {1.0, 3.0, 9.18, 30.0}) CHECK(log_kernel_two_route_gap(y) < 1e-8);
  double prev = log_kernel_integral(1.0);
  for (double y : {2.0, 5.0, 12.0, 25.0, 50.0}) {
    const double cur = log_kernel_integral(y);
    CHECK(cur <= prev);
    prev = cur;
  }
  CHECK(log_kernel_integral(-7.0) == doctest::Approx(log_kernel_integral(7.0)).epsilon(1e-12));
}

TEST_CASE("signed log kernel: quadrature equals the exact closed form") {
  for (double x : {0.5, 2.0, 10.0}) {
    CHECK(log_kernel_signed_integral(x) ==
          doctest::Approx(log_kernel_signed_integral_closed(x)).epsilon(1e-6));
  }
  CHECK(log_kernel_signed_integral_closed(1e4) == doctest::Approx(-6.0).epsilon(1e-6));
}

TEST_CASE("C1 sits in the stated window and is deterministic") {
  const double c1a = compute_c1();
  CHECK(c1a > 6.54);
  CHECK(c1a < 6.56);
  // independently computed reference (40-digit arithmetic): 6.559518192294102
  CHECK(c1a == doctest::Approx(6.559518192294102).epsilon(1e-6));
  CHECK(compute_c1() == c1a);
}

TEST_CASE("signed log kernel lower envelope for large x") {
  const double c1 = 6.5596;
  for (double x : {1.0, 10.0, 100.0, 1000.0}) {
    CHECK(log_kernel_signed_integral_closed(x) >= -c1 * std::pow(x, 0.25));
  }
}

TEST_CASE("threshold roots against the independent 40-digit oracle") {
  const double c1 = compute_c1();
  const double c2 = compute_c2();
  const double cp = threshold_root(RegimeSign::plus, c1, c2);
  const double cm = threshold_root(RegimeSign::minus, c1, c2);
  CHECK(cp == doctest::Approx(4.587867306182174).epsilon(1e-5));
  CHECK(cm == doctest::Approx(6.184338603497591).epsilon(1e-5));
  for (auto [sign, c] : std::vector<std::pair<RegimeSign, double>>{{RegimeSign::plus, cp},
                                                                   {RegimeSign::minus, cm}}) {
    const double X = std::cbrt(c);
    CHECK(std::fabs(threshold_expression(sign, c1, c2, X)) < 1e-8);
    CHECK(threshold_expression(sign, c1, c2, 1.1 * X) < 0.0);
    CHECK(threshold_expression(sign, c1, c2, 0.9 * X) > 0.0);
  }
}

TEST_CASE("residue integrals match their radical closed forms") {
  ResidueCheck plus = residue_integral(RegimeSign::plus);
  CHECK(plus.relative_error < 1e-8);
  CHECK(plus.closed_form / (3.0 * kPi / 5.0) == doctest::Approx(1.7345969030).epsilon(1e-8));
  ResidueCheck minus = residue_integral(RegimeSign::minus);
  CHECK(minus.relative_error < 1e-8);
  CHECK(minus.closed_form / (6.0 * kPi / 5.0) == doctest::Approx(1.2996317261).epsilon(1e-8));
  const double direct = integrate(
      [](double x) {
        const double x2 = x * x;
        return (2.0 * x2 + 1.0) / ((x2 * x2 + x2 + 5.0 / 9.0) * (x2 + 1.0));
      },
      -30.0, 30.0);
  CHECK(direct == doctest::Approx(plus.quadrature).epsilon(1e-3));
}

TEST_CASE("lower bound rate constants and thresholds") {
  auto pp = make_params(0.1, 1.0, 1.0, 0.2);
  LowerBoundRate rp = lower_bound_rate(pp);
  CHECK(rp.threshold == doctest::Approx(0.333033954615283).epsilon(1e-12));
  CHECK(rp.rate_constant > 0.0);  // T below threshold
  auto pm = make_params(0.1, -1.0, 1.0, 1.0);
  LowerBoundRate rm = lower_bound_rate(pm);
  CHECK(rm.threshold == doctest::Approx(1.697831777385084).epsilon(1e-12));
  CHECK(rm.rate_constant > 0.0);
  auto pc = make_params(0.1, 1.0, 1.0, rp.threshold);
  CHECK(lower_bound_rate(pc).rate_constant == doctest::Approx(0.0).epsilon(1e-14));
  auto pa = make_params(0.1, 1.0, 1.0, 1.0);
  CHECK(lower_bound_rate(pa).rate_constant < 0.0);
}

TEST_CASE("worst datum norm: closed form, quadrature, limits") {
  auto p = make_params(0.1, 1.0, 1.0, 1.0);
  const double quad = std::sqrt(integrate(
      [&](double x) {
        const double s = std::sin(kPi * x / p.length);
        return std::exp(1.0 / std::cbrt(p.epsilon) * x) * s * s;
      },
      0.0, p.length));
  CHECK(worst_datum_norm(p) == doctest::Approx(quad).epsilon(1e-8));
  CHECK(worst_datum_norm(p) == doctest::Approx(tilted_mode_l2_norm(p, 1)).epsilon(1e-12));
  auto p0 = make_params(1.0, 1e-24, 1.0, 1.0);
  CHECK(worst_datum_norm(p0) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-6));
  double prev_ratio = 0.0;
  for (double eps : {0.1, 0.05, 0.02}) {
    auto q = make_params(eps, 1.0, 1.0, 1.0);
    const double a = q.length / (std::cbrt(eps) * kPi);
    const double ratio = worst_datum_norm(q) * worst_datum_norm(q) /
                         (std::cbrt(eps) * std::exp(kPi * a) / (a * a + 4.0));
    // exactly 2(1 - e^{-pi a}), climbing to 2 as eps -> 0
    CHECK(ratio == doctest::Approx(2.0 * -std::expm1(-kPi * a)).epsilon(1e-10));
    CHECK(ratio > prev_ratio);
    prev_ratio = ratio;
  }
  CHECK(prev_ratio == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("multiplier envelope dominates the biorthogonal kernel factor") {
  auto p = make_params(0.1, 1.0, 1.0, 6.0);
  for (int k = 1; k <= 5; ++k) {
    const double lam = eigenvalue(p, k);
    std::vector<double> xs{0.0, lam, -lam, 10.0 * lam, -10.0 * lam};
    EnvelopeCheck ec = multiplier_envelope_check(p, k, xs);
    CHECK(ec.holds);
    CHECK(ec.worst_margin <= 1.0);
  }
  CHECK_THROWS_AS(
      multiplier_envelope_check(make_params(0.9, 1.0, 1.0, 1.0), 1, std::vector<double>{0.0}),
      std::domain_error);
}

TEST_CASE("envelope tail decays like 1/|x| and tightens with viscosity") {
  auto p = make_params(0.1, 1.0, 1.0, 6.0);
  const double lam = eigenvalue(p, 1);
  auto tail = [&](double x) { return 1.0 / std::sqrt(x * x + lam * lam); };
  CHECK(tail(10.0 * lam) / tail(20.0 * lam) == doctest::Approx(2.0).epsilon(0.02));
  auto exponent = [&](double eps) {
    auto q = make_params(eps, 1.0, 1.0, 6.0);
    MultiplierParams mq = make_multiplier_params(q);
    const double lk = eigenvalue(q, 1);
    return -kPi * mq.a * lk + mq.Lhat / std::pow(eps, 0.25) * std::pow(lk, 0.25);
  };
  CHECK(exponent(0.05) < exponent(0.1));
  CHECK(exponent(0.02) < exponent(0.05));
}
