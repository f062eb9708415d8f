#include "doctest.h"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "vclab/errors.hpp"
#include "vclab/moment.hpp"
#include "vclab/quadrature.hpp"
#include "vclab/spectral.hpp"

using namespace vclab;
namespace {
constexpr double kPi = std::numbers::pi;

mp::Vector rates(std::initializer_list<double> v, long bits) {
  mp::Vector out;
  for (double x : v) out.emplace_back(x, bits);
  return out;
}
}  // namespace

TEST_CASE("gram entries: scalar case and long-horizon limit") {
  GramMatrix g1 = gram_matrix(rates({1.0}, 256), 1.0, 256);
  CHECK(g1.entries.at(0, 0).to_double() == doctest::Approx(-std::expm1(-2.0) / 2).epsilon(1e-15));
  GramMatrix g2 = gram_matrix(rates({0.5}, 256), 200.0, 256);
  // lambda_j + lambda_k = 1, T large: entry -> 1
  CHECK(g2.entries.at(0, 0).to_double() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("gram matches multiprecision quadrature to 1e-20") {
  auto p = make_params(0.1, 1.0, 1.0, 6.0);
  const long bits = 320;
  const int N = 8;
  GramMatrix g = gram_matrix(p, N, bits);
  const BigFloat T(p.horizon, bits);
  for (int j = 0; j < N; j += 3)
    for (int k = j; k < N; k += 2) {
      auto f = [&](const BigFloat& t) {
        return exp(-(g.lambdas[j] + g.lambdas[k]) * (T - t));
      };
      BigFloat q = mp::integrate_tanh_sinh(f, BigFloat(0.0, bits), T, bits, -40, 14);
      CHECK(relative_difference(q, g.entries.at(j, k)) < 1e-20);
    }
}

TEST_CASE("gram rejects bad rate sequences") {
  CHECK_THROWS_AS(gram_matrix(rates({2.0, 1.0}, 256), 1.0, 256), std::domain_error);
  CHECK_THROWS_AS(gram_matrix(rates({-1.0, 1.0}, 256), 1.0, 256), std::domain_error);
  CHECK_THROWS_AS(gram_matrix(rates({1.0, 1.0 + 1e-14}, 256), 1.0, 256), SingularError);
}

TEST_CASE("gram conditioning failure surfaces as ConditioningError") {
  // tightly clustered rates overwhelm 64-bit mantissas
  mp::Vector lam(12, BigFloat(64));
  for (int k = 0; k < 12; ++k) lam[k] = BigFloat(10.0 + 1e-4 * k, 64);
  CHECK_THROWS_AS(gram_matrix(lam, 4.0, 64), ConditioningError);
}

TEST_CASE("target moments reproduce the tilt-conjugate datum identity") {
  auto p = make_params(0.1, 1.0, 1.0, 6.0);
  const long bits = 256;
  const int N = 6;
  mp::Vector d = target_moments_tilted_mode(p, 1, N, bits);
  mp::Vector lam = eigenvalues_mp(p, N, bits);
  // |d_k| = (L^2/(2 k pi)) e^{-lambda_k T} delta_{k1}; the sign pairs the
  // control against the trace so that the tracked mode is cancelled
  BigFloat expect = (BigFloat(p.length, bits) * BigFloat(p.length, bits) /
                     (BigFloat(2.0, bits) * BigFloat::pi(bits))) *
                    exp(-lam[0] * BigFloat(p.horizon, bits));
  CHECK(relative_difference(d[0], expect) < 1e-70);
  for (int k = 1; k < N; ++k) CHECK(d[k].is_zero());
}

TEST_CASE("zero datum gives zero targets") {
  auto p = make_params(0.1, 1.0, 1.0, 6.0);
  mp::Vector d = target_moments(p, {0.0, 0.0, 0.0, 0.0}, 4, 256);
  for (const auto& v : d) CHECK(v.is_zero());
}

TEST_CASE("target moments against direct quadrature of the pairing integrals") {
  auto p = make_params(0.15, 1.0, 1.3, 2.0);
  const int N = 4;
  const std::vector<double> b{0.7, -0.2, 0.05, 0.3};
  mp::Vector d = target_moments(p, b, N, 256);
  auto y0 = [&](double x) {
    double v = 0.0;
    for (int j = 0; j < N; ++j) v += b[j] * std::sin((j + 1) * kPi * x / p.length);
    return v;
  };
  mp::Vector lam = eigenvalues_mp(p, N, 256);
  for (int k = 1; k <= N; ++k) {
    const double mu = integrate(
        [&](double x) { return y0(x) * std::exp(-p.tilt() * x) * std::sin(k * kPi * x / p.length); },
        0.0, p.length);
    // assemble the expectation in working precision; the high modes underflow double
    BigFloat expect = BigFloat(p.length / (k * kPi), 256) *
                      exp(-lam[k - 1] * BigFloat(p.horizon, 256)) * BigFloat(mu, 256);
    CHECK(relative_difference(d[k - 1], expect) < 1e-10);
  }
}

TEST_CASE("short coefficient vectors need the explicit padding flag") {
  auto p = make_params(0.1, 1.0, 1.0, 1.0);
  CHECK_THROWS_AS(target_moments(p, {1.0}, 4, 256), std::domain_error);
  mp::Vector d = target_moments(p, {1.0}, 4, 256, /*pad_with_zeros=*/true);
  CHECK(d.size() == 4);
}

TEST_CASE("minimal-norm solve: trivial and scalar cases") {
  auto p = make_params(0.1, 1.0, 1.0, 6.0);
  MomentProblem prob;
  prob.params = p;
  prob.order = 3;
  prob.precision_bits = 256;
  prob.lambdas = eigenvalues_mp(p, 3, 256);
  prob.targets = mp::Vector(3, BigFloat(256));
  ControlFunction u = solve_min_norm_control(prob);
  CHECK(u.norm.to_double() == 0.0);
  CHECK(u(0.5 * p.horizon) == 0.0);

  prob.order = 1;
  prob.lambdas = rates({1.0}, 256);
  prob.targets = rates({0.25}, 256);
  prob.params = make_params(1, 1, 1, 1);
  ControlFunction u1 = solve_min_norm_control(prob);
  const double g11 = -std::expm1(-2.0) / 2.0;
  CHECK(u1.alphas[0].to_double() == doctest::Approx(0.25 / g11).epsilon(1e-14));
}

TEST_CASE("synthesized control reproduces its moments under mp quadrature") {
  auto p = make_params(0.05, 1.0, 1.0, 5.0);
  const int N = 6;
  const long bits = 512;
  MomentProblem prob;
  prob.params = p;
  prob.order = N;
  prob.precision_bits = bits;
  prob.lambdas = eigenvalues_mp(p, N, bits);
  prob.targets = target_moments_tilted_mode(p, 1, N, bits);
  ControlFunction u = solve_min_norm_control(prob);
  const BigFloat T(p.horizon, bits);
  const double d_scale = abs(prob.targets[0]).to_double();
  for (int k = 0; k < N; ++k) {
    auto f = [&](const BigFloat& t) { return u.eval_mp(t) * exp(-prob.lambdas[k] * (T - t)); };
    BigFloat q = mp::integrate_tanh_sinh(f, BigFloat(0.0, bits), T, bits, -45, 14, d_scale);
    BigFloat scale = max(abs(prob.targets[0]), abs(q));
    CHECK((abs(q - prob.targets[k]) / scale).to_double() < 1e-20);
  }
}

TEST_CASE("biorthogonal norms: scalar case, monotonicity, pairing quadrature") {
  auto p = make_params(0.1, 1.0, 1.0, 6.0);
  const long bits = 320;
  GramMatrix g1 = gram_matrix(p, 1, bits);
  CHECK(biorthogonal_norm(g1, 1).to_double() ==
        doctest::Approx(1.0 / std::sqrt(g1.entries.at(0, 0).to_double())).epsilon(1e-12));

  double prev = 0.0;
  for (int N = 1; N <= 10; ++N) {
    GramMatrix g = gram_matrix(p, N, bits);
    const double cur = biorthogonal_norm(g, 1).to_double();
    CHECK(cur >= prev * (1.0 - 1e-12));
    prev = cur;
  }

  GramMatrix g = gram_matrix(p, 5, bits);
  for (int j = 1; j <= 5; ++j)
    for (int k = 1; k <= 5; ++k) {
      BigFloat v = biorthogonal_pairing_quadrature(g, j, k);
      const double expect = (j == k) ? 1.0 : 0.0;
      CHECK(std::fabs(v.to_double() - expect) < 1e-20);
    }
}

TEST_CASE("cost estimate: scalar closed form") {
  auto p = make_params(0.3, 1.0, 1.0, 2.0);
  CostEstimate c = cost_estimate(p, 1, 256);
  // K_1 = sqrt(2/L) |E_11| (L/pi) e^{-lambda_1 T} / sqrt(G_11)
  const double lam = eigenvalue(p, 1);
  const double E11 = tilted_sine_product(p.tilt(), p.length, 1, 1);
  const double G11 = -std::expm1(-2.0 * lam * p.horizon) / (2.0 * lam);
  const double expect =
      std::sqrt(2.0 / p.length) * E11 * (p.length / kPi) * std::exp(-lam * p.horizon) / std::sqrt(G11);
  CHECK(c.value.to_double() == doctest::Approx(expect).epsilon(1e-12).scale(0.0));
}

TEST_CASE("cost estimate is nondecreasing in the truncation order") {
  auto p = make_params(0.1, 1.0, 1.0, 6.0);
  double prev = -1e300;
  for (int N = 1; N <= 12; ++N) {
    CostEstimate c = cost_estimate(p, N, 256);
    CHECK(c.log_value >= prev - 1e-9);
    prev = c.log_value;
  }
}

TEST_CASE("both cost scaling relations hold to 1e-10") {
  auto p = make_params(0.05, 1.0, 1.0, 6.0);
  for (double a : {16.0, 0.0625}) {
    CHECK(cost_scaling_residual_time_length(p, a, 8, 256) < 1e-10);
    CHECK(cost_scaling_residual_viscosity(p, a, 8, 256) < 1e-10);
  }
  CHECK(cost_scaling_residual_time_length(p, 1.0, 4, 256) < 1e-12);
  CHECK(cost_scaling_residual_viscosity(p, 1.0, 4, 256) < 1e-12);
}

TEST_CASE("cost regime trends in eps^{-1/3}") {
  // T = 6: the cost is free-decay dominated at moderate viscosity (log K_8
  // tracks -lambda_1 T, which shrinks until eps ~ 2e-3), and only then enters
  // the exponential-decrease regime. Both phases are asserted.
  {
    double prev = -1e300;
    for (double eps : {0.2, 0.1, 0.05, 0.02}) {
      auto p = make_params(eps, 1.0, 1.0, 6.0);
      CostEstimate c = cost_estimate(p, 8, 256);
      CHECK(std::fabs(c.log_value + eigenvalue(p, 1) * p.horizon) <
            0.05 * eigenvalue(p, 1) * p.horizon + 3.0);
      CHECK(c.log_value > prev);  // lambda_1 T shrinks over this window
      prev = c.log_value;
    }
  }
  {
    // deep-viscosity regime: strictly decreasing in eps^{-1/3}
    double prev = 1e300;
    for (double eps : {1e-3, 5e-4, 2e-4, 1e-4}) {
      CostEstimate c = cost_estimate(make_params(eps, 1.0, 1.0, 6.0), 8, 256);
      CHECK(c.log_value < prev);
      prev = c.log_value;
    }
  }
  // T = 0.3, below the lower threshold: increasing over the standard sweep
  {
    double prev = -1e300;
    for (double eps : {0.2, 0.1, 0.05, 0.02}) {
      CostEstimate c = cost_estimate(make_params(eps, 1.0, 1.0, 0.3), 8, 256);
      CHECK(c.log_value > prev);
      prev = c.log_value;
    }
  }
}

TEST_CASE("conditioning report grows with order and deep viscosity") {
  CostEstimate n4 = cost_estimate(make_params(0.1, 1.0, 1.0, 0.3), 4, 256);
  CostEstimate n12 = cost_estimate(make_params(0.1, 1.0, 1.0, 0.3), 12, 256);
  CHECK(n12.log10_condition > n4.log10_condition);
  CHECK(n4.log10_condition > 0.0);
  // eigenvalues cluster in relative terms as eps -> 0
  CostEstimate deep = cost_estimate(make_params(1e-5, 1.0, 1.0, 6.0), 8, 256);
  CostEstimate mid = cost_estimate(make_params(0.02, 1.0, 1.0, 6.0), 8, 256);
  CHECK(deep.log10_condition > mid.log10_condition + 3.0);
}
