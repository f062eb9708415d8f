#pragma once

#include <functional>
#include <vector>

namespace vclab {

struct QuadratureOptions {
  double abs_tol = 1e-12;
  double rel_tol = 1e-10;
  int max_panels = 20000;
  bool throw_on_failure = true;
};

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  int panels = 0;
  bool converged = false;
};

/// Globally adaptive Gauss-Kronrod 15(7) integration on [a, b].
/// Panels never evaluate f at their endpoints, so integrable endpoint
/// singularities are admissible. Deterministic refinement order.
QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                    const QuadratureOptions& opts = {});

/// Convenience wrapper returning just the value (throws QuadratureError per opts).
double integrate(const std::function<double(double)>& f, double a, double b,
                 const QuadratureOptions& opts = {});

/// As integrate(), with the interval pre-split at the listed interior points
/// (known integrable singularities; panels must not straddle them).
double integrate_split(const std::function<double(double)>& f, double a, double b,
                       const std::vector<double>& interior_splits,
                       const QuadratureOptions& opts = {});

/// Integral over [a, +inf) via the rational substitution t = a + u/(1-u).
double integrate_to_infinity(const std::function<double(double)>& f, double a,
                             const QuadratureOptions& opts = {});

}  // namespace vclab
