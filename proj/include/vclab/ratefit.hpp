#pragma once

#include <vector>

namespace vclab {

/// Ordinary least squares of log K against eps^{-1/3}.
struct RateFit {
  double slope = 0.0;      // per unit eps^{-1/3}
  double intercept = 0.0;
  double r_squared = 1.0;
};

struct SweepRow {
  double epsilon = 0.0;
  double eps_pow = 0.0;    // eps^{-1/3}
  double log_cost = 0.0;   // ln K_N
  double log10_condition = 0.0;
  long bits_used = 0;
};

/// Fits (eps^{-1/3}, log K). Requires >= 4 rows with distinct abscissae;
/// throws DegenerateFitError otherwise. Constant ordinates give slope 0, R^2 = 1.
RateFit fit_rate(const std::vector<SweepRow>& rows);

RateFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace vclab
