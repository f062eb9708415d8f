#include "vclab/ratefit.hpp"

#include <cmath>
#include <stdexcept>

#include "vclab/errors.hpp"

namespace vclab {

RateFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  const size_t n = x.size();
  if (n != y.size() || n < 2) throw std::domain_error("fit_line: need matched samples");
  double mx = 0.0, my = 0.0;
  for (size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx <= 0.0) throw DegenerateFitError("fit_line: coincident abscissae");
  RateFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double ss_res = 0.0, ss_tot = 0.0;
  for (size_t i = 0; i < n; ++i) {
    const double pred = f.intercept + f.slope * x[i];
    ss_res += (y[i] - pred) * (y[i] - pred);
    ss_tot += (y[i] - my) * (y[i] - my);
  }
  f.r_squared = (ss_tot > 0.0) ? std::max(0.0, 1.0 - ss_res / ss_tot) : 1.0;
  return f;
}

RateFit fit_rate(const std::vector<SweepRow>& rows) {
  if (rows.size() < 4) throw std::domain_error("fit_rate: need at least 4 sweep points");
  std::vector<double> x, y;
  x.reserve(rows.size());
  y.reserve(rows.size());
  for (const auto& r : rows) {
    x.push_back(r.eps_pow);
    y.push_back(r.log_cost);
  }
  return fit_line(x, y);
}

}  // namespace vclab
