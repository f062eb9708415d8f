#include "vclab/params.hpp"

#include <cmath>
#include <stdexcept>

namespace vclab {

PhysicalParams make_params(double epsilon, double mach, double length, double horizon) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon))
    throw std::domain_error("make_params: epsilon must be positive and finite");
  if (mach == 0.0 || !std::isfinite(mach))
    throw std::domain_error("make_params: mach must be nonzero and finite");
  if (!(length > 0.0) || !std::isfinite(length))
    throw std::domain_error("make_params: length must be positive and finite");
  if (!(horizon > 0.0) || !std::isfinite(horizon))
    throw std::domain_error("make_params: horizon must be positive and finite");

  PhysicalParams p;
  p.epsilon = epsilon;
  p.mach = mach;
  p.length = length;
  p.horizon = horizon;
  p.delta = -2.0 * std::pow(epsilon, 2.0 / 3.0) * std::cbrt(mach);
  return p;
}

}  // namespace vclab
