#pragma once

#include <cmath>

namespace vclab {

/// Problem constants for the boundary-controlled system
///   y_t + eps y_xxxx + delta y_xxx + M y_x = 0   on (0,T) x (0,L),
/// with delta = -2 eps^{2/3} M^{1/3} (real cube root, sign-preserving for M < 0).
/// The derived delta is the unique choice that makes the adjoint spatial operator
/// diagonalizable by tilted sine modes.
struct PhysicalParams {
  double epsilon;  // viscosity, > 0
  double mach;     // transport speed M, != 0
  double length;   // L, > 0
  double horizon;  // T, > 0
  double delta;    // -2 eps^{2/3} M^{1/3}

  /// M^{1/3}/(2 eps^{1/3}): exponential tilt rate of the adjoint eigenfunctions.
  double tilt() const { return std::cbrt(mach) / (2.0 * std::cbrt(epsilon)); }
};

/// Validates and builds PhysicalParams. Throws std::domain_error naming the
/// offending field on any violated precondition.
PhysicalParams make_params(double epsilon, double mach, double length, double horizon);

}  // namespace vclab
