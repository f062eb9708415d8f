#pragma once

#include <stdexcept>
#include <string>

namespace vclab {

/// Gram factorization lost positive definiteness at the working precision.
struct ConditioningError : std::runtime_error {
  explicit ConditioningError(const std::string& what) : std::runtime_error(what) {}
};

/// Two exponential rates coincide to working precision; no regularization is attempted.
struct SingularError : std::runtime_error {
  explicit SingularError(const std::string& what) : std::runtime_error(what) {}
};

/// Adaptive quadrature failed to meet its tolerance within the refinement budget.
struct QuadratureError : std::runtime_error {
  explicit QuadratureError(const std::string& what) : std::runtime_error(what) {}
};

/// Root/minimum bracketing failed.
struct BracketError : std::runtime_error {
  explicit BracketError(const std::string& what) : std::runtime_error(what) {}
};

/// Per-step banded system was singular (bad grid/step combination).
struct LinearSolveError : std::runtime_error {
  explicit LinearSolveError(const std::string& what) : std::runtime_error(what) {}
};

/// Least-squares fit has coincident abscissae.
struct DegenerateFitError : std::runtime_error {
  explicit DegenerateFitError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace vclab
