#pragma once

#include <mpfr.h>

#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace vclab {

/// Arbitrary-precision real backed by mpfr_t. Every value carries its own
/// precision; binary operations round to the wider operand's precision.
/// No shared state, safe to use from concurrent sweeps.
class BigFloat {
 public:
  explicit BigFloat(long prec_bits = 256) { mpfr_init2(v_, prec_bits); mpfr_set_zero(v_, 1); }
  BigFloat(double x, long prec_bits) { mpfr_init2(v_, prec_bits); mpfr_set_d(v_, x, MPFR_RNDN); }
  BigFloat(long x, long prec_bits) { mpfr_init2(v_, prec_bits); mpfr_set_si(v_, x, MPFR_RNDN); }
  BigFloat(const BigFloat& o) { mpfr_init2(v_, o.precision()); mpfr_set(v_, o.v_, MPFR_RNDN); }
  BigFloat(BigFloat&& o) noexcept {
    mpfr_init2(v_, 64);
    mpfr_swap(v_, o.v_);
  }
  BigFloat& operator=(const BigFloat& o) {
    if (this != &o) {
      mpfr_set_prec(v_, o.precision());
      mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    return *this;
  }
  BigFloat& operator=(BigFloat&& o) noexcept {
    if (this != &o) mpfr_swap(v_, o.v_);
    return *this;
  }
  ~BigFloat() { mpfr_clear(v_); }

  long precision() const { return mpfr_get_prec(v_); }
  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
  /// Natural log of |x| as double (usable when the value itself under/overflows double).
  double log_abs_double() const;
  int sign() const { return mpfr_sgn(v_); }
  bool is_zero() const { return mpfr_zero_p(v_) != 0; }
  std::string str(int significant_digits = 20) const;

  mpfr_ptr raw() { return v_; }
  mpfr_srcptr raw() const { return v_; }

  static BigFloat pi(long prec_bits);

  BigFloat& operator+=(const BigFloat& o) { mpfr_add(v_, v_, o.v_, MPFR_RNDN); return *this; }
  BigFloat& operator-=(const BigFloat& o) { mpfr_sub(v_, v_, o.v_, MPFR_RNDN); return *this; }
  BigFloat& operator*=(const BigFloat& o) { mpfr_mul(v_, v_, o.v_, MPFR_RNDN); return *this; }
  BigFloat& operator/=(const BigFloat& o) { mpfr_div(v_, v_, o.v_, MPFR_RNDN); return *this; }

 private:
  mpfr_t v_;
};

BigFloat operator+(const BigFloat& a, const BigFloat& b);
BigFloat operator-(const BigFloat& a, const BigFloat& b);
BigFloat operator*(const BigFloat& a, const BigFloat& b);
BigFloat operator/(const BigFloat& a, const BigFloat& b);
BigFloat operator-(const BigFloat& a);
bool operator<(const BigFloat& a, const BigFloat& b);
bool operator>(const BigFloat& a, const BigFloat& b);
bool operator<=(const BigFloat& a, const BigFloat& b);
bool operator>=(const BigFloat& a, const BigFloat& b);
bool operator==(const BigFloat& a, const BigFloat& b);

BigFloat abs(const BigFloat& a);
BigFloat sqrt(const BigFloat& a);
BigFloat cbrt(const BigFloat& a);
BigFloat exp(const BigFloat& a);
BigFloat expm1(const BigFloat& a);
BigFloat log(const BigFloat& a);
BigFloat pow_int(const BigFloat& a, long n);
BigFloat pow(const BigFloat& a, const BigFloat& b);
BigFloat max(const BigFloat& a, const BigFloat& b);

/// |a-b| / max(|a|,|b|) as double; 0 if both are zero.
double relative_difference(const BigFloat& a, const BigFloat& b);

namespace mp {

using Vector = std::vector<BigFloat>;

struct Matrix {
  int rows = 0, cols = 0;
  std::vector<BigFloat> a;
  static Matrix zeros(int r, int c, long prec);
  BigFloat& at(int i, int j) { return a[static_cast<size_t>(i) * cols + j]; }
  const BigFloat& at(int i, int j) const { return a[static_cast<size_t>(i) * cols + j]; }
};

Matrix multiply(const Matrix& A, const Matrix& B);
Matrix transpose(const Matrix& A);
Vector multiply(const Matrix& A, const Vector& x);
BigFloat dot(const Vector& x, const Vector& y);

/// Solves L X = B with L lower triangular.
Matrix lower_solve(const Matrix& L, const Matrix& B);

/// Lower-triangular Cholesky factor of an SPD matrix.
/// Throws ConditioningError on a non-positive pivot (precision too low).
Matrix cholesky(const Matrix& A);
Vector cholesky_solve(const Matrix& L, const Vector& b);
Matrix cholesky_solve_matrix(const Matrix& L, const Matrix& B);
Matrix cholesky_inverse(const Matrix& L);

/// Eigenvalues of a symmetric matrix by cyclic Jacobi sweeps, ascending.
Vector jacobi_eigenvalues(Matrix A, int max_sweeps = 64);

/// Tanh-sinh (double-exponential) quadrature on [a,b] with level doubling.
/// Suited to analytic integrands with endpoint concentration. Convergence is
/// judged against max(|integral|, abs_scale), so cancelling integrals with a
/// known external scale terminate. Throws QuadratureError if the level budget
/// is exhausted before the sums settle.
BigFloat integrate_tanh_sinh(const std::function<BigFloat(const BigFloat&)>& f,
                             const BigFloat& a, const BigFloat& b, long prec,
                             double log10_rel_tol, int max_level = 12,
                             double abs_scale = 0.0);

}  // namespace mp
}  // namespace vclab
