#include "vclab/mp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "vclab/errors.hpp"

namespace vclab {

namespace {
long max_prec(const BigFloat& a, const BigFloat& b) {
  return std::max(a.precision(), b.precision());
}
}  // namespace

double BigFloat::log_abs_double() const {
  if (mpfr_zero_p(v_)) return -std::numeric_limits<double>::infinity();
  mpfr_t t;
  mpfr_init2(t, 64);
  mpfr_abs(t, v_, MPFR_RNDN);
  mpfr_log(t, t, MPFR_RNDN);
  double r = mpfr_get_d(t, MPFR_RNDN);
  mpfr_clear(t);
  return r;
}

std::string BigFloat::str(int significant_digits) const {
  char buf[512];
  mpfr_snprintf(buf, sizeof(buf), "%.*Re", significant_digits - 1, v_);
  return std::string(buf);
}

BigFloat BigFloat::pi(long prec_bits) {
  BigFloat r(prec_bits);
  mpfr_const_pi(r.raw(), MPFR_RNDN);
  return r;
}

#define VCLAB_MP_BINOP(op, fn)                                   \
  BigFloat operator op(const BigFloat& a, const BigFloat& b) {   \
    BigFloat r(max_prec(a, b));                                  \
    fn(r.raw(), a.raw(), b.raw(), MPFR_RNDN);                    \
    return r;                                                    \
  }
VCLAB_MP_BINOP(+, mpfr_add)
VCLAB_MP_BINOP(-, mpfr_sub)
VCLAB_MP_BINOP(*, mpfr_mul)
VCLAB_MP_BINOP(/, mpfr_div)
#undef VCLAB_MP_BINOP

BigFloat operator-(const BigFloat& a) {
  BigFloat r(a.precision());
  mpfr_neg(r.raw(), a.raw(), MPFR_RNDN);
  return r;
}

bool operator<(const BigFloat& a, const BigFloat& b) { return mpfr_cmp(a.raw(), b.raw()) < 0; }
bool operator>(const BigFloat& a, const BigFloat& b) { return mpfr_cmp(a.raw(), b.raw()) > 0; }
bool operator<=(const BigFloat& a, const BigFloat& b) { return mpfr_cmp(a.raw(), b.raw()) <= 0; }
bool operator>=(const BigFloat& a, const BigFloat& b) { return mpfr_cmp(a.raw(), b.raw()) >= 0; }
bool operator==(const BigFloat& a, const BigFloat& b) { return mpfr_cmp(a.raw(), b.raw()) == 0; }

#define VCLAB_MP_UNFN(name, fn)              \
  BigFloat name(const BigFloat& a) {         \
    BigFloat r(a.precision());               \
    fn(r.raw(), a.raw(), MPFR_RNDN);         \
    return r;                                \
  }
VCLAB_MP_UNFN(abs, mpfr_abs)
VCLAB_MP_UNFN(sqrt, mpfr_sqrt)
VCLAB_MP_UNFN(cbrt, mpfr_cbrt)
VCLAB_MP_UNFN(exp, mpfr_exp)
VCLAB_MP_UNFN(expm1, mpfr_expm1)
VCLAB_MP_UNFN(log, mpfr_log)
#undef VCLAB_MP_UNFN

BigFloat pow_int(const BigFloat& a, long n) {
  BigFloat r(a.precision());
  mpfr_pow_si(r.raw(), a.raw(), n, MPFR_RNDN);
  return r;
}

BigFloat pow(const BigFloat& a, const BigFloat& b) {
  BigFloat r(max_prec(a, b));
  mpfr_pow(r.raw(), a.raw(), b.raw(), MPFR_RNDN);
  return r;
}

BigFloat max(const BigFloat& a, const BigFloat& b) { return (a < b) ? b : a; }

double relative_difference(const BigFloat& a, const BigFloat& b) {
  BigFloat num = abs(a - b);
  BigFloat den = max(abs(a), abs(b));
  if (den.is_zero()) return 0.0;
  return (num / den).to_double();
}

namespace mp {

Matrix Matrix::zeros(int r, int c, long prec) {
  Matrix m;
  m.rows = r;
  m.cols = c;
  m.a.assign(static_cast<size_t>(r) * c, BigFloat(prec));
  return m;
}

Matrix multiply(const Matrix& A, const Matrix& B) {
  const long prec = std::max(A.a.empty() ? 64 : A.a[0].precision(),
                             B.a.empty() ? 64 : B.a[0].precision());
  Matrix C = Matrix::zeros(A.rows, B.cols, prec);
  for (int i = 0; i < A.rows; ++i)
    for (int k = 0; k < A.cols; ++k) {
      const BigFloat& aik = A.at(i, k);
      if (aik.is_zero()) continue;
      for (int j = 0; j < B.cols; ++j) C.at(i, j) += aik * B.at(k, j);
    }
  return C;
}

Matrix transpose(const Matrix& A) {
  Matrix T = Matrix::zeros(A.cols, A.rows, A.a.empty() ? 64 : A.a[0].precision());
  for (int i = 0; i < A.rows; ++i)
    for (int j = 0; j < A.cols; ++j) T.at(j, i) = A.at(i, j);
  return T;
}

Vector multiply(const Matrix& A, const Vector& x) {
  Vector y(static_cast<size_t>(A.rows), BigFloat(A.a.empty() ? 64 : A.a[0].precision()));
  for (int i = 0; i < A.rows; ++i)
    for (int j = 0; j < A.cols; ++j) y[i] += A.at(i, j) * x[j];
  return y;
}

BigFloat dot(const Vector& x, const Vector& y) {
  BigFloat s(x.empty() ? 64 : x[0].precision());
  for (size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

Matrix lower_solve(const Matrix& L, const Matrix& B) {
  Matrix X = B;
  const int n = L.rows;
  for (int c = 0; c < B.cols; ++c)
    for (int i = 0; i < n; ++i) {
      for (int k = 0; k < i; ++k) X.at(i, c) -= L.at(i, k) * X.at(k, c);
      X.at(i, c) /= L.at(i, i);
    }
  return X;
}

Matrix cholesky(const Matrix& A) {
  const int n = A.rows;
  const long prec = A.a.empty() ? 64 : A.a[0].precision();
  Matrix L = Matrix::zeros(n, n, prec);
  for (int j = 0; j < n; ++j) {
    BigFloat d = A.at(j, j);
    for (int k = 0; k < j; ++k) d -= L.at(j, k) * L.at(j, k);
    if (!(d.sign() > 0))
      throw ConditioningError("cholesky: non-positive pivot at row " + std::to_string(j) +
                              " (precision too low for this conditioning)");
    L.at(j, j) = sqrt(d);
    for (int i = j + 1; i < n; ++i) {
      BigFloat s = A.at(i, j);
      for (int k = 0; k < j; ++k) s -= L.at(i, k) * L.at(j, k);
      L.at(i, j) = s / L.at(j, j);
    }
  }
  return L;
}

Vector cholesky_solve(const Matrix& L, const Vector& b) {
  const int n = L.rows;
  Vector y(b);
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < i; ++k) y[i] -= L.at(i, k) * y[k];
    y[i] /= L.at(i, i);
  }
  for (int i = n - 1; i >= 0; --i) {
    for (int k = i + 1; k < n; ++k) y[i] -= L.at(k, i) * y[k];
    y[i] /= L.at(i, i);
  }
  return y;
}

Matrix cholesky_solve_matrix(const Matrix& L, const Matrix& B) {
  Matrix X = B;
  const int n = L.rows;
  for (int c = 0; c < B.cols; ++c) {
    Vector col(static_cast<size_t>(n), BigFloat(L.a[0].precision()));
    for (int i = 0; i < n; ++i) col[i] = B.at(i, c);
    col = cholesky_solve(L, col);
    for (int i = 0; i < n; ++i) X.at(i, c) = col[i];
  }
  return X;
}

Matrix cholesky_inverse(const Matrix& L) {
  const int n = L.rows;
  Matrix I = Matrix::zeros(n, n, L.a[0].precision());
  for (int i = 0; i < n; ++i) I.at(i, i) = BigFloat(1.0, L.a[0].precision());
  return cholesky_solve_matrix(L, I);
}

Vector jacobi_eigenvalues(Matrix A, int max_sweeps) {
  const int n = A.rows;
  const long prec = A.a[0].precision();
  const BigFloat one(1.0, prec);
  // threshold relative to the diagonal scale, a few bits above rounding
  BigFloat diag_scale(prec);
  for (int i = 0; i < n; ++i) diag_scale += A.at(i, i) * A.at(i, i);
  diag_scale = sqrt(diag_scale) + BigFloat(1e-300, prec);
  BigFloat thresh = diag_scale;
  mpfr_mul_2si(thresh.raw(), thresh.raw(), -(prec - 8), MPFR_RNDN);

  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    BigFloat off(prec);
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) off += A.at(p, q) * A.at(p, q);
    if (sqrt(off) <= thresh) break;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) {
        if (abs(A.at(p, q)) <= thresh * BigFloat(1e-6, prec)) continue;
        BigFloat apq = A.at(p, q);
        BigFloat theta = (A.at(q, q) - A.at(p, p)) / (BigFloat(2.0, prec) * apq);
        BigFloat t = one / (abs(theta) + sqrt(theta * theta + one));
        if (theta.sign() < 0) t = -t;
        BigFloat c = one / sqrt(t * t + one);
        BigFloat s = t * c;
        for (int i = 0; i < n; ++i) {
          BigFloat aip = A.at(i, p), aiq = A.at(i, q);
          A.at(i, p) = c * aip - s * aiq;
          A.at(i, q) = s * aip + c * aiq;
        }
        for (int i = 0; i < n; ++i) {
          BigFloat api = A.at(p, i), aqi = A.at(q, i);
          A.at(p, i) = c * api - s * aqi;
          A.at(q, i) = s * api + c * aqi;
        }
      }
  }
  Vector ev(static_cast<size_t>(n), BigFloat(prec));
  for (int i = 0; i < n; ++i) ev[i] = A.at(i, i);
  std::sort(ev.begin(), ev.end());
  return ev;
}

BigFloat integrate_tanh_sinh(const std::function<BigFloat(const BigFloat&)>& f,
                             const BigFloat& a, const BigFloat& b, long prec,
                             double log10_rel_tol, int max_level, double abs_scale) {
  const BigFloat halfpi = BigFloat::pi(prec) / BigFloat(2.0, prec);
  const BigFloat mid = (a + b) / BigFloat(2.0, prec);
  const BigFloat half = (b - a) / BigFloat(2.0, prec);
  // nodes past u_max land within one ulp of the endpoints
  const double u_max = std::asinh((0.6931471805599453 * prec + 16.0) / 3.141592653589793 * 2.0) + 0.1;

  auto term = [&](double u) -> BigFloat {
    BigFloat bu(u, prec);
    BigFloat sh(prec), ch(prec), th(prec), c2(prec);
    mpfr_sinh(sh.raw(), bu.raw(), MPFR_RNDN);
    mpfr_cosh(ch.raw(), bu.raw(), MPFR_RNDN);
    BigFloat arg = halfpi * sh;
    mpfr_tanh(th.raw(), arg.raw(), MPFR_RNDN);
    mpfr_cosh(c2.raw(), arg.raw(), MPFR_RNDN);
    BigFloat x = mid + half * th;
    if (x <= a || x >= b) return BigFloat(prec);
    BigFloat w = halfpi * ch / (c2 * c2);
    return w * f(x);
  };

  BigFloat prev(prec);
  BigFloat sum = term(0.0);
  double h = 1.0;
  {
    for (double u = h; u <= u_max; u += h) sum += term(u) + term(-u);
  }
  const BigFloat tol_factor(std::pow(10.0, log10_rel_tol), prec);
  const BigFloat floor_scale = abs(BigFloat(abs_scale, prec) / (half + BigFloat(1e-300, prec)));
  for (int level = 1; level <= max_level; ++level) {
    h *= 0.5;
    BigFloat add(prec);
    for (double u = h; u <= u_max; u += 2.0 * h) add += term(u) + term(-u);
    prev = sum * BigFloat(h * 2.0, prec);
    sum = sum + add;
    BigFloat cur = sum * BigFloat(h, prec);
    if (level >= 3) {
      BigFloat diff = abs(cur - prev);
      if (diff <= max(abs(cur), floor_scale) * tol_factor) return cur * half;
      if (cur.is_zero() && diff.is_zero()) return cur * half;
    }
  }
  throw QuadratureError("integrate_tanh_sinh: level budget exhausted before convergence");
}

}  // namespace mp
}  // namespace vclab
