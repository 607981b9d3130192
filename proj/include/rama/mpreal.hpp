#pragma once

// Thin RAII wrapper around MPFR. Every value carries its own precision; binary
// operations produce the larger of the two operand precisions.

#include <mpfr.h>

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "rama/exact.hpp"

namespace rama {

/// Bits needed to carry `digits` decimal digits plus a small safety margin.
inline mpfr_prec_t digits_to_bits(int digits) {
  return static_cast<mpfr_prec_t>(std::ceil(digits * 3.3219280948873623)) + 16;
}

class MPReal {
 public:
  explicit MPReal(mpfr_prec_t bits = 128) { mpfr_init2(v_, bits); mpfr_set_zero(v_, 1); }
  MPReal(long x, mpfr_prec_t bits) { mpfr_init2(v_, bits); mpfr_set_si(v_, x, MPFR_RNDN); }
  MPReal(const BigRational& q, mpfr_prec_t bits) { mpfr_init2(v_, bits); mpfr_set_q(v_, q.get_mpq_t(), MPFR_RNDN); }
  MPReal(const BigInt& z, mpfr_prec_t bits) { mpfr_init2(v_, bits); mpfr_set_z(v_, z.get_mpz_t(), MPFR_RNDN); }
  MPReal(const std::string& decimal, mpfr_prec_t bits) {
    mpfr_init2(v_, bits);
    if (mpfr_set_str(v_, decimal.c_str(), 10, MPFR_RNDN) != 0) {
      mpfr_clear(v_);
      throw Error("malformed real '" + decimal + "'");
    }
  }

  MPReal(const MPReal& o) { mpfr_init2(v_, mpfr_get_prec(o.v_)); mpfr_set(v_, o.v_, MPFR_RNDN); }
  MPReal(MPReal&& o) noexcept {
    mpfr_init2(v_, MPFR_PREC_MIN);
    mpfr_swap(v_, o.v_);
  }
  MPReal& operator=(const MPReal& o) {
    if (this != &o) {
      mpfr_set_prec(v_, mpfr_get_prec(o.v_));
      mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    return *this;
  }
  MPReal& operator=(MPReal&& o) noexcept {
    mpfr_swap(v_, o.v_);
    return *this;
  }
  ~MPReal() { mpfr_clear(v_); }

  mpfr_prec_t precision() const { return mpfr_get_prec(v_); }
  mpfr_ptr get() { return v_; }
  mpfr_srcptr get() const { return v_; }

  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
  bool is_zero() const { return mpfr_zero_p(v_) != 0; }
  int sign() const { return mpfr_sgn(v_); }

  /// Scientific notation with `digits` significant digits.
  std::string to_string(int digits) const {
    if (mpfr_zero_p(v_)) return "0";
    char* buf = nullptr;
    std::string fmt = "%." + std::to_string(std::max(digits - 1, 0)) + "Re";
    mpfr_asprintf(&buf, fmt.c_str(), v_);
    std::string s(buf);
    mpfr_free_str(buf);
    return s;
  }

#define RAMA_MPREAL_BINOP(op, fn)                                                         \
  friend MPReal operator op(const MPReal& a, const MPReal& b) {                          \
    MPReal r(std::max(a.precision(), b.precision()));                                    \
    fn(r.v_, a.v_, b.v_, MPFR_RNDN);                                                     \
    return r;                                                                            \
  }                                                                                      \
  friend MPReal operator op(const MPReal& a, long b) { return a op MPReal(b, a.precision()); } \
  friend MPReal operator op(long a, const MPReal& b) { return MPReal(a, b.precision()) op b; } \
  MPReal& operator op##=(const MPReal& b) { return *this = *this op b; }                   \
  MPReal& operator op##=(long b) { return *this = *this op b; }

  RAMA_MPREAL_BINOP(+, mpfr_add)
  RAMA_MPREAL_BINOP(-, mpfr_sub)
  RAMA_MPREAL_BINOP(*, mpfr_mul)
  RAMA_MPREAL_BINOP(/, mpfr_div)
#undef RAMA_MPREAL_BINOP

  MPReal operator-() const {
    MPReal r(precision());
    mpfr_neg(r.v_, v_, MPFR_RNDN);
    return r;
  }

  friend bool operator<(const MPReal& a, const MPReal& b) { return mpfr_less_p(a.v_, b.v_) != 0; }
  friend bool operator>(const MPReal& a, const MPReal& b) { return mpfr_greater_p(a.v_, b.v_) != 0; }
  friend bool operator<=(const MPReal& a, const MPReal& b) { return mpfr_lessequal_p(a.v_, b.v_) != 0; }
  friend bool operator>=(const MPReal& a, const MPReal& b) { return mpfr_greaterequal_p(a.v_, b.v_) != 0; }
  friend bool operator==(const MPReal& a, const MPReal& b) { return mpfr_equal_p(a.v_, b.v_) != 0; }

 private:
  mpfr_t v_;
};

namespace detail {
template <typename F>
MPReal unary(const MPReal& x, F fn) {
  MPReal r(x.precision());
  fn(r.get(), x.get(), MPFR_RNDN);
  return r;
}
}  // namespace detail

inline MPReal abs(const MPReal& x) { return detail::unary(x, mpfr_abs); }
inline MPReal sqrt(const MPReal& x) { return detail::unary(x, mpfr_sqrt); }
inline MPReal exp(const MPReal& x) { return detail::unary(x, mpfr_exp); }
inline MPReal log(const MPReal& x) { return detail::unary(x, mpfr_log); }
inline MPReal sin(const MPReal& x) { return detail::unary(x, mpfr_sin); }
inline MPReal cos(const MPReal& x) { return detail::unary(x, mpfr_cos); }
inline MPReal floor(const MPReal& x) {
  MPReal r(x.precision());
  mpfr_floor(r.get(), x.get());
  return r;
}
inline MPReal pow(const MPReal& x, const MPReal& y) {
  MPReal r(std::max(x.precision(), y.precision()));
  mpfr_pow(r.get(), x.get(), y.get(), MPFR_RNDN);
  return r;
}
inline MPReal pow(const MPReal& x, long n) {
  MPReal r(x.precision());
  mpfr_pow_si(r.get(), x.get(), n, MPFR_RNDN);
  return r;
}
inline MPReal const_pi(mpfr_prec_t bits) {
  MPReal r(bits);
  mpfr_const_pi(r.get(), MPFR_RNDN);
  return r;
}
/// 10^-digits at the given precision.
inline MPReal ten_to_minus(int digits, mpfr_prec_t bits) { return pow(MPReal(10, bits), -static_cast<long>(digits)); }

inline MPReal max(const MPReal& a, const MPReal& b) { return a < b ? b : a; }

/// Complex number over MPReal, just the operations the analytic layer needs.
struct MPComplex {
  MPReal re;
  MPReal im;

  explicit MPComplex(mpfr_prec_t bits = 128) : re(bits), im(bits) {}
  MPComplex(MPReal r, MPReal i) : re(std::move(r)), im(std::move(i)) {}
  explicit MPComplex(MPReal r) : re(std::move(r)), im(re.precision()) {}

  mpfr_prec_t precision() const { return std::max(re.precision(), im.precision()); }

  friend MPComplex operator+(const MPComplex& a, const MPComplex& b) { return {a.re + b.re, a.im + b.im}; }
  friend MPComplex operator-(const MPComplex& a, const MPComplex& b) { return {a.re - b.re, a.im - b.im}; }
  friend MPComplex operator*(const MPComplex& a, const MPComplex& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend MPComplex operator*(const MPComplex& a, const MPReal& s) { return {a.re * s, a.im * s}; }
  friend MPComplex operator*(const MPReal& s, const MPComplex& a) { return a * s; }
  friend MPComplex operator/(const MPComplex& a, const MPReal& s) { return {a.re / s, a.im / s}; }
  friend MPComplex operator/(const MPComplex& a, const MPComplex& b) {
    MPReal den = b.re * b.re + b.im * b.im;
    return {(a.re * b.re + a.im * b.im) / den, (a.im * b.re - a.re * b.im) / den};
  }
  MPComplex operator-() const { return {-re, -im}; }
  MPComplex& operator+=(const MPComplex& b) { return *this = *this + b; }
  MPComplex& operator-=(const MPComplex& b) { return *this = *this - b; }
  MPComplex& operator*=(const MPComplex& b) { return *this = *this * b; }
};

inline MPReal abs(const MPComplex& z) {
  MPReal r(z.precision());
  mpfr_hypot(r.get(), z.re.get(), z.im.get(), MPFR_RNDN);
  return r;
}

/// e^{i theta}
inline MPComplex expi(const MPReal& theta) { return {cos(theta), sin(theta)}; }

}  // namespace rama
