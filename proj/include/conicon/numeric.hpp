#pragma once

// Arbitrary-precision real and complex scalars on top of MPFR.
//
// Every value carries its own binary precision. Binary operations round to
// the smaller precision of the two operands.

#include <mpfr.h>
#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <climits>
#include <compare>
#include <cstdlib>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>

#include "conicon/errors.hpp"

namespace conicon {

/// Binary precision of significands. Never below 64 bits.
class Precision {
 public:
  static constexpr unsigned kMinBits = 64;

  constexpr explicit Precision(unsigned bits) : bits_(bits) {
    if (bits < kMinBits) throw InvalidPrecision("precision must be at least 64 bits");
  }

  constexpr unsigned bits() const noexcept { return bits_; }

  /// Number of decimal digits that round-trip a value of this precision,
  /// plus guard digits.
  unsigned decimal_digits() const noexcept {
    return static_cast<unsigned>(std::ceil(bits_ * 0.30102999566398120)) + 5;
  }

  friend constexpr auto operator<=>(Precision, Precision) = default;

 private:
  unsigned bits_;
};

inline Precision min(Precision a, Precision b) { return a.bits() < b.bits() ? a : b; }

class BigReal {
 public:
  BigReal() : BigReal(Precision{Precision::kMinBits}) {}

  explicit BigReal(Precision p) {
    mpfr_init2(v_, p.bits());
    mpfr_set_zero(v_, 1);
  }

  BigReal(long n, Precision p) {
    mpfr_init2(v_, p.bits());
    mpfr_set_si(v_, n, MPFR_RNDN);
  }

  BigReal(const mpq_class& q, Precision p) {
    mpfr_init2(v_, p.bits());
    mpfr_set_q(v_, q.get_mpq_t(), MPFR_RNDN);
  }

  /// Parses a decimal (or scientific) literal. Throws std::invalid_argument.
  BigReal(std::string_view text, Precision p) {
    mpfr_init2(v_, p.bits());
    std::string s(text);
    if (s.empty() || mpfr_set_str(v_, s.c_str(), 10, MPFR_RNDN) != 0) {
      mpfr_clear(v_);
      throw std::invalid_argument("not a decimal number: '" + s + "'");
    }
  }

  BigReal(const BigReal& o) {
    mpfr_init2(v_, mpfr_get_prec(o.v_));
    mpfr_set(v_, o.v_, MPFR_RNDN);
  }

  BigReal(BigReal&& o) noexcept {
    mpfr_init2(v_, MPFR_PREC_MIN);
    mpfr_swap(v_, o.v_);
  }

  BigReal& operator=(const BigReal& o) {
    if (this != &o) {
      mpfr_set_prec(v_, mpfr_get_prec(o.v_));
      mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    return *this;
  }

  BigReal& operator=(BigReal&& o) noexcept {
    mpfr_swap(v_, o.v_);
    return *this;
  }

  ~BigReal() { mpfr_clear(v_); }

  Precision precision() const { return Precision{static_cast<unsigned>(mpfr_get_prec(v_))}; }

  /// Copy rounded (or zero-extended) to another precision.
  BigReal with_precision(Precision p) const {
    BigReal r(p);
    mpfr_set(r.v_, v_, MPFR_RNDN);
    return r;
  }

  mpfr_srcptr get() const noexcept { return v_; }
  mpfr_ptr get() noexcept { return v_; }

  int sign() const noexcept { return mpfr_sgn(v_); }
  bool is_zero() const noexcept { return mpfr_zero_p(v_) != 0; }
  bool is_finite() const noexcept { return mpfr_number_p(v_) != 0; }
  double to_double() const noexcept { return mpfr_get_d(v_, MPFR_RNDN); }
  long exponent() const noexcept { return is_zero() ? LONG_MIN : mpfr_get_exp(v_); }

  /// Scientific notation with `digits` significant digits.
  std::string to_string(unsigned digits) const {
    char* buf = nullptr;
    mpfr_asprintf(&buf, "%.*Re", static_cast<int>(digits > 0 ? digits - 1 : 0), v_);
    std::string out(buf);
    mpfr_free_str(buf);
    return out;
  }

  /// Round-trip decimal string at this value's own precision.
  std::string to_string() const { return to_string(precision().decimal_digits()); }

  BigReal operator-() const {
    BigReal r(precision());
    mpfr_neg(r.v_, v_, MPFR_RNDN);
    return r;
  }

  friend BigReal operator+(const BigReal& a, const BigReal& b) { return binary(a, b, mpfr_add); }
  friend BigReal operator-(const BigReal& a, const BigReal& b) { return binary(a, b, mpfr_sub); }
  friend BigReal operator*(const BigReal& a, const BigReal& b) { return binary(a, b, mpfr_mul); }
  friend BigReal operator/(const BigReal& a, const BigReal& b) { return binary(a, b, mpfr_div); }

  friend BigReal operator+(const BigReal& a, long b) {
    BigReal r(a.precision());
    mpfr_add_si(r.v_, a.v_, b, MPFR_RNDN);
    return r;
  }
  friend BigReal operator-(const BigReal& a, long b) {
    BigReal r(a.precision());
    mpfr_sub_si(r.v_, a.v_, b, MPFR_RNDN);
    return r;
  }
  friend BigReal operator-(long a, const BigReal& b) {
    BigReal r(b.precision());
    mpfr_si_sub(r.v_, a, b.v_, MPFR_RNDN);
    return r;
  }
  friend BigReal operator*(const BigReal& a, long b) {
    BigReal r(a.precision());
    mpfr_mul_si(r.v_, a.v_, b, MPFR_RNDN);
    return r;
  }
  friend BigReal operator*(long a, const BigReal& b) { return b * a; }
  friend BigReal operator/(const BigReal& a, long b) {
    BigReal r(a.precision());
    mpfr_div_si(r.v_, a.v_, b, MPFR_RNDN);
    return r;
  }

  BigReal& operator+=(const BigReal& o) { return *this = *this + o; }
  BigReal& operator-=(const BigReal& o) { return *this = *this - o; }
  BigReal& operator*=(const BigReal& o) { return *this = *this * o; }
  BigReal& operator/=(const BigReal& o) { return *this = *this / o; }

  friend bool operator==(const BigReal& a, const BigReal& b) { return mpfr_equal_p(a.v_, b.v_) != 0; }
  friend std::partial_ordering operator<=>(const BigReal& a, const BigReal& b) {
    if (mpfr_unordered_p(a.v_, b.v_)) return std::partial_ordering::unordered;
    int c = mpfr_cmp(a.v_, b.v_);
    return c < 0 ? std::partial_ordering::less
                 : (c > 0 ? std::partial_ordering::greater : std::partial_ordering::equivalent);
  }
  friend bool operator==(const BigReal& a, long b) { return mpfr_cmp_si(a.v_, b) == 0; }
  friend std::partial_ordering operator<=>(const BigReal& a, long b) {
    int c = mpfr_cmp_si(a.v_, b);
    return c < 0 ? std::partial_ordering::less
                 : (c > 0 ? std::partial_ordering::greater : std::partial_ordering::equivalent);
  }

  friend std::ostream& operator<<(std::ostream& os, const BigReal& x) {
    return os << x.to_string(std::min(x.precision().decimal_digits(), 40u));
  }

  template <typename F>
  static BigReal unary(const BigReal& a, F f) {
    BigReal r(a.precision());
    f(r.v_, a.v_, MPFR_RNDN);
    return r;
  }

 private:
  template <typename F>
  static BigReal binary(const BigReal& a, const BigReal& b, F f) {
    BigReal r(min(a.precision(), b.precision()));
    f(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
  }

  mpfr_t v_;
};

inline BigReal sqrt(const BigReal& x) { return BigReal::unary(x, mpfr_sqrt); }
inline BigReal cbrt(const BigReal& x) { return BigReal::unary(x, mpfr_cbrt); }
inline BigReal abs(const BigReal& x) { return BigReal::unary(x, mpfr_abs); }
inline BigReal sin(const BigReal& x) { return BigReal::unary(x, mpfr_sin); }
inline BigReal cos(const BigReal& x) { return BigReal::unary(x, mpfr_cos); }
inline BigReal acos(const BigReal& x) { return BigReal::unary(x, mpfr_acos); }
inline BigReal cosh(const BigReal& x) { return BigReal::unary(x, mpfr_cosh); }
inline BigReal sinh(const BigReal& x) { return BigReal::unary(x, mpfr_sinh); }

inline BigReal atan2(const BigReal& y, const BigReal& x) {
  BigReal r(min(y.precision(), x.precision()));
  mpfr_atan2(r.get(), y.get(), x.get(), MPFR_RNDN);
  return r;
}

inline BigReal hypot(const BigReal& x, const BigReal& y) {
  BigReal r(min(y.precision(), x.precision()));
  mpfr_hypot(r.get(), x.get(), y.get(), MPFR_RNDN);
  return r;
}

/// x · 2^e, exact.
inline BigReal ldexp(const BigReal& x, long e) {
  BigReal r(x.precision());
  mpfr_mul_2si(r.get(), x.get(), e, MPFR_RNDN);
  return r;
}

inline BigReal pi(Precision p) {
  BigReal r(p);
  mpfr_const_pi(r.get(), MPFR_RNDN);
  return r;
}

/// 2^e at precision p.
inline BigReal pow2(double e, Precision p) {
  BigReal r(p);
  mpfr_set_d(r.get(), e, MPFR_RNDN);
  mpfr_exp2(r.get(), r.get(), MPFR_RNDN);
  return r;
}

/// Global tolerance τ(bits) = 2^(−bits/2).
inline BigReal tau(Precision p) { return pow2(-static_cast<double>(p.bits()) / 2.0, p); }

inline const BigReal& max(const BigReal& a, const BigReal& b) { return a < b ? b : a; }
inline const BigReal& min(const BigReal& a, const BigReal& b) { return b < a ? b : a; }

class BigComplex {
 public:
  BigComplex() = default;
  explicit BigComplex(Precision p) : re_(p), im_(p) {}
  BigComplex(BigReal re, BigReal im) : re_(std::move(re)), im_(std::move(im)) {}
  explicit BigComplex(BigReal re) : re_(std::move(re)), im_(re_.precision()) {}

  const BigReal& re() const noexcept { return re_; }
  const BigReal& im() const noexcept { return im_; }

  Precision precision() const { return min(re_.precision(), im_.precision()); }
  BigComplex with_precision(Precision p) const { return {re_.with_precision(p), im_.with_precision(p)}; }

  bool is_zero() const noexcept { return re_.is_zero() && im_.is_zero(); }
  bool is_finite() const noexcept { return re_.is_finite() && im_.is_finite(); }

  BigComplex conj() const { return {re_, -im_}; }
  BigReal norm() const { return re_ * re_ + im_ * im_; }
  BigReal abs() const { return hypot(re_, im_); }

  /// Argument in (−π, π]; a negative real with a zero imaginary part of
  /// either sign maps to +π.
  BigReal arg() const {
    if (im_.is_zero()) {
      if (re_.sign() < 0) return pi(precision());
      return BigReal(precision());
    }
    return atan2(im_, re_);
  }

  /// Principal square root: arg mapped to arg/2 ∈ (−π/2, π/2].
  BigComplex sqrt() const {
    Precision p = precision();
    if (is_zero()) return BigComplex(p);
    BigReal m = abs();
    BigReal re = conicon::sqrt((m + abs_nonneg(re_)) / 2);
    // Stable form: the larger component is taken from the half-sum, the other by division.
    if (re_.sign() >= 0) {
      BigReal im = im_ / (re * 2);
      return {re, im};
    }
    BigReal im_mag = re;  // sqrt((m + |re|)/2)
    BigReal re_part = conicon::abs(im_) / (im_mag * 2);
    if (im_.sign() < 0) im_mag = -im_mag;
    return {re_part, im_mag};
  }

  /// Principal cube root: arg mapped to arg/3 ∈ (−π/3, π/3].
  BigComplex cbrt() const {
    Precision p = precision();
    if (is_zero()) return BigComplex(p);
    if (im_.is_zero() && re_.sign() > 0) return {conicon::cbrt(re_), BigReal(p)};
    BigReal r = conicon::cbrt(abs());
    BigReal t = arg() / 3;
    return {r * cos(t), r * sin(t)};
  }

  BigComplex operator-() const { return {-re_, -im_}; }

  friend BigComplex operator+(const BigComplex& a, const BigComplex& b) { return {a.re_ + b.re_, a.im_ + b.im_}; }
  friend BigComplex operator-(const BigComplex& a, const BigComplex& b) { return {a.re_ - b.re_, a.im_ - b.im_}; }
  friend BigComplex operator*(const BigComplex& a, const BigComplex& b) {
    return {a.re_ * b.re_ - a.im_ * b.im_, a.re_ * b.im_ + a.im_ * b.re_};
  }
  friend BigComplex operator/(const BigComplex& a, const BigComplex& b) {
    if (b.is_zero()) throw DivisionByZero("division by zero");
    if (b.im_.is_zero()) return {a.re_ / b.re_, a.im_ / b.re_};
    // Smith's algorithm.
    if (conicon::abs(b.re_) >= conicon::abs(b.im_)) {
      BigReal ratio = b.im_ / b.re_;
      BigReal den = b.re_ + b.im_ * ratio;
      return {(a.re_ + a.im_ * ratio) / den, (a.im_ - a.re_ * ratio) / den};
    }
    BigReal ratio = b.re_ / b.im_;
    BigReal den = b.re_ * ratio + b.im_;
    return {(a.re_ * ratio + a.im_) / den, (a.im_ * ratio - a.re_) / den};
  }
  friend BigComplex operator*(const BigComplex& a, const BigReal& s) { return {a.re_ * s, a.im_ * s}; }
  friend BigComplex operator*(const BigReal& s, const BigComplex& a) { return a * s; }
  friend BigComplex operator/(const BigComplex& a, const BigReal& s) { return {a.re_ / s, a.im_ / s}; }
  friend BigComplex operator*(const BigComplex& a, long s) { return {a.re_ * s, a.im_ * s}; }
  friend BigComplex operator/(const BigComplex& a, long s) { return {a.re_ / s, a.im_ / s}; }

  BigComplex& operator+=(const BigComplex& o) { return *this = *this + o; }
  BigComplex& operator-=(const BigComplex& o) { return *this = *this - o; }
  BigComplex& operator*=(const BigComplex& o) { return *this = *this * o; }

  friend bool operator==(const BigComplex& a, const BigComplex& b) { return a.re_ == b.re_ && a.im_ == b.im_; }

  friend std::ostream& operator<<(std::ostream& os, const BigComplex& z) {
    return os << "(" << z.re_ << ", " << z.im_ << ")";
  }

 private:
  static BigReal abs_nonneg(const BigReal& x) { return conicon::abs(x); }

  BigReal re_;
  BigReal im_;
};

inline BigReal distance(const BigComplex& a, const BigComplex& b) { return (a - b).abs(); }

/// Orders points by real part, then imaginary part.
inline bool lexicographic_less(const BigComplex& a, const BigComplex& b) {
  if (a.re() < b.re()) return true;
  if (b.re() < a.re()) return false;
  return a.im() < b.im();
}

}  // namespace conicon
