#pragma once

// Midpoint-radius interval arithmetic on top of MPFR.
//
// A RealBall [m +- r] stands for every real x with |x - m| <= r. Each
// operation returns a ball containing f(x) for every x in the inputs; the
// radius absorbs both input uncertainty and the rounding of the midpoint
// (MPFR rounds correctly, so one ulp of the midpoint bounds that error).

#include <gmpxx.h>
#include <mpfr.h>

#include <string>

namespace nw {

/// Owning wrapper for mpfr_t.
class BigFloat {
 public:
  explicit BigFloat(mpfr_prec_t prec = 64);
  BigFloat(const BigFloat& other);
  BigFloat(BigFloat&& other) noexcept;
  BigFloat& operator=(const BigFloat& other);
  BigFloat& operator=(BigFloat&& other) noexcept;
  ~BigFloat();

  mpfr_ptr get() { return value_; }
  mpfr_srcptr get() const { return value_; }
  mpfr_prec_t prec() const { return mpfr_get_prec(value_); }

  /// Decimal in scientific notation with `digits` significant digits.
  std::string to_string(int digits, mpfr_rnd_t rnd = MPFR_RNDN) const;
  double to_double() const { return mpfr_get_d(value_, MPFR_RNDN); }

 private:
  mpfr_t value_;
};

constexpr mpfr_prec_t kRadiusPrec = 64;

class RealBall {
 public:
  explicit RealBall(mpfr_prec_t prec = 128);
  RealBall(long value, mpfr_prec_t prec);
  RealBall(const mpz_class& value, mpfr_prec_t prec);
  RealBall(const mpq_class& value, mpfr_prec_t prec);
  /// Ball with the given midpoint and radius (radius rounded up).
  RealBall(const BigFloat& mid, const BigFloat& rad);

  static RealBall pi(mpfr_prec_t prec);
  static RealBall log2(mpfr_prec_t prec);

  mpfr_prec_t prec() const { return mid_.prec(); }
  const BigFloat& mid() const { return mid_; }
  const BigFloat& rad() const { return rad_; }

  /// Rigorous bounds at the midpoint's precision, rounded outward.
  BigFloat lower() const;
  BigFloat upper() const;
  /// Upper bound for |x| and lower bound for |x| (0 if the ball meets 0).
  BigFloat abs_upper() const;
  BigFloat abs_lower() const;

  bool contains_zero() const;
  bool contains(const mpq_class& x) const;
  bool is_positive() const;  // lower() > 0
  bool is_negative() const;  // upper() < 0
  /// True when every point of *this is <= every point of other.
  bool certainly_le(const RealBall& other) const;
  bool overlaps(const RealBall& other) const;

  /// Adds e >= 0 to the radius.
  void add_error(const BigFloat& e);
  void add_error_2exp(long exponent);  // adds 2^exponent
  RealBall with_prec(mpfr_prec_t prec) const;

  friend RealBall operator-(const RealBall& a);
  friend RealBall operator+(const RealBall& a, const RealBall& b);
  friend RealBall operator-(const RealBall& a, const RealBall& b);
  friend RealBall operator*(const RealBall& a, const RealBall& b);
  friend RealBall operator/(const RealBall& a, const RealBall& b);

  std::string mid_string() const;
  std::string rad_string() const;

 private:
  BigFloat mid_, rad_;
  friend class BallOps;
};

RealBall sqr(const RealBall& a);
RealBall pow(const RealBall& a, unsigned long n);
RealBall sqrt(const RealBall& a);
RealBall exp(const RealBall& a);
RealBall log(const RealBall& a);
RealBall sin(const RealBall& a);
RealBall cos(const RealBall& a);
RealBall abs(const RealBall& a);
/// Smallest ball containing both.
RealBall hull(const RealBall& a, const RealBall& b);
RealBall mul_2si(const RealBall& a, long e);

class ComplexBall {
 public:
  explicit ComplexBall(mpfr_prec_t prec = 128) : re_(prec), im_(prec) {}
  ComplexBall(RealBall re, RealBall im) : re_(std::move(re)), im_(std::move(im)) {}
  explicit ComplexBall(const RealBall& re) : re_(re), im_(re.prec()) {}

  static ComplexBall from_rationals(const mpq_class& re, const mpq_class& im, mpfr_prec_t prec);
  static ComplexBall i(mpfr_prec_t prec);

  const RealBall& re() const { return re_; }
  const RealBall& im() const { return im_; }
  RealBall& re() { return re_; }
  RealBall& im() { return im_; }
  mpfr_prec_t prec() const { return re_.prec(); }

  /// Upper bound for |z - mid| (sum of the component radii).
  BigFloat radius() const;
  BigFloat abs_upper() const;
  BigFloat abs_lower() const;
  bool contains_zero() const { return re_.contains_zero() && im_.contains_zero(); }
  bool contains(const mpq_class& re, const mpq_class& im) const { return re_.contains(re) && im_.contains(im); }
  bool overlaps(const ComplexBall& o) const { return re_.overlaps(o.re_) && im_.overlaps(o.im_); }

  friend ComplexBall operator-(const ComplexBall& a) { return {-a.re_, -a.im_}; }
  friend ComplexBall operator+(const ComplexBall& a, const ComplexBall& b) { return {a.re_ + b.re_, a.im_ + b.im_}; }
  friend ComplexBall operator-(const ComplexBall& a, const ComplexBall& b) { return {a.re_ - b.re_, a.im_ - b.im_}; }
  friend ComplexBall operator*(const ComplexBall& a, const ComplexBall& b);
  friend ComplexBall operator*(const RealBall& a, const ComplexBall& b) { return {a * b.re_, a * b.im_}; }
  friend ComplexBall operator*(const ComplexBall& a, const RealBall& b) { return {a.re_ * b, a.im_ * b}; }
  friend ComplexBall operator/(const ComplexBall& a, const ComplexBall& b);
  friend ComplexBall operator/(const ComplexBall& a, const RealBall& b) { return {a.re_ / b, a.im_ / b}; }

 private:
  RealBall re_, im_;
};

ComplexBall conj(const ComplexBall& z);
ComplexBall sqr(const ComplexBall& z);
ComplexBall pow(const ComplexBall& z, unsigned long n);
ComplexBall exp(const ComplexBall& z);
/// Principal square root (branch cut on the negative real axis).
ComplexBall sqrt(const ComplexBall& z);
/// |z| as a real ball.
RealBall abs(const ComplexBall& z);
ComplexBall mul_2si(const ComplexBall& z, long e);
/// exp(2 pi i tau).
ComplexBall q_from_tau(const ComplexBall& tau);

}  // namespace nw
