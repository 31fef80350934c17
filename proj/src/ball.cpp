#include "nw/ball.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "nw/error.hpp"

namespace nw {

BigFloat::BigFloat(mpfr_prec_t prec) {
  mpfr_init2(value_, prec);
  mpfr_set_zero(value_, 1);
}

BigFloat::BigFloat(const BigFloat& other) {
  mpfr_init2(value_, other.prec());
  mpfr_set(value_, other.value_, MPFR_RNDN);
}

BigFloat::BigFloat(BigFloat&& other) noexcept {
  mpfr_init2(value_, MPFR_PREC_MIN);
  mpfr_swap(value_, other.value_);
}

BigFloat& BigFloat::operator=(const BigFloat& other) {
  if (this != &other) {
    mpfr_set_prec(value_, other.prec());
    mpfr_set(value_, other.value_, MPFR_RNDN);
  }
  return *this;
}

BigFloat& BigFloat::operator=(BigFloat&& other) noexcept {
  mpfr_swap(value_, other.value_);
  return *this;
}

BigFloat::~BigFloat() { mpfr_clear(value_); }

std::string BigFloat::to_string(int digits, mpfr_rnd_t rnd) const {
  char* buf = nullptr;
  mpfr_asprintf(&buf, "%.*R*e", std::max(digits - 1, 0), rnd, value_);
  std::string out(buf);
  mpfr_free_str(buf);
  return out;
}

namespace {

// Adds one ulp of `mid` to `rad` when the operation producing `mid` was inexact.
void account_rounding(BigFloat& rad, const BigFloat& mid, int ternary) {
  if (ternary == 0) return;
  BigFloat ulp(kRadiusPrec);
  if (mpfr_zero_p(mid.get()))
    mpfr_set_ui_2exp(ulp.get(), 1, mpfr_get_emin(), MPFR_RNDU);
  else
    mpfr_set_ui_2exp(ulp.get(), 1, mpfr_get_exp(mid.get()) - mid.prec(), MPFR_RNDU);
  mpfr_add(rad.get(), rad.get(), ulp.get(), MPFR_RNDU);
}

BigFloat rad_abs_up(const BigFloat& x) {
  BigFloat r(kRadiusPrec);
  mpfr_abs(r.get(), x.get(), MPFR_RNDU);
  return r;
}

mpfr_prec_t pmax(const RealBall& a, const RealBall& b) { return std::max(a.prec(), b.prec()); }

}  // namespace

class BallOps {
 public:
  static BigFloat& mid(RealBall& b) { return b.mid_; }
  static BigFloat& rad(RealBall& b) { return b.rad_; }
};

RealBall::RealBall(mpfr_prec_t prec) : mid_(prec), rad_(kRadiusPrec) {}

RealBall::RealBall(long value, mpfr_prec_t prec) : mid_(prec), rad_(kRadiusPrec) {
  account_rounding(rad_, mid_, mpfr_set_si(mid_.get(), value, MPFR_RNDN));
}

RealBall::RealBall(const mpz_class& value, mpfr_prec_t prec) : mid_(prec), rad_(kRadiusPrec) {
  account_rounding(rad_, mid_, mpfr_set_z(mid_.get(), value.get_mpz_t(), MPFR_RNDN));
}

RealBall::RealBall(const mpq_class& value, mpfr_prec_t prec) : mid_(prec), rad_(kRadiusPrec) {
  account_rounding(rad_, mid_, mpfr_set_q(mid_.get(), value.get_mpq_t(), MPFR_RNDN));
}

RealBall::RealBall(const BigFloat& mid, const BigFloat& rad) : mid_(mid), rad_(kRadiusPrec) {
  if (mpfr_sgn(rad.get()) < 0) fail("InvalidArgument", "negative ball radius");
  mpfr_set(rad_.get(), rad.get(), MPFR_RNDU);
}

RealBall RealBall::pi(mpfr_prec_t prec) {
  RealBall b(prec);
  account_rounding(b.rad_, b.mid_, mpfr_const_pi(b.mid_.get(), MPFR_RNDN));
  return b;
}

RealBall RealBall::log2(mpfr_prec_t prec) {
  RealBall b(prec);
  account_rounding(b.rad_, b.mid_, mpfr_const_log2(b.mid_.get(), MPFR_RNDN));
  return b;
}

BigFloat RealBall::lower() const {
  BigFloat lo(prec());
  mpfr_sub(lo.get(), mid_.get(), rad_.get(), MPFR_RNDD);
  return lo;
}

BigFloat RealBall::upper() const {
  BigFloat hi(prec());
  mpfr_add(hi.get(), mid_.get(), rad_.get(), MPFR_RNDU);
  return hi;
}

BigFloat RealBall::abs_upper() const {
  BigFloat a(prec());
  mpfr_abs(a.get(), mid_.get(), MPFR_RNDU);
  mpfr_add(a.get(), a.get(), rad_.get(), MPFR_RNDU);
  return a;
}

BigFloat RealBall::abs_lower() const {
  BigFloat a(prec());
  if (contains_zero()) return a;
  mpfr_abs(a.get(), mid_.get(), MPFR_RNDD);
  mpfr_sub(a.get(), a.get(), rad_.get(), MPFR_RNDD);
  return a;
}

bool RealBall::contains_zero() const {
  BigFloat a(prec());
  mpfr_abs(a.get(), mid_.get(), MPFR_RNDN);
  return mpfr_lessequal_p(a.get(), rad_.get());
}

bool RealBall::contains(const mpq_class& x) const {
  return mpfr_cmp_q(lower().get(), x.get_mpq_t()) <= 0 && mpfr_cmp_q(upper().get(), x.get_mpq_t()) >= 0;
}

bool RealBall::is_positive() const { return mpfr_sgn(lower().get()) > 0; }
bool RealBall::is_negative() const { return mpfr_sgn(upper().get()) < 0; }

bool RealBall::certainly_le(const RealBall& other) const {
  return mpfr_lessequal_p(upper().get(), other.lower().get());
}

bool RealBall::overlaps(const RealBall& other) const {
  return mpfr_lessequal_p(lower().get(), other.upper().get()) && mpfr_lessequal_p(other.lower().get(), upper().get());
}

void RealBall::add_error(const BigFloat& e) {
  if (mpfr_sgn(e.get()) < 0) fail("InvalidArgument", "negative error term");
  mpfr_add(rad_.get(), rad_.get(), e.get(), MPFR_RNDU);
}

void RealBall::add_error_2exp(long exponent) {
  BigFloat e(kRadiusPrec);
  mpfr_set_ui_2exp(e.get(), 1, exponent, MPFR_RNDU);
  add_error(e);
}

RealBall RealBall::with_prec(mpfr_prec_t p) const {
  RealBall b(p);
  mpfr_set(b.rad_.get(), rad_.get(), MPFR_RNDU);
  account_rounding(b.rad_, b.mid_, mpfr_set(b.mid_.get(), mid_.get(), MPFR_RNDN));
  return b;
}

RealBall operator-(const RealBall& a) {
  RealBall b = a;
  mpfr_neg(BallOps::mid(b).get(), a.mid().get(), MPFR_RNDN);
  return b;
}

RealBall operator+(const RealBall& a, const RealBall& b) {
  RealBall c(pmax(a, b));
  auto& m = BallOps::mid(c);
  auto& r = BallOps::rad(c);
  mpfr_add(r.get(), a.rad().get(), b.rad().get(), MPFR_RNDU);
  account_rounding(r, m, mpfr_add(m.get(), a.mid().get(), b.mid().get(), MPFR_RNDN));
  return c;
}

RealBall operator-(const RealBall& a, const RealBall& b) {
  RealBall c(pmax(a, b));
  auto& m = BallOps::mid(c);
  auto& r = BallOps::rad(c);
  mpfr_add(r.get(), a.rad().get(), b.rad().get(), MPFR_RNDU);
  account_rounding(r, m, mpfr_sub(m.get(), a.mid().get(), b.mid().get(), MPFR_RNDN));
  return c;
}

RealBall operator*(const RealBall& a, const RealBall& b) {
  RealBall c(pmax(a, b));
  auto& m = BallOps::mid(c);
  auto& r = BallOps::rad(c);
  // |a| rb + |b| ra + ra rb
  BigFloat t(kRadiusPrec);
  mpfr_mul(r.get(), rad_abs_up(a.mid()).get(), b.rad().get(), MPFR_RNDU);
  mpfr_mul(t.get(), rad_abs_up(b.mid()).get(), a.rad().get(), MPFR_RNDU);
  mpfr_add(r.get(), r.get(), t.get(), MPFR_RNDU);
  mpfr_mul(t.get(), a.rad().get(), b.rad().get(), MPFR_RNDU);
  mpfr_add(r.get(), r.get(), t.get(), MPFR_RNDU);
  account_rounding(r, m, mpfr_mul(m.get(), a.mid().get(), b.mid().get(), MPFR_RNDN));
  return c;
}

RealBall operator/(const RealBall& a, const RealBall& b) {
  if (b.contains_zero()) fail("BallContainsZero", "division by a ball containing zero");
  RealBall c(pmax(a, b));
  auto& m = BallOps::mid(c);
  auto& r = BallOps::rad(c);
  // (ra + |am / bm| rb) / (|bm| - rb)
  BigFloat q(kRadiusPrec), den(kRadiusPrec);
  mpfr_abs(den.get(), b.mid().get(), MPFR_RNDD);
  mpfr_prec_round(den.get(), kRadiusPrec, MPFR_RNDD);
  BigFloat am = rad_abs_up(a.mid());
  BigFloat bm(kRadiusPrec);
  mpfr_abs(bm.get(), b.mid().get(), MPFR_RNDD);
  mpfr_div(q.get(), am.get(), bm.get(), MPFR_RNDU);
  mpfr_mul(q.get(), q.get(), b.rad().get(), MPFR_RNDU);
  mpfr_add(q.get(), q.get(), a.rad().get(), MPFR_RNDU);
  mpfr_sub(den.get(), bm.get(), b.rad().get(), MPFR_RNDD);
  mpfr_div(r.get(), q.get(), den.get(), MPFR_RNDU);
  account_rounding(r, m, mpfr_div(m.get(), a.mid().get(), b.mid().get(), MPFR_RNDN));
  return c;
}

RealBall sqr(const RealBall& a) {
  RealBall c(a.prec());
  auto& m = BallOps::mid(c);
  auto& r = BallOps::rad(c);
  BigFloat t(kRadiusPrec);
  mpfr_mul(r.get(), rad_abs_up(a.mid()).get(), a.rad().get(), MPFR_RNDU);
  mpfr_mul_2ui(r.get(), r.get(), 1, MPFR_RNDU);
  mpfr_sqr(t.get(), a.rad().get(), MPFR_RNDU);
  mpfr_add(r.get(), r.get(), t.get(), MPFR_RNDU);
  account_rounding(r, m, mpfr_sqr(m.get(), a.mid().get(), MPFR_RNDN));
  return c;
}

RealBall pow(const RealBall& a, unsigned long n) {
  RealBall result(1, a.prec()), base = a;
  while (n) {
    if (n & 1) result = result * base;
    n >>= 1;
    if (n) base = sqr(base);
  }
  return result;
}

RealBall sqrt(const RealBall& a) {
  const BigFloat lo = a.lower();
  if (mpfr_sgn(a.upper().get()) < 0) fail("BallContainsZero", "square root of a negative ball");
  RealBall c(a.prec());
  auto& m = BallOps::mid(c);
  auto& r = BallOps::rad(c);
  if (mpfr_sgn(lo.get()) <= 0) {
    // [0, sqrt(hi)]
    BigFloat h(a.prec());
    mpfr_sqrt(h.get(), a.upper().get(), MPFR_RNDU);
    mpfr_div_2ui(m.get(), h.get(), 1, MPFR_RNDN);
    mpfr_set(r.get(), m.get(), MPFR_RNDU);
    account_rounding(r, m, 1);
    return c;
  }
  // |sqrt(x) - sqrt(m)| <= r / (sqrt(lo) + sqrt(m)) <= r / sqrt(lo)
  BigFloat s(kRadiusPrec);
  mpfr_sqrt(s.get(), lo.get(), MPFR_RNDD);
  mpfr_div(r.get(), a.rad().get(), s.get(), MPFR_RNDU);
  account_rounding(r, m, mpfr_sqrt(m.get(), a.mid().get(), MPFR_RNDN));
  return c;
}

RealBall exp(const RealBall& a) {
  RealBall c(a.prec());
  auto& m = BallOps::mid(c);
  auto& r = BallOps::rad(c);
  // |e^x - e^m| <= e^(m + r) r
  BigFloat t(kRadiusPrec);
  mpfr_add(t.get(), a.mid().get(), a.rad().get(), MPFR_RNDU);
  mpfr_exp(t.get(), t.get(), MPFR_RNDU);
  mpfr_mul(r.get(), t.get(), a.rad().get(), MPFR_RNDU);
  account_rounding(r, m, mpfr_exp(m.get(), a.mid().get(), MPFR_RNDN));
  return c;
}

RealBall log(const RealBall& a) {
  const BigFloat lo = a.lower();
  if (mpfr_sgn(lo.get()) <= 0) fail("BallContainsZero", "logarithm of a ball meeting (-inf, 0]");
  RealBall c(a.prec());
  auto& m = BallOps::mid(c);
  auto& r = BallOps::rad(c);
  BigFloat l(kRadiusPrec);
  mpfr_set(l.get(), lo.get(), MPFR_RNDD);
  mpfr_div(r.get(), a.rad().get(), l.get(), MPFR_RNDU);
  account_rounding(r, m, mpfr_log(m.get(), a.mid().get(), MPFR_RNDN));
  return c;
}

RealBall sin(const RealBall& a) {
  RealBall c(a.prec());
  auto& m = BallOps::mid(c);
  auto& r = BallOps::rad(c);
  mpfr_set(r.get(), a.rad().get(), MPFR_RNDU);
  account_rounding(r, m, mpfr_sin(m.get(), a.mid().get(), MPFR_RNDN));
  return c;
}

RealBall cos(const RealBall& a) {
  RealBall c(a.prec());
  auto& m = BallOps::mid(c);
  auto& r = BallOps::rad(c);
  mpfr_set(r.get(), a.rad().get(), MPFR_RNDU);
  account_rounding(r, m, mpfr_cos(m.get(), a.mid().get(), MPFR_RNDN));
  return c;
}

RealBall abs(const RealBall& a) {
  RealBall c = a;
  mpfr_abs(BallOps::mid(c).get(), a.mid().get(), MPFR_RNDN);
  return c;
}

RealBall hull(const RealBall& a, const RealBall& b) {
  const mpfr_prec_t p = pmax(a, b);
  BigFloat lo(p), hi(p);
  mpfr_min(lo.get(), a.lower().get(), b.lower().get(), MPFR_RNDD);
  mpfr_max(hi.get(), a.upper().get(), b.upper().get(), MPFR_RNDU);
  RealBall c(p);
  auto& m = BallOps::mid(c);
  auto& r = BallOps::rad(c);
  mpfr_add(m.get(), lo.get(), hi.get(), MPFR_RNDN);
  mpfr_div_2ui(m.get(), m.get(), 1, MPFR_RNDN);
  BigFloat t(kRadiusPrec);
  mpfr_sub(r.get(), hi.get(), m.get(), MPFR_RNDU);
  mpfr_sub(t.get(), m.get(), lo.get(), MPFR_RNDU);
  mpfr_max(r.get(), r.get(), t.get(), MPFR_RNDU);
  return c;
}

RealBall mul_2si(const RealBall& a, long e) {
  RealBall c = a;
  mpfr_mul_2si(BallOps::mid(c).get(), a.mid().get(), e, MPFR_RNDN);
  mpfr_mul_2si(BallOps::rad(c).get(), a.rad().get(), e, MPFR_RNDU);
  return c;
}

std::string RealBall::mid_string() const {
  const int digits = static_cast<int>(std::ceil(static_cast<double>(prec()) * 0.30103)) + 2;
  return mid_.to_string(digits, MPFR_RNDN);
}

std::string RealBall::rad_string() const { return rad_.to_string(6, MPFR_RNDU); }

// ---------------------------------------------------------------------------

ComplexBall ComplexBall::from_rationals(const mpq_class& re, const mpq_class& im, mpfr_prec_t prec) {
  return {RealBall(re, prec), RealBall(im, prec)};
}

ComplexBall ComplexBall::i(mpfr_prec_t prec) { return {RealBall(prec), RealBall(1, prec)}; }

BigFloat ComplexBall::radius() const {
  BigFloat r(kRadiusPrec);
  mpfr_add(r.get(), re_.rad().get(), im_.rad().get(), MPFR_RNDU);
  return r;
}

BigFloat ComplexBall::abs_upper() const {
  const BigFloat a = re_.abs_upper(), b = im_.abs_upper();
  BigFloat r(prec());
  mpfr_hypot(r.get(), a.get(), b.get(), MPFR_RNDU);
  return r;
}

BigFloat ComplexBall::abs_lower() const {
  const BigFloat a = re_.abs_lower(), b = im_.abs_lower();
  BigFloat r(prec());
  mpfr_hypot(r.get(), a.get(), b.get(), MPFR_RNDD);
  return r;
}

ComplexBall operator*(const ComplexBall& a, const ComplexBall& b) {
  return {a.re_ * b.re_ - a.im_ * b.im_, a.re_ * b.im_ + a.im_ * b.re_};
}

ComplexBall operator/(const ComplexBall& a, const ComplexBall& b) {
  const RealBall n = sqr(b.re_) + sqr(b.im_);
  if (n.contains_zero()) fail("BallContainsZero", "division by a complex ball containing zero");
  const ComplexBall num = a * conj(b);
  return {num.re_ / n, num.im_ / n};
}

ComplexBall conj(const ComplexBall& z) { return {z.re(), -z.im()}; }

ComplexBall sqr(const ComplexBall& z) {
  const RealBall cross = z.re() * z.im();
  return {sqr(z.re()) - sqr(z.im()), cross + cross};
}

ComplexBall pow(const ComplexBall& z, unsigned long n) {
  ComplexBall result(RealBall(1, z.prec())), base = z;
  while (n) {
    if (n & 1) result = result * base;
    n >>= 1;
    if (n) base = sqr(base);
  }
  return result;
}

ComplexBall exp(const ComplexBall& z) {
  const RealBall m = exp(z.re());
  return {m * cos(z.im()), m * sin(z.im())};
}

ComplexBall sqrt(const ComplexBall& z) {
  const mpfr_prec_t p = z.prec();
  const mpfr_prec_t wp = p + 20;
  // Approximate principal root s of the midpoint.
  BigFloat a(wp), b(wp), r(wp), x(wp), y(wp), t(wp);
  mpfr_set(a.get(), z.re().mid().get(), MPFR_RNDN);
  mpfr_set(b.get(), z.im().mid().get(), MPFR_RNDN);
  mpfr_hypot(r.get(), a.get(), b.get(), MPFR_RNDN);
  if (mpfr_sgn(a.get()) >= 0) {
    mpfr_add(t.get(), r.get(), a.get(), MPFR_RNDN);
    mpfr_div_2ui(t.get(), t.get(), 1, MPFR_RNDN);
    mpfr_sqrt(x.get(), t.get(), MPFR_RNDN);
    if (mpfr_zero_p(x.get()))
      mpfr_set_zero(y.get(), 1);
    else {
      mpfr_div(y.get(), b.get(), x.get(), MPFR_RNDN);
      mpfr_div_2ui(y.get(), y.get(), 1, MPFR_RNDN);
    }
  } else {
    mpfr_sub(t.get(), r.get(), a.get(), MPFR_RNDN);
    mpfr_div_2ui(t.get(), t.get(), 1, MPFR_RNDN);
    mpfr_sqrt(y.get(), t.get(), MPFR_RNDN);
    if (mpfr_sgn(b.get()) < 0) mpfr_neg(y.get(), y.get(), MPFR_RNDN);
    mpfr_div(x.get(), b.get(), y.get(), MPFR_RNDN);
    mpfr_div_2ui(x.get(), x.get(), 1, MPFR_RNDN);
  }
  BigFloat xs(p), ys(p);
  mpfr_set(xs.get(), x.get(), MPFR_RNDN);
  mpfr_set(ys.get(), y.get(), MPFR_RNDN);
  if (mpfr_sgn(xs.get()) <= 0) fail("BranchCut", "square root evaluated on the branch cut");

  // For every w in the ball: |sqrt(w) - s| = |w - s^2| / |sqrt(w) + s|
  //   <= (|w - m| + |m - s^2|) / Re s, since Re sqrt(w) >= 0.
  const BigFloat zero(kRadiusPrec);
  const ComplexBall s{RealBall(xs, zero), RealBall(ys, zero)};
  const ComplexBall m{RealBall(z.re().mid(), zero), RealBall(z.im().mid(), zero)};
  const ComplexBall resid = sqr(s) - m;
  BigFloat err(kRadiusPrec);
  mpfr_add(err.get(), z.radius().get(), resid.abs_upper().get(), MPFR_RNDU);
  BigFloat re_lo(kRadiusPrec);
  mpfr_set(re_lo.get(), xs.get(), MPFR_RNDD);
  mpfr_div(err.get(), err.get(), re_lo.get(), MPFR_RNDU);
  return {RealBall(xs, err), RealBall(ys, err)};
}

RealBall abs(const ComplexBall& z) { return sqrt(sqr(z.re()) + sqr(z.im())); }

ComplexBall mul_2si(const ComplexBall& z, long e) { return {mul_2si(z.re(), e), mul_2si(z.im(), e)}; }

ComplexBall q_from_tau(const ComplexBall& tau) {
  const RealBall two_pi = mul_2si(RealBall::pi(tau.prec()), 1);
  return exp(ComplexBall{-(two_pi * tau.im()), two_pi * tau.re()});
}

}  // namespace nw
