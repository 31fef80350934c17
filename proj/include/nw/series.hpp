#pragma once

// Truncated formal power series in one variable q with exact rational
// coefficients.
//
// A TruncatedSeries with truncation order N stores coefficients 0..N and
// says nothing about q^(N+1) and beyond. Binary operations produce the
// minimum truncation order of their inputs; nothing is ever zero-padded.

#include <gmpxx.h>

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace nw {

/// Order of vanishing at q = 0. When every stored coefficient is zero the
/// order is only known to exceed `trunc`; `value` is then empty.
struct Order {
  std::optional<std::size_t> value;
  std::size_t trunc = 0;

  bool determinate() const { return value.has_value(); }
  std::string to_string() const;
};

class TruncatedSeries {
 public:
  /// The zero series known to order 0.
  TruncatedSeries();
  /// The zero series known to order `trunc_order`.
  explicit TruncatedSeries(std::size_t trunc_order);
  /// Takes coefficients 0..N; `coeffs` must be non-empty.
  explicit TruncatedSeries(std::vector<mpq_class> coeffs);

  static TruncatedSeries constant(const mpq_class& c, std::size_t trunc_order);
  /// c * q^k known to `trunc_order` (which may be below k).
  static TruncatedSeries monomial(std::size_t k, std::size_t trunc_order, const mpq_class& c = 1);

  std::size_t trunc_order() const { return coeffs_.size() - 1; }
  /// Throws TruncationTooShort for i > trunc_order().
  const mpq_class& operator[](std::size_t i) const;
  std::span<const mpq_class> coeffs() const { return coeffs_; }

  bool is_zero() const;
  bool is_integral() const;
  /// Restriction to a lower truncation order; raising it is an error.
  TruncatedSeries truncated(std::size_t trunc_order) const;

  TruncatedSeries operator-() const;
  friend TruncatedSeries operator+(const TruncatedSeries& a, const TruncatedSeries& b);
  friend TruncatedSeries operator-(const TruncatedSeries& a, const TruncatedSeries& b);
  friend TruncatedSeries operator*(const TruncatedSeries& a, const TruncatedSeries& b);
  friend TruncatedSeries operator*(const mpq_class& c, const TruncatedSeries& a);
  friend bool operator==(const TruncatedSeries& a, const TruncatedSeries& b) = default;

 private:
  std::vector<mpq_class> coeffs_;
};

TruncatedSeries series_add(const TruncatedSeries& a, const TruncatedSeries& b);
TruncatedSeries series_mul(const TruncatedSeries& a, const TruncatedSeries& b);

/// Exact quotient a / b after cancelling the common power q^ord(b).
/// Errors: DivisorVanishes if b is zero to its truncation order;
/// OrderMismatch if ord(a) < ord(b).
TruncatedSeries series_div(const TruncatedSeries& a, const TruncatedSeries& b);

TruncatedSeries series_pow(const TruncatedSeries& a, unsigned exponent);

/// theta = q d/dq: coefficient i becomes i * coeffs[i].
TruncatedSeries theta(const TruncatedSeries& s);

/// Plain d/dq. The result is known to one order less.
TruncatedSeries derivative(const TruncatedSeries& s);

/// q^k * s, known to order trunc_order() + k.
TruncatedSeries shift_up(const TruncatedSeries& s, std::size_t k);

Order ord(const TruncatedSeries& s);

/// Coefficientwise comparison on the common truncation range.
bool equal_to_common_order(const TruncatedSeries& a, const TruncatedSeries& b);

/// q^(-pole_order) * body.
class LaurentTruncated {
 public:
  LaurentTruncated(std::size_t pole_order, TruncatedSeries body);

  std::size_t pole_order() const { return pole_order_; }
  const TruncatedSeries& body() const { return body_; }
  /// Coefficient of q^e for -pole_order <= e <= body.trunc_order() - pole_order.
  const mpq_class& coeff(long e) const;
  /// Largest exponent whose coefficient is known.
  long known_to() const;

  /// Converts to an ordinary series; requires pole_order() == 0.
  TruncatedSeries to_series() const;

 private:
  void normalize();

  std::size_t pole_order_;
  TruncatedSeries body_;
};

/// theta on q^(-m) B: q^(-m) (theta(B) - m B).
LaurentTruncated theta(const LaurentTruncated& s);
LaurentTruncated operator*(const LaurentTruncated& a, const TruncatedSeries& b);
LaurentTruncated operator-(const LaurentTruncated& a, const mpq_class& c);

/// Line-oriented text format: "N=<trunc_order>" then one line
/// "<index> <numerator>/<denominator>" per stored coefficient.
std::string to_text(const TruncatedSeries& s);
TruncatedSeries series_from_text(const std::string& text);

}  // namespace nw
