#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace nw {

using Exponents = std::vector<std::uint32_t>;

unsigned total_degree(const Exponents& e);

/// Graded lexicographic order: total degree first, then lexicographic with
/// x0 > x1 > ... .
struct GrlexLess {
  bool operator()(const Exponents& a, const Exponents& b) const;
};

/// Exact multivariate polynomial with rational coefficients. Zero
/// coefficients are never stored.
class SparsePoly {
 public:
  using TermMap = std::map<Exponents, mpq_class, GrlexLess>;

  explicit SparsePoly(std::size_t nvars = 0) : nvars_(nvars) {}

  static SparsePoly constant(std::size_t nvars, const mpq_class& c);
  static SparsePoly variable(std::size_t nvars, std::size_t index);
  static SparsePoly monomial(const Exponents& e, const mpq_class& c = 1);

  std::size_t nvars() const { return nvars_; }
  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  /// Total degree; -1 for the zero polynomial.
  int degree() const;
  /// Maximum |coefficient|; requires integer coefficients to be meaningful.
  mpq_class height() const;
  bool is_integral() const;
  const mpq_class& coeff(const Exponents& e) const;
  /// Leading term under GrlexLess. Requires !is_zero().
  const TermMap::value_type& leading_term() const;

  void add_term(const Exponents& e, const mpq_class& c);

  SparsePoly operator-() const;
  friend SparsePoly operator+(const SparsePoly& a, const SparsePoly& b);
  friend SparsePoly operator-(const SparsePoly& a, const SparsePoly& b);
  friend SparsePoly operator*(const SparsePoly& a, const SparsePoly& b);
  friend SparsePoly operator*(const mpq_class& c, const SparsePoly& a);
  friend bool operator==(const SparsePoly& a, const SparsePoly& b);

  SparsePoly pow(unsigned k) const;
  SparsePoly partial(std::size_t var) const;

  /// Evaluation at a rational point.
  mpq_class evaluate(const std::vector<mpq_class>& point) const;

  /// Scales to a primitive integer polynomial with positive leading coefficient.
  SparsePoly primitive() const;

 private:
  void check_arity(const SparsePoly& other) const;

  std::size_t nvars_;
  TermMap terms_;
};

struct DivisionResult {
  SparsePoly quotient;
  SparsePoly remainder;
};

/// Multivariate division by a single divisor under graded-lex order. The
/// remainder is zero iff `divisor` divides `dividend`.
DivisionResult divide(const SparsePoly& dividend, const SparsePoly& divisor);

/// Exact quotient when divisible.
std::optional<SparsePoly> exact_quotient(const SparsePoly& dividend, const SparsePoly& divisor);

/// Default variable names: x0, x1, ...
std::vector<std::string> default_names(std::size_t nvars);

/// Text form "c*x0^a0 x1^a1 + ..." in descending graded-lex order.
std::string to_string(const SparsePoly& p, const std::vector<std::string>& names);
std::string to_string(const SparsePoly& p);

/// Parses sums of terms "c * x0^a0 x1^a1 ..." joined by '+' or '-' (ASCII
/// or the Unicode minus sign). Coefficients are integers, "p/q" rationals or
/// decimals; factors are separated by '*' or whitespace.
SparsePoly parse_poly(std::string_view text, const std::vector<std::string>& names);

}  // namespace nw
