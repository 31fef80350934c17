#include "nw/series.hpp"

#include <algorithm>
#include <sstream>

#include "nw/error.hpp"
#include "nw/rational.hpp"

namespace nw {

std::string Order::to_string() const {
  if (value) return std::to_string(*value);
  return "indeterminate-at-" + std::to_string(trunc);
}

TruncatedSeries::TruncatedSeries() : coeffs_(1) {}

TruncatedSeries::TruncatedSeries(std::size_t trunc_order) : coeffs_(trunc_order + 1) {}

TruncatedSeries::TruncatedSeries(std::vector<mpq_class> coeffs) : coeffs_(std::move(coeffs)) {
  if (coeffs_.empty()) fail("InvalidArgument", "a truncated series needs at least one coefficient");
  for (auto& c : coeffs_) c.canonicalize();
}

TruncatedSeries TruncatedSeries::constant(const mpq_class& c, std::size_t trunc_order) {
  TruncatedSeries s(trunc_order);
  s.coeffs_[0] = c;
  return s;
}

TruncatedSeries TruncatedSeries::monomial(std::size_t k, std::size_t trunc_order, const mpq_class& c) {
  TruncatedSeries s(trunc_order);
  if (k <= trunc_order) s.coeffs_[k] = c;
  return s;
}

const mpq_class& TruncatedSeries::operator[](std::size_t i) const {
  if (i >= coeffs_.size())
    fail("TruncationTooShort", "coefficient " + std::to_string(i) + " requested from a series known to order " +
                                   std::to_string(trunc_order()));
  return coeffs_[i];
}

bool TruncatedSeries::is_zero() const {
  return std::all_of(coeffs_.begin(), coeffs_.end(), [](const mpq_class& c) { return c == 0; });
}

bool TruncatedSeries::is_integral() const {
  return std::all_of(coeffs_.begin(), coeffs_.end(), [](const mpq_class& c) { return c.get_den() == 1; });
}

TruncatedSeries TruncatedSeries::truncated(std::size_t n) const {
  if (n > trunc_order())
    fail("TruncationTooShort", "cannot extend a series known to order " + std::to_string(trunc_order()) + " to " +
                                   std::to_string(n));
  return TruncatedSeries(std::vector<mpq_class>(coeffs_.begin(), coeffs_.begin() + static_cast<long>(n) + 1));
}

TruncatedSeries TruncatedSeries::operator-() const {
  TruncatedSeries r = *this;
  for (auto& c : r.coeffs_) c = -c;
  return r;
}

TruncatedSeries operator+(const TruncatedSeries& a, const TruncatedSeries& b) {
  const std::size_t n = std::min(a.trunc_order(), b.trunc_order());
  TruncatedSeries r(n);
  for (std::size_t i = 0; i <= n; ++i) r.coeffs_[i] = a.coeffs_[i] + b.coeffs_[i];
  return r;
}

TruncatedSeries operator-(const TruncatedSeries& a, const TruncatedSeries& b) {
  const std::size_t n = std::min(a.trunc_order(), b.trunc_order());
  TruncatedSeries r(n);
  for (std::size_t i = 0; i <= n; ++i) r.coeffs_[i] = a.coeffs_[i] - b.coeffs_[i];
  return r;
}

TruncatedSeries operator*(const mpq_class& c, const TruncatedSeries& a) {
  TruncatedSeries r = a;
  for (auto& x : r.coeffs_) x *= c;
  return r;
}

namespace {

mpz_class common_denominator(std::span<const mpq_class> xs) {
  mpz_class d = 1;
  for (const auto& x : xs)
    if (x.get_den() != 1) mpz_lcm(d.get_mpz_t(), d.get_mpz_t(), x.get_den().get_mpz_t());
  return d;
}

std::vector<mpz_class> scaled_numerators(std::span<const mpq_class> xs, const mpz_class& d) {
  std::vector<mpz_class> out(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (xs[i] == 0) continue;
    mpz_class f = d / xs[i].get_den();
    out[i] = xs[i].get_num() * f;
  }
  return out;
}

}  // namespace

// Convolution runs over integers: both operands are scaled to a common
// denominator first, which keeps every inner step free of gcd work.
TruncatedSeries operator*(const TruncatedSeries& a, const TruncatedSeries& b) {
  const std::size_t n = std::min(a.trunc_order(), b.trunc_order());
  auto ac = a.coeffs().first(n + 1);
  auto bc = b.coeffs().first(n + 1);
  const mpz_class da = common_denominator(ac);
  const mpz_class db = common_denominator(bc);
  const auto ia = scaled_numerators(ac, da);
  const auto ib = scaled_numerators(bc, db);

  std::vector<std::size_t> nz_b;
  for (std::size_t j = 0; j <= n; ++j)
    if (ib[j] != 0) nz_b.push_back(j);

  std::vector<mpz_class> acc(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    if (ia[i] == 0) continue;
    for (std::size_t j : nz_b) {
      if (i + j > n) break;
      mpz_addmul(acc[i + j].get_mpz_t(), ia[i].get_mpz_t(), ib[j].get_mpz_t());
    }
  }
  const mpz_class den = da * db;
  std::vector<mpq_class> out(n + 1);
  for (std::size_t k = 0; k <= n; ++k) {
    if (acc[k] == 0) continue;
    out[k] = mpq_class(acc[k], den);
    out[k].canonicalize();
  }
  return TruncatedSeries(std::move(out));
}

TruncatedSeries series_add(const TruncatedSeries& a, const TruncatedSeries& b) { return a + b; }
TruncatedSeries series_mul(const TruncatedSeries& a, const TruncatedSeries& b) { return a * b; }

Order ord(const TruncatedSeries& s) {
  auto c = s.coeffs();
  for (std::size_t i = 0; i < c.size(); ++i)
    if (c[i] != 0) return Order{i, s.trunc_order()};
  return Order{std::nullopt, s.trunc_order()};
}

namespace {

TruncatedSeries shift_down(const TruncatedSeries& s, std::size_t k) {
  auto c = s.coeffs();
  return TruncatedSeries(std::vector<mpq_class>(c.begin() + static_cast<long>(k), c.end()));
}

}  // namespace

TruncatedSeries series_div(const TruncatedSeries& a, const TruncatedSeries& b) {
  const Order ob = ord(b);
  if (!ob.determinate()) fail("DivisorVanishes", "divisor vanishes to its truncation order " + std::to_string(b.trunc_order()));
  const std::size_t v = *ob.value;
  const Order oa = ord(a);
  if (oa.determinate() && *oa.value < v)
    fail("OrderMismatch", "ord(a) = " + std::to_string(*oa.value) + " < ord(b) = " + std::to_string(v));
  if (a.trunc_order() < v)
    fail("OrderMismatch", "dividend known only to order " + std::to_string(a.trunc_order()) + " below ord(b) = " +
                              std::to_string(v));

  const TruncatedSeries num = shift_down(a, v);
  const TruncatedSeries den = shift_down(b, v);
  const std::size_t n = std::min(num.trunc_order(), den.trunc_order());
  const mpq_class inv0 = 1 / den[0];
  std::vector<mpq_class> out(n + 1);
  for (std::size_t k = 0; k <= n; ++k) {
    mpq_class acc = num[k];
    for (std::size_t j = 1; j <= k; ++j)
      if (den[j] != 0 && out[k - j] != 0) acc -= den[j] * out[k - j];
    out[k] = acc * inv0;
  }
  return TruncatedSeries(std::move(out));
}

TruncatedSeries series_pow(const TruncatedSeries& a, unsigned exponent) {
  TruncatedSeries result = TruncatedSeries::constant(1, a.trunc_order());
  TruncatedSeries base = a;
  while (exponent) {
    if (exponent & 1u) result = result * base;
    exponent >>= 1u;
    if (exponent) base = base * base;
  }
  return result;
}

TruncatedSeries theta(const TruncatedSeries& s) {
  std::vector<mpq_class> out(s.coeffs().begin(), s.coeffs().end());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] *= static_cast<unsigned long>(i);
  return TruncatedSeries(std::move(out));
}

TruncatedSeries derivative(const TruncatedSeries& s) {
  if (s.trunc_order() == 0) fail("TruncationTooShort", "derivative of a series known only to order 0");
  std::vector<mpq_class> out(s.trunc_order());
  for (std::size_t i = 1; i <= s.trunc_order(); ++i) out[i - 1] = s[i] * static_cast<unsigned long>(i);
  return TruncatedSeries(std::move(out));
}

TruncatedSeries shift_up(const TruncatedSeries& s, std::size_t k) {
  std::vector<mpq_class> out(s.trunc_order() + k + 1);
  std::copy(s.coeffs().begin(), s.coeffs().end(), out.begin() + static_cast<long>(k));
  return TruncatedSeries(std::move(out));
}

bool equal_to_common_order(const TruncatedSeries& a, const TruncatedSeries& b) {
  const std::size_t n = std::min(a.trunc_order(), b.trunc_order());
  for (std::size_t i = 0; i <= n; ++i)
    if (a[i] != b[i]) return false;
  return true;
}

// ---------------------------------------------------------------------------

LaurentTruncated::LaurentTruncated(std::size_t pole_order, TruncatedSeries body)
    : pole_order_(pole_order), body_(std::move(body)) {
  normalize();
}

void LaurentTruncated::normalize() {
  while (pole_order_ > 0 && body_.trunc_order() > 0 && body_[0] == 0) {
    body_ = shift_down(body_, 1);
    --pole_order_;
  }
}

long LaurentTruncated::known_to() const {
  return static_cast<long>(body_.trunc_order()) - static_cast<long>(pole_order_);
}

const mpq_class& LaurentTruncated::coeff(long e) const {
  const long idx = e + static_cast<long>(pole_order_);
  if (idx < 0) fail("InvalidArgument", "exponent below the pole order");
  return body_[static_cast<std::size_t>(idx)];
}

TruncatedSeries LaurentTruncated::to_series() const {
  if (pole_order_ != 0) fail("InvalidArgument", "Laurent series still has a pole of order " + std::to_string(pole_order_));
  return body_;
}

LaurentTruncated theta(const LaurentTruncated& s) {
  const mpq_class m(static_cast<unsigned long>(s.pole_order()));
  return LaurentTruncated(s.pole_order(), theta(s.body()) - m * s.body());
}

LaurentTruncated operator*(const LaurentTruncated& a, const TruncatedSeries& b) {
  return LaurentTruncated(a.pole_order(), a.body() * b);
}

LaurentTruncated operator-(const LaurentTruncated& a, const mpq_class& c) {
  const std::size_t m = a.pole_order();
  if (a.body().trunc_order() < m) fail("TruncationTooShort", "constant term of the Laurent series is not known");
  return LaurentTruncated(m, a.body() - TruncatedSeries::monomial(m, a.body().trunc_order(), c));
}

// ---------------------------------------------------------------------------

std::string to_text(const TruncatedSeries& s) {
  std::ostringstream os;
  os << "N=" << s.trunc_order() << '\n';
  for (std::size_t i = 0; i <= s.trunc_order(); ++i) os << i << ' ' << to_fraction_string(s[i]) << '\n';
  return os.str();
}

TruncatedSeries series_from_text(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  if (!std::getline(is, line) || line.rfind("N=", 0) != 0) fail("ParseError", "series text must start with 'N=<order>'");
  const long n = parse_integer(line.substr(2)).get_si();
  if (n < 0) fail("ParseError", "negative truncation order");
  std::vector<mpq_class> coeffs(static_cast<std::size_t>(n) + 1);
  std::vector<bool> seen(coeffs.size(), false);
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string idx, val, extra;
    if (!(ls >> idx >> val) || (ls >> extra)) fail("ParseError", "malformed coefficient line '" + line + "'");
    const long i = parse_integer(idx).get_si();
    if (i < 0 || i > n) fail("ParseError", "coefficient index out of range in '" + line + "'");
    if (val.find('/') == std::string::npos) fail("ParseError", "coefficient must be written as p/q in '" + line + "'");
    coeffs[static_cast<std::size_t>(i)] = parse_rational(val);
    seen[static_cast<std::size_t>(i)] = true;
  }
  if (std::find(seen.begin(), seen.end(), false) != seen.end()) fail("ParseError", "missing coefficient lines");
  return TruncatedSeries(std::move(coeffs));
}

}  // namespace nw
