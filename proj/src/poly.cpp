#include "nw/poly.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <sstream>

#include "nw/error.hpp"
#include "nw/rational.hpp"

namespace nw {

unsigned total_degree(const Exponents& e) { return std::accumulate(e.begin(), e.end(), 0u); }

bool GrlexLess::operator()(const Exponents& a, const Exponents& b) const {
  const unsigned da = total_degree(a), db = total_degree(b);
  if (da != db) return da < db;
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

SparsePoly SparsePoly::constant(std::size_t nvars, const mpq_class& c) {
  SparsePoly p(nvars);
  p.add_term(Exponents(nvars, 0), c);
  return p;
}

SparsePoly SparsePoly::variable(std::size_t nvars, std::size_t index) {
  if (index >= nvars) fail("ArityMismatch", "variable index out of range");
  Exponents e(nvars, 0);
  e[index] = 1;
  return monomial(e);
}

SparsePoly SparsePoly::monomial(const Exponents& e, const mpq_class& c) {
  SparsePoly p(e.size());
  p.add_term(e, c);
  return p;
}

bool SparsePoly::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && total_degree(terms_.begin()->first) == 0);
}

int SparsePoly::degree() const {
  if (terms_.empty()) return -1;
  return static_cast<int>(total_degree(terms_.rbegin()->first));
}

mpq_class SparsePoly::height() const {
  mpq_class h = 0;
  for (const auto& [e, c] : terms_) h = std::max(h, mpq_class(abs(c)));
  return h;
}

bool SparsePoly::is_integral() const {
  return std::all_of(terms_.begin(), terms_.end(), [](const auto& t) { return t.second.get_den() == 1; });
}

const mpq_class& SparsePoly::coeff(const Exponents& e) const {
  static const mpq_class zero = 0;
  auto it = terms_.find(e);
  return it == terms_.end() ? zero : it->second;
}

const SparsePoly::TermMap::value_type& SparsePoly::leading_term() const {
  if (terms_.empty()) fail("InvalidArgument", "zero polynomial has no leading term");
  return *terms_.rbegin();
}

void SparsePoly::add_term(const Exponents& e, const mpq_class& c) {
  if (e.size() != nvars_) fail("ArityMismatch", "exponent vector length differs from variable count");
  if (c == 0) return;
  auto [it, inserted] = terms_.try_emplace(e, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

void SparsePoly::check_arity(const SparsePoly& other) const {
  if (nvars_ != other.nvars_)
    fail("ArityMismatch", "polynomials over " + std::to_string(nvars_) + " and " + std::to_string(other.nvars_) +
                              " variables");
}

SparsePoly SparsePoly::operator-() const {
  SparsePoly r = *this;
  for (auto& [e, c] : r.terms_) c = -c;
  return r;
}

SparsePoly operator+(const SparsePoly& a, const SparsePoly& b) {
  a.check_arity(b);
  SparsePoly r = a;
  for (const auto& [e, c] : b.terms_) r.add_term(e, c);
  return r;
}

SparsePoly operator-(const SparsePoly& a, const SparsePoly& b) {
  a.check_arity(b);
  SparsePoly r = a;
  for (const auto& [e, c] : b.terms_) r.add_term(e, -c);
  return r;
}

SparsePoly operator*(const SparsePoly& a, const SparsePoly& b) {
  a.check_arity(b);
  SparsePoly r(a.nvars_);
  Exponents e(a.nvars_);
  for (const auto& [ea, ca] : a.terms_) {
    for (const auto& [eb, cb] : b.terms_) {
      for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
      r.add_term(e, ca * cb);
    }
  }
  return r;
}

SparsePoly operator*(const mpq_class& c, const SparsePoly& a) {
  if (c == 0) return SparsePoly(a.nvars_);
  SparsePoly r = a;
  for (auto& [e, x] : r.terms_) x *= c;
  return r;
}

bool operator==(const SparsePoly& a, const SparsePoly& b) {
  return a.nvars_ == b.nvars_ && a.terms_ == b.terms_;
}

SparsePoly SparsePoly::pow(unsigned k) const {
  SparsePoly result = constant(nvars_, 1);
  SparsePoly base = *this;
  while (k) {
    if (k & 1u) result = result * base;
    k >>= 1u;
    if (k) base = base * base;
  }
  return result;
}

SparsePoly SparsePoly::partial(std::size_t var) const {
  if (var >= nvars_) fail("ArityMismatch", "partial derivative in a variable that does not exist");
  SparsePoly r(nvars_);
  for (const auto& [e, c] : terms_) {
    if (e[var] == 0) continue;
    Exponents d = e;
    --d[var];
    r.add_term(d, c * e[var]);
  }
  return r;
}

mpq_class SparsePoly::evaluate(const std::vector<mpq_class>& point) const {
  if (point.size() != nvars_) fail("ArityMismatch", "evaluation point has the wrong dimension");
  mpq_class sum = 0;
  for (const auto& [e, c] : terms_) {
    mpq_class t = c;
    for (std::size_t i = 0; i < nvars_; ++i)
      for (std::uint32_t k = 0; k < e[i]; ++k) t *= point[i];
    sum += t;
  }
  return sum;
}

SparsePoly SparsePoly::primitive() const {
  if (terms_.empty()) return *this;
  mpz_class den = 1, num = 0;
  for (const auto& [e, c] : terms_) {
    mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), c.get_den().get_mpz_t());
    mpz_gcd(num.get_mpz_t(), num.get_mpz_t(), c.get_num().get_mpz_t());
  }
  mpq_class scale(den, num);
  scale.canonicalize();
  if (leading_term().second < 0) scale = -scale;
  return scale * *this;
}

DivisionResult divide(const SparsePoly& dividend, const SparsePoly& divisor) {
  if (divisor.is_zero()) fail("DivisorVanishes", "division by the zero polynomial");
  if (dividend.nvars() != divisor.nvars()) fail("ArityMismatch", "division across different variable counts");
  const auto& [lead_e, lead_c] = divisor.leading_term();
  SparsePoly p = dividend;
  SparsePoly q(dividend.nvars()), r(dividend.nvars());
  Exponents shift(dividend.nvars());
  while (!p.is_zero()) {
    const auto [pe, pc] = p.leading_term();
    bool divisible = true;
    for (std::size_t i = 0; i < shift.size(); ++i) {
      if (pe[i] < lead_e[i]) {
        divisible = false;
        break;
      }
      shift[i] = pe[i] - lead_e[i];
    }
    if (divisible) {
      SparsePoly t = SparsePoly::monomial(shift, pc / lead_c);
      q = q + t;
      p = p - t * divisor;
    } else {
      SparsePoly t = SparsePoly::monomial(pe, pc);
      r = r + t;
      p = p - t;
    }
  }
  return {std::move(q), std::move(r)};
}

std::optional<SparsePoly> exact_quotient(const SparsePoly& dividend, const SparsePoly& divisor) {
  auto [q, r] = divide(dividend, divisor);
  if (!r.is_zero()) return std::nullopt;
  return q;
}

std::vector<std::string> default_names(std::size_t nvars) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < nvars; ++i) names.push_back("x" + std::to_string(i));
  return names;
}

std::string to_string(const SparsePoly& p, const std::vector<std::string>& names) {
  if (names.size() != p.nvars()) fail("ArityMismatch", "name list does not match the variable count");
  if (p.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (auto it = p.terms().rbegin(); it != p.terms().rend(); ++it) {
    const auto& [e, c] = *it;
    const bool neg = c < 0;
    const mpq_class mag = abs(c);
    if (first)
      os << (neg ? "-" : "");
    else
      os << (neg ? " - " : " + ");
    first = false;

    std::vector<std::string> factors;
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i] == 0) continue;
      factors.push_back(e[i] == 1 ? names[i] : names[i] + "^" + std::to_string(e[i]));
    }
    if (factors.empty()) {
      os << to_short_string(mag);
      continue;
    }
    if (mag != 1) os << to_short_string(mag) << '*';
    for (std::size_t k = 0; k < factors.size(); ++k) os << (k ? " " : "") << factors[k];
  }
  return os.str();
}

std::string to_string(const SparsePoly& p) { return to_string(p, default_names(p.nvars())); }

namespace {

class PolyParser {
 public:
  PolyParser(std::string_view text, const std::vector<std::string>& names) : names_(names) {
    // Normalize the Unicode minus sign (U+2212) to ASCII.
    std::string s(text);
    const std::string minus = "\xE2\x88\x92";
    for (std::size_t pos; (pos = s.find(minus)) != std::string::npos;) s.replace(pos, minus.size(), "-");
    text_ = std::move(s);
  }

  SparsePoly parse() {
    SparsePoly result(names_.size());
    skip_ws();
    if (at_end()) error("empty polynomial");
    bool first = true;
    while (!at_end()) {
      int sign = 1;
      if (peek() == '+' || peek() == '-') {
        sign = peek() == '-' ? -1 : 1;
        ++pos_;
        skip_ws();
      } else if (!first) {
        error("expected '+' or '-'");
      }
      first = false;
      auto [e, c] = parse_term();
      result.add_term(e, sign * c);
      skip_ws();
    }
    return result;
  }

 private:
  std::pair<Exponents, mpq_class> parse_term() {
    Exponents e(names_.size(), 0);
    mpq_class c = 1;
    bool any = false;
    while (!at_end() && peek() != '+' && peek() != '-') {
      if (peek() == '*') {
        if (!any) error("dangling '*'");
        ++pos_;
        skip_ws();
        continue;
      }
      if (std::isdigit(static_cast<unsigned char>(peek())) || peek() == '.') {
        c *= parse_number();
      } else if (std::isalpha(static_cast<unsigned char>(peek())) || peek() == '_') {
        const std::string name = parse_name();
        auto it = std::find(names_.begin(), names_.end(), name);
        if (it == names_.end()) error("unknown variable '" + name + "'");
        std::uint32_t power = 1;
        skip_ws();
        if (!at_end() && peek() == '^') {
          ++pos_;
          skip_ws();
          power = static_cast<std::uint32_t>(parse_integer(parse_digits()).get_ui());
        }
        e[static_cast<std::size_t>(it - names_.begin())] += power;
      } else {
        error(std::string("unexpected character '") + peek() + "'");
      }
      any = true;
      skip_ws();
    }
    if (!any) error("empty term");
    return {e, c};
  }

  mpq_class parse_number() {
    std::size_t start = pos_;
    while (!at_end() && (std::isdigit(static_cast<unsigned char>(peek())) || peek() == '.' || peek() == '/')) ++pos_;
    return parse_rational(std::string_view(text_).substr(start, pos_ - start));
  }

  std::string parse_digits() {
    std::size_t start = pos_;
    while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
    if (start == pos_) error("expected an exponent");
    return text_.substr(start, pos_ - start);
  }

  std::string parse_name() {
    std::size_t start = pos_;
    while (!at_end() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_')) ++pos_;
    return text_.substr(start, pos_ - start);
  }

  void skip_ws() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(peek()))) ++pos_;
  }
  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return text_[pos_]; }
  [[noreturn]] void error(const std::string& what) const {
    fail("ParseError", what + " at offset " + std::to_string(pos_) + " in '" + text_ + "'");
  }

  std::string text_;
  const std::vector<std::string>& names_;
  std::size_t pos_ = 0;
};

}  // namespace

SparsePoly parse_poly(std::string_view text, const std::vector<std::string>& names) {
  return PolyParser(text, names).parse();
}

}  // namespace nw
