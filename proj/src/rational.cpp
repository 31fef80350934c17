#include "nw/rational.hpp"

#include <cctype>

#include "nw/error.hpp"

namespace nw {

std::string to_fraction_string(const mpq_class& x) {
  return x.get_num().get_str() + "/" + x.get_den().get_str();
}

std::string to_short_string(const mpq_class& x) {
  if (x.get_den() == 1) return x.get_num().get_str();
  return x.get_str();
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

}  // namespace

mpz_class parse_integer(std::string_view text) {
  auto s = trim(text);
  std::string_view digits = s;
  bool neg = false;
  if (!digits.empty() && (digits.front() == '-' || digits.front() == '+')) {
    neg = digits.front() == '-';
    digits.remove_prefix(1);
  }
  if (!all_digits(digits)) fail("ParseError", "not an integer: '" + std::string(text) + "'");
  mpz_class v(std::string(digits), 10);
  return neg ? mpz_class(-v) : v;
}

mpq_class parse_rational(std::string_view text) {
  auto s = trim(text);
  if (s.empty()) fail("ParseError", "empty rational");
  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    mpz_class num = parse_integer(s.substr(0, slash));
    mpz_class den = parse_integer(s.substr(slash + 1));
    if (den == 0) fail("ParseError", "zero denominator in '" + std::string(text) + "'");
    mpq_class q(num, den);
    q.canonicalize();
    return q;
  }

  // Decimal literal: [sign] digits [. digits] [e|E [sign] digits]
  bool neg = false;
  std::string_view rest = s;
  if (rest.front() == '-' || rest.front() == '+') {
    neg = rest.front() == '-';
    rest.remove_prefix(1);
  }
  long exponent = 0;
  if (auto e = rest.find_first_of("eE"); e != std::string_view::npos) {
    exponent = parse_integer(rest.substr(e + 1)).get_si();
    rest = rest.substr(0, e);
  }
  std::string mantissa;
  if (auto dot = rest.find('.'); dot != std::string_view::npos) {
    auto ip = rest.substr(0, dot);
    auto fp = rest.substr(dot + 1);
    if ((!ip.empty() && !all_digits(ip)) || (!fp.empty() && !all_digits(fp)) ||
        (ip.empty() && fp.empty()))
      fail("ParseError", "malformed decimal '" + std::string(text) + "'");
    mantissa = std::string(ip) + std::string(fp);
    exponent -= static_cast<long>(fp.size());
  } else {
    if (!all_digits(rest)) fail("ParseError", "malformed number '" + std::string(text) + "'");
    mantissa = std::string(rest);
  }
  mpq_class q(mpz_class(mantissa, 10));
  mpz_class ten_pow = ipow(10, static_cast<unsigned long>(exponent < 0 ? -exponent : exponent));
  if (exponent < 0)
    q /= ten_pow;
  else
    q *= ten_pow;
  q.canonicalize();
  return neg ? mpq_class(-q) : q;
}

std::size_t bit_length(const mpz_class& x) {
  if (x == 0) return 0;
  return mpz_sizeinbase(x.get_mpz_t(), 2);
}

mpz_class ipow(const mpz_class& base, unsigned long exp) {
  mpz_class r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), exp);
  return r;
}

}  // namespace nw
