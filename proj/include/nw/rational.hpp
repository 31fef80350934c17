#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace nw {

/// "p/q" with q > 0; integers serialize with an explicit "/1".
std::string to_fraction_string(const mpq_class& x);

/// Canonical short form: "p" for integers, "p/q" otherwise.
std::string to_short_string(const mpq_class& x);

/// Parses "p", "p/q", or a decimal literal such as "-0.125" or "1e-3" into an
/// exact rational. Throws nw::Error("ParseError") on malformed input.
mpq_class parse_rational(std::string_view text);

mpz_class parse_integer(std::string_view text);

/// Number of bits of |x| (0 for x == 0); an exact integer logarithm.
std::size_t bit_length(const mpz_class& x);

mpz_class ipow(const mpz_class& base, unsigned long exp);

}  // namespace nw
