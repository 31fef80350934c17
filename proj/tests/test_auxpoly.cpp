#include <doctest.h>

#include "nw/auxpoly.hpp"
#include "nw/eisenstein.hpp"
#include "nw/error.hpp"
#include "nw/rational.hpp"
#include "oracles.hpp"

using namespace nw;

namespace {

// |t_{i,J}| <= (504 (i+1)^6 (d+1))^d
mpz_class entry_bound(std::size_t i, unsigned d) {
  return ipow(504 * ipow(mpz_class(i + 1), 6) * (d + 1), d);
}

template <class Fn>
void expect_code(const std::string& code, Fn&& fn) {
  try {
    fn();
    FAIL("expected " << code);
  } catch (const Error& e) {
    CHECK(e.code() == code);
  }
}

}  // namespace

TEST_CASE("monomial columns") {
  for (unsigned d = 1; d <= 5; ++d) CHECK(aux_monomials(d).size() == aux_monomial_count(d));
  const auto m = aux_monomials(1);
  REQUIRE(m.size() == 5);
  CHECK(m[0] == Exponents{0, 0, 0, 0});
  CHECK(m[1] == Exponents{1, 0, 0, 0});
  CHECK(m[4] == Exponents{0, 0, 0, 1});
  CHECK(default_order(2, OrderRule::HalfColumns) == 7);
  CHECK(default_order(4, OrderRule::Quartic) == 64);
}

TEST_CASE("matrix columns agree with direct expansion and obey the entry bound") {
  for (unsigned d = 1; d <= 3; ++d) {
    const std::size_t r = aux_monomial_count(d);
    const IntMatrix T = build_coeff_matrix(d, r, r, 2);
    const auto monos = aux_monomials(d);
    for (std::size_t J = 0; J < monos.size(); ++J) {
      oracle::Poly p;
      p[oracle::Mono(monos[J].begin(), monos[J].end())] = 1;
      const auto col = oracle::compose(p, r);
      for (std::size_t i = 0; i < r; ++i) {
        CHECK(mpq_class(T.entries[i][J]) == col[i]);
        CHECK(abs(T.entries[i][J]) <= entry_bound(i, d));
      }
    }
  }
}

TEST_CASE("auxiliary polynomials for d = 1, 2, 3") {
  for (unsigned d = 1; d <= 3; ++d) {
    const auto rep = construct_aux_poly(d);
    CHECK(rep.s == aux_monomial_count(d));
    CHECK(rep.r == rep.s / 2);
    CHECK(rep.poly.is_integral());
    CHECK(!rep.poly.is_zero());
    CHECK(rep.achieved_ord >= rep.r);
    CHECK(rep.within_bound);
    CHECK(siegel_bound_holds(rep.height, rep.r, rep.s, rep.matrix_height));
    // independent order check through the oracle expansion
    oracle::Poly p;
    for (const auto& [e, c] : rep.poly.terms()) p[oracle::Mono(e.begin(), e.end())] = c;
    const auto f = oracle::compose(p, rep.r + 2);
    for (std::size_t i = 0; i < rep.r; ++i) CHECK(f[i] == 0);
  }
}

TEST_CASE("construction is deterministic") {
  const auto a = construct_aux_poly(2), b = construct_aux_poly(2, std::nullopt, OrderRule::HalfColumns, 3);
  CHECK(a.poly == b.poly);
  CHECK(a.height == b.height);
}

TEST_CASE("explicit and quartic orders") {
  const auto rep = construct_aux_poly(2, 4);
  CHECK(rep.r == 4);
  CHECK(rep.achieved_ord >= 4);
  const auto q = construct_aux_poly(2, std::nullopt, OrderRule::Quartic);
  CHECK(q.r == 4);
  expect_code("NotUnderdetermined", [] { (void)construct_aux_poly(5, std::nullopt, OrderRule::Quartic); });
  expect_code("NotUnderdetermined", [] { (void)construct_aux_poly(1, 5); });
  expect_code("InvalidArgument", [] { (void)construct_aux_poly(0); });
  expect_code("TruncationTooShort", [] { (void)build_coeff_matrix(2, 10, 5); });
}

TEST_CASE("height growth table") {
  CHECK(height_growth_table({}).empty());
  const auto one = height_growth_table({2});
  REQUIRE(one.size() == 1);
  CHECK(one[0].ratio.has_value());
  const auto rows = height_growth_table({1, 2, 3}, 2);
  REQUIRE(rows.size() == 3);
  CHECK(!rows[0].ratio.has_value());
  for (const auto& r : rows) CHECK(r.log_height >= 0);
}
