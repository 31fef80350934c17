#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "nw/auxpoly.hpp"
#include "nw/eisenstein.hpp"
#include "nw/error.hpp"
#include "nw/zeroscope.hpp"
#include "oracles.hpp"

using namespace nw;

namespace {

SparsePoly P4(const std::string& text) { return parse_poly(text, default_names(4)); }

ComplexBall e_minus_2pi(mpfr_prec_t p) { return q_from_tau(ComplexBall::i(p)); }

// ord via direct expansion in the oracle, no shared code with compose_poly.
std::size_t oracle_ord(const SparsePoly& P, std::size_t N) {
  oracle::Poly op;
  for (const auto& [e, c] : P.terms()) op[e] = c;
  const auto s = oracle::compose(op, N);
  for (std::size_t i = 0; i < s.size(); ++i)
    if (s[i] != 0) return i;
  return N + 1;
}

}  // namespace

TEST_CASE("coordinate family") {
  const auto res = multiplicity_scan(make_family("coords"), {});
  REQUIRE(res.records.size() == 4);
  CHECK(res.records[0].label == "x0");
  CHECK(*res.records[0].ord == 1);
  for (std::size_t i = 1; i < 4; ++i) CHECK(*res.records[i].ord == 0);
  CHECK(*res.summary.max_ratio == 1);
  CHECK(!res.summary.any_indeterminate);
}

TEST_CASE("discriminant has order one") {
  const auto rec = measure_multiplicity(P4("x2^3 - x3^2"), 20, 1000);
  CHECK(*rec.ord == 1);
  CHECK(*rec.ratio == mpq_class(1, 81));
}

TEST_CASE("truncation doubles for high order") {
  // (x2^3 - x3^2)^3 vanishes to order 3; q^40 * that to order 43.
  const SparsePoly P = P4("x0^40") * P4("x2^3 - x3^2").pow(3);
  const auto rec = measure_multiplicity(P, 10, 4000);
  CHECK(*rec.ord == 43);
  CHECK(rec.truncation >= 43);
}

TEST_CASE("orders agree with the oracle and add under products") {
  const auto polys = random_family(40, 3, 11);
  for (std::size_t i = 0; i + 1 < polys.size(); i += 2) {
    const auto a = measure_multiplicity(polys[i], 30, 4000);
    const auto b = measure_multiplicity(polys[i + 1], 30, 4000);
    REQUIRE(a.ord);
    REQUIRE(b.ord);
    CHECK(*a.ord == oracle_ord(polys[i], 30));
    const auto ab = measure_multiplicity(polys[i] * polys[i + 1], 30, 4000);
    REQUIRE(ab.ord);
    CHECK(*ab.ord == *a.ord + *b.ord);
  }
}

TEST_CASE("random family is deterministic and non-constant") {
  const auto a = random_family(30, 4, 99), b = random_family(30, 4, 99);
  REQUIRE(a.size() == 30);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i] == b[i]);
    CHECK(a[i].degree() >= 1);
    CHECK(a[i].degree() <= 4);
    CHECK(a[i].is_integral());
  }
  CHECK(!(random_family(5, 4, 1)[0] == random_family(5, 4, 2)[0]));
}

TEST_CASE("no identical vanishing for low-degree random polynomials") {
  const auto res = multiplicity_scan(make_family("random:60:3:5"), {40, 10 * 256, mpq_class(48), 2});
  CHECK(!res.summary.any_indeterminate);
  for (const auto& r : res.records) CHECK(r.ord.has_value());
}

TEST_CASE("auxiliary family within the envelope") {
  const auto res = multiplicity_scan(make_family("aux:3"), {});
  REQUIRE(res.records.size() == 3);
  for (const auto& r : res.records) {
    REQUIRE(r.ord);
    CHECK(*r.ord >= aux_monomial_count(static_cast<unsigned>(r.deg)) / 2);
  }
}

TEST_CASE("envelope violations abort with the counterexample") {
  ScanOptions opts;
  opts.envelope = mpq_class(1, 2);
  try {
    (void)multiplicity_scan(make_family("coords"), opts);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == "EnvelopeViolation");
    CHECK(std::string(e.what()).find("x0") != std::string::npos);
  }
}

TEST_CASE("family specs") {
  const std::string path = "zeroscope_family_test.txt";
  {
    std::ofstream out(path);
    out << "# comment\nx0 + x1 - 1\n\nx2^3 - x3^2  # discriminant\n";
  }
  const auto fam = make_family("file:" + path);
  REQUIRE(fam.size() == 2);
  CHECK(fam[0].P == P4("x0 + x1 - 1"));
  std::remove(path.c_str());
  for (const std::string bad : {"bogus", "random:3", "aux:x", "coords:1"}) {
    try {
      (void)make_family(bad);
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.code() == "UsageError");
    }
  }
  try {
    (void)multiplicity_scan({{P4("7"), "seven"}}, {});
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == "InvalidArgument");
  }
}

TEST_CASE("Cauchy gap: the monomial saturates") {
  const auto res = cauchy_gap_check(P4("x0"), ComplexBall::from_rationals(mpq_class(1, 2), 0, 256), mpq_class(3, 4));
  CHECK(res.m == 1);
  CHECK(res.pass);
  CHECK(res.M.contains(mpq_class(3, 4)));
  // both sides equal log(1/2)
  CHECK(res.log_abs_f.overlaps(res.rhs));
}

TEST_CASE("Cauchy gap at e^{-2 pi}") {
  const mpfr_prec_t p = 256;
  const auto disc = cauchy_gap_check(P4("x2^3 - x3^2"), e_minus_2pi(p), mpq_class(1, 2), p);
  CHECK(disc.m == 1);
  CHECK(disc.strict);
  for (unsigned d = 1; d <= 3; ++d) {
    const auto rep = construct_aux_poly(d);
    const auto res = cauchy_gap_check(rep.poly, e_minus_2pi(p), mpq_class(1, 2), p);
    CHECK(res.m == rep.achieved_ord);
    CHECK(res.strict);
    // positive gap
    CHECK((res.rhs - res.log_abs_f).is_positive());
  }
}

TEST_CASE("Cauchy gap input checks") {
  try {
    (void)cauchy_gap_check(P4("x0"), ComplexBall::from_rationals(mpq_class(4, 5), 0, 64), mpq_class(1, 2));
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == "OutsideDisk");
  }
}
