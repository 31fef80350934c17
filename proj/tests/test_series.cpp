#include <doctest.h>

#include <random>

#include "nw/error.hpp"
#include "nw/series.hpp"
#include "oracles.hpp"

using namespace nw;

namespace {

TruncatedSeries random_series(std::mt19937_64& rng, std::size_t N, int lead_zeros = 0) {
  std::uniform_int_distribution<int> num(-50, 50), den(1, 9);
  std::vector<mpq_class> c(N + 1);
  for (std::size_t i = 0; i <= N; ++i) {
    if (static_cast<int>(i) < lead_zeros) continue;
    c[i] = mpq_class(num(rng), den(rng));
    c[i].canonicalize();
  }
  return TruncatedSeries(std::move(c));
}

std::string code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return "";
}

}  // namespace

TEST_CASE("difference of squares and zero product") {
  const TruncatedSeries a({1, 1, 0, 0, 0, 0}), b({1, -1, 0, 0, 0, 0});
  CHECK(a * b == TruncatedSeries({1, 0, -1, 0, 0, 0}));
  CHECK((a * TruncatedSeries(5)).is_zero());
}

TEST_CASE("E4 cubed against brute-force convolution") {
  const TruncatedSeries e4({1, 240, 2160, 6720});
  const auto cube = e4 * e4 * e4;
  CHECK(cube == TruncatedSeries({1, 720, 179280, 16954560}));
  const auto ref = oracle::convolve(oracle::convolve(oracle::eisenstein(4, 3), oracle::eisenstein(4, 3)),
                                    oracle::eisenstein(4, 3));
  for (std::size_t i = 0; i <= 3; ++i) CHECK(cube[i] == ref[i]);
}

TEST_CASE("truncation is the minimum of the inputs") {
  const TruncatedSeries a({1, 2, 3, 4, 5}), b({1, 1});
  CHECK((a + b).trunc_order() == 1);
  CHECK((a * b).trunc_order() == 1);
  CHECK(code_of([&] { (void)(a * b)[2]; }) == "TruncationTooShort");
  CHECK(code_of([&] { (void)b.truncated(3); }) == "TruncationTooShort");
}

TEST_CASE("division examples and errors") {
  CHECK(series_div(TruncatedSeries({0, 1, -1, 0, 0}), TruncatedSeries({1, -1, 0, 0, 0})) ==
        TruncatedSeries({0, 1, 0, 0, 0}));
  CHECK(series_div(TruncatedSeries::constant(1, 3), TruncatedSeries({1, -1, 0, 0})) ==
        TruncatedSeries({1, 1, 1, 1}));
  CHECK(code_of([] { series_div(TruncatedSeries::constant(1, 3), TruncatedSeries(3)); }) == "DivisorVanishes");
  CHECK(code_of([] { series_div(TruncatedSeries({1, 0, 0}), TruncatedSeries({0, 1, 0})); }) == "OrderMismatch");
}

TEST_CASE("theta and ord") {
  CHECK(theta(TruncatedSeries::constant(1, 5)).is_zero());
  CHECK(theta(TruncatedSeries::monomial(3, 5)) == TruncatedSeries::monomial(3, 5, 3));
  const auto z = ord(TruncatedSeries(10));
  CHECK_FALSE(z.determinate());
  CHECK(z.to_string() == "indeterminate-at-10");
  CHECK(*ord(TruncatedSeries::monomial(4, 10)).value == 4);
}

TEST_CASE("ring properties on random inputs") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t N = 5 + trial % 17;
    const auto a = random_series(rng, N, trial % 3);
    const auto b = random_series(rng, N + trial % 4, trial % 2);
    CHECK((a + b) - b == a.truncated((a + b).trunc_order()));

    const auto prod = a * b;
    std::vector<mpq_class> av(a.coeffs().begin(), a.coeffs().end()), bv(b.coeffs().begin(), b.coeffs().end());
    const auto ref = oracle::convolve(av, bv);
    for (std::size_t i = 0; i <= prod.trunc_order(); ++i) CHECK(prod[i] == ref[i]);

    CHECK(theta(a * b) == theta(a) * b + a * theta(b));

    const auto oa = ord(a), ob = ord(b);
    if (oa.determinate() && ob.determinate() && *oa.value + *ob.value <= prod.trunc_order())
      CHECK(*ord(prod).value == *oa.value + *ob.value);

    if (ob.determinate() && oa.determinate() && *oa.value >= *ob.value) {
      const auto q = series_div(a, b);
      const auto back = b * q;
      const std::size_t top = std::min(back.trunc_order(), a.trunc_order());
      for (std::size_t i = 0; i <= top; ++i) CHECK(back[i] == a[i]);
    }
  }
}

TEST_CASE("text format round trip") {
  std::mt19937_64 rng(11);
  const auto s = random_series(rng, 12, 2);
  const auto text = to_text(s);
  CHECK(text.rfind("N=12\n", 0) == 0);
  CHECK(series_from_text(text) == s);
  CHECK(to_text(series_from_text(text)) == text);
  CHECK(code_of([] { series_from_text("N=2\n0 1/1\n2 3/1\n"); }) == "ParseError");
}

TEST_CASE("Laurent normalization and theta") {
  const LaurentTruncated l(2, TruncatedSeries({0, 3, 5, 7}));
  CHECK(l.pole_order() == 1);
  CHECK(l.coeff(-1) == 3);
  CHECK(l.coeff(1) == 7);
  const auto t = theta(l);
  CHECK(t.coeff(-1) == -3);
  CHECK(t.coeff(0) == 0);
  CHECK(t.coeff(1) == 7);
}
