#include "nw/eisenstein.hpp"

#include <map>

#include "nw/error.hpp"
#include "nw/rational.hpp"

namespace nw {

mpz_class sigma(unsigned long m, unsigned long e) {
  if (m == 0) fail("InvalidArgument", "sigma is defined for m >= 1");
  mpz_class sum = 0, t;
  for (unsigned long d = 1; d * d <= m; ++d) {
    if (m % d) continue;
    mpz_ui_pow_ui(t.get_mpz_t(), d, e);
    sum += t;
    const unsigned long co = m / d;
    if (co != d) {
      mpz_ui_pow_ui(t.get_mpz_t(), co, e);
      sum += t;
    }
  }
  return sum;
}

namespace {

// Write E2 = 1 + a S1, E4 = 1 + b S3, E6 = 1 + c S5 with S_k = sum sigma_k(m) q^m.
//
// q^1 of  theta E2 = (E2^2 - E4)/12   :  a = (2a - b)/12          => b = -10 a
// q^1 of  theta E4 = (E2 E4 - E6)/3   :  b = (a + b - c)/3        => c = a - 2b
// q^1 of  theta E6 = (E2 E6 - E4^2)/2 :  c = (a + c - 2b)/2       (same relation)
// q^2 of  theta E2                    :  2 a s1(2) = (2 a s1(2) + a^2 - b s3(2))/12
//   => a^2 = a (22 s1(2) + (b/a) s3(2)), and a != 0 fixes a.
EisensteinConstants derive_constants() {
  const mpq_class b_over_a = mpq_class(2 - 12, 1);    // from 12a = 2a - b
  const mpq_class c_over_a = 1 - 2 * b_over_a;        // from 3b = a + b - c
  if (2 * c_over_a != 1 + c_over_a - 2 * b_over_a)  // q^1 of the E6 equation
    fail("InternalError", "inconsistent first-order Ramanujan relations");
  const mpq_class s1_2(sigma(2, 1)), s3_2(sigma(2, 3));
  const mpq_class a = (24 - 2) * s1_2 + b_over_a * s3_2;
  return {a, b_over_a * a, c_over_a * a};
}

}  // namespace

const EisensteinConstants& eisenstein_constants() {
  static const EisensteinConstants constants = derive_constants();
  return constants;
}

mpq_class eisenstein_constant(int weight) {
  const auto& k = eisenstein_constants();
  switch (weight) {
    case 2: return k.c2;
    case 4: return k.c4;
    case 6: return k.c6;
    default: fail("InvalidArgument", "Eisenstein weight must be 2, 4 or 6");
  }
}

TruncatedSeries eisenstein_series(int weight, std::size_t N) {
  const mpq_class c = eisenstein_constant(weight);
  std::vector<mpq_class> coeffs(N + 1);
  coeffs[0] = 1;
  for (std::size_t m = 1; m <= N; ++m) coeffs[m] = c * mpq_class(sigma(m, static_cast<unsigned long>(weight - 1)));
  return TruncatedSeries(std::move(coeffs));
}

TruncatedSeries delta_series(std::size_t N) {
  if (N < 1) fail("InvalidArgument", "Delta needs truncation order >= 1");
  const auto e4 = eisenstein_series(4, N);
  const auto e6 = eisenstein_series(6, N);
  return mpq_class(1, 1728) * (series_pow(e4, 3) - e6 * e6);
}

LaurentTruncated j_series(std::size_t N) {
  const auto delta = delta_series(N);
  const auto e4 = eisenstein_series(4, N);
  // Delta = q * D with D(0) = 1, so j = q^(-1) * E4^3 / D.
  const auto d = series_div(delta, TruncatedSeries::monomial(1, N));
  return LaurentTruncated(1, series_div(series_pow(e4, 3).truncated(d.trunc_order()), d));
}

const TruncatedSeries& PhiBundle::coordinate(std::size_t i) const {
  switch (i) {
    case 0: return q_series;
    case 1: return e2;
    case 2: return e4;
    case 3: return e6;
    default: fail("ArityMismatch", "phi has four coordinates");
  }
}

PhiBundle make_phi(std::size_t N) {
  return {TruncatedSeries::monomial(1, N), eisenstein_series(2, N), eisenstein_series(4, N), eisenstein_series(6, N)};
}

std::array<TruncatedSeries, 3> ramanujan_residuals(const PhiBundle& phi) {
  const auto& e2 = phi.e2;
  const auto& e4 = phi.e4;
  const auto& e6 = phi.e6;
  return {theta(e2) - mpq_class(1, 12) * (e2 * e2 - e4), theta(e4) - mpq_class(1, 3) * (e2 * e4 - e6),
          theta(e6) - mpq_class(1, 2) * (e2 * e6 - e4 * e4)};
}

TruncatedSeries compose_poly(const SparsePoly& P, const PhiBundle& bundle) {
  return compose_poly(P, bundle, bundle.trunc_order());
}

TruncatedSeries compose_poly(const SparsePoly& P, const PhiBundle& bundle, std::size_t out_trunc) {
  if (P.nvars() != 4) fail("ArityMismatch", "compose_poly expects a polynomial in x0..x3");
  if (bundle.trunc_order() < out_trunc)
    fail("TruncationTooShort", "bundle known to order " + std::to_string(bundle.trunc_order()) +
                                   " but order " + std::to_string(out_trunc) + " requested");

  // Power tables and a cache of E2^a E4^b E6^c products, keyed by (a, b, c).
  std::array<std::vector<TruncatedSeries>, 3> powers;
  for (std::size_t v = 0; v < 3; ++v) powers[v].push_back(TruncatedSeries::constant(1, out_trunc));
  auto power = [&](std::size_t v, std::uint32_t k) -> const TruncatedSeries& {
    auto& table = powers[v];
    while (table.size() <= k) table.push_back(table.back() * bundle.coordinate(v + 1).truncated(out_trunc));
    return table[k];
  };
  std::map<std::array<std::uint32_t, 3>, TruncatedSeries> products;

  TruncatedSeries sum(out_trunc);
  for (const auto& [e, c] : P.terms()) {
    if (e[0] > out_trunc) continue;
    const std::array<std::uint32_t, 3> key{e[1], e[2], e[3]};
    auto it = products.find(key);
    if (it == products.end()) {
      TruncatedSeries prod = power(0, e[1]);
      if (e[2]) prod = prod * power(1, e[2]);
      if (e[3]) prod = prod * power(2, e[3]);
      it = products.emplace(key, std::move(prod)).first;
    }
    sum = sum + c * shift_up(it->second, e[0]).truncated(out_trunc);
  }
  return sum;
}

}  // namespace nw
