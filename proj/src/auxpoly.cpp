#include "nw/auxpoly.hpp"

#include <array>
#include <cmath>

#include "nw/eisenstein.hpp"
#include "nw/error.hpp"
#include "nw/parallel.hpp"

namespace nw {

std::vector<Exponents> aux_monomials(unsigned d) {
  std::vector<Exponents> out;
  for (unsigned deg = 0; deg <= d; ++deg)
    for (unsigned j0 = deg + 1; j0-- > 0;)
      for (unsigned j1 = deg - j0 + 1; j1-- > 0;)
        for (unsigned j2 = deg - j0 - j1 + 1; j2-- > 0;) out.push_back({j0, j1, j2, deg - j0 - j1 - j2});
  return out;
}

std::size_t aux_monomial_count(unsigned d) {
  const std::size_t n = d;
  return (n + 1) * (n + 2) * (n + 3) * (n + 4) / 24;
}

IntMatrix build_coeff_matrix(unsigned d, std::size_t r, std::size_t N, unsigned jobs) {
  if (d < 1) fail("InvalidArgument", "degree budget d must be >= 1");
  if (N < r) fail("TruncationTooShort", "truncation " + std::to_string(N) + " below the row count " + std::to_string(r));
  const auto monos = aux_monomials(d);
  IntMatrix T(r, monos.size());
  if (r == 0) return T;

  const std::size_t top = r - 1;
  const PhiBundle phi = make_phi(N);
  std::array<std::vector<TruncatedSeries>, 3> powers;
  for (std::size_t v = 0; v < 3; ++v) {
    const TruncatedSeries base = phi.coordinate(v + 1).truncated(top);
    powers[v].push_back(TruncatedSeries::constant(1, top));
    for (unsigned k = 1; k <= d; ++k) powers[v].push_back(powers[v].back() * base);
  }

  parallel_for(monos.size(), jobs, [&](std::size_t col) {
    const auto& e = monos[col];
    if (e[0] > top) return;  // q^j0 vanishes on the first r coefficients
    const TruncatedSeries prod = powers[0][e[1]] * powers[1][e[2]] * powers[2][e[3]];
    for (std::size_t i = e[0]; i <= top; ++i) {
      const mpq_class& c = prod[i - e[0]];
      if (c.get_den() != 1) fail("InternalError", "non-integral coefficient in the auxiliary matrix");
      T.entries[i][col] = c.get_num();
    }
  });
  return T;
}

std::size_t default_order(unsigned d, OrderRule rule) {
  if (rule == OrderRule::HalfColumns) return aux_monomial_count(d) / 2;
  const std::size_t n = d;
  return n * n * n * n / 4;
}

AuxPolyReport construct_aux_poly(unsigned d, std::optional<std::size_t> r_opt, OrderRule rule, unsigned jobs) {
  if (d < 1) fail("InvalidArgument", "degree budget d must be >= 1");
  AuxPolyReport rep;
  rep.d = d;
  rep.s = aux_monomial_count(d);
  rep.r = r_opt ? *r_opt : default_order(d, rule);
  if (rep.r >= rep.s)
    fail("NotUnderdetermined", "r = " + std::to_string(rep.r) + " is not below s = " + std::to_string(rep.s));

  const IntMatrix T = build_coeff_matrix(d, rep.r, rep.r, jobs);
  rep.matrix_height = T.norm_inf();
  const SiegelResult sol = small_kernel(T);
  rep.rank = sol.rank;
  rep.solver_method = sol.method;
  rep.siegel_bound = sol.bound_floor;

  const auto monos = aux_monomials(d);
  for (std::size_t j = 0; j < monos.size(); ++j)
    if (sol.vector[j] != 0) rep.poly.add_term(monos[j], mpq_class(sol.vector[j]));
  rep.height = sol.norm;
  rep.within_bound = sol.within_bound;

  // Independent recomputation of the composition.
  std::size_t trunc = 2 * rep.r + 8;
  for (;;) {
    const Order o = ord(compose_poly(rep.poly, make_phi(trunc)));
    if (o.determinate()) {
      rep.achieved_ord = *o.value;
      break;
    }
    if (trunc > 400000) fail("IndeterminateOrder", "composition vanishes to the truncation ceiling");
    trunc *= 2;
  }
  rep.certification_trunc = trunc;
  if (rep.achieved_ord < rep.r)
    fail("InternalError", "certified order " + std::to_string(rep.achieved_ord) + " is below r = " + std::to_string(rep.r));
  return rep;
}

double log_mpz(const mpz_class& x) {
  if (x <= 0) fail("InvalidArgument", "log of a non-positive integer");
  long e = 0;
  const double m = mpz_get_d_2exp(&e, x.get_mpz_t());
  return std::log(m) + static_cast<double>(e) * std::log(2.0);
}

std::vector<HeightGrowthRow> height_growth_table(const std::vector<unsigned>& degrees, unsigned jobs) {
  std::vector<HeightGrowthRow> rows(degrees.size());
  parallel_for(degrees.size(), jobs, [&](std::size_t i) {
    const auto rep = construct_aux_poly(degrees[i]);
    HeightGrowthRow row{degrees[i], rep.r, log_mpz(rep.height), std::nullopt};
    if (degrees[i] > 1) row.ratio = row.log_height / (degrees[i] * std::log(static_cast<double>(degrees[i])));
    rows[i] = row;
  });
  return rows;
}

}  // namespace nw
