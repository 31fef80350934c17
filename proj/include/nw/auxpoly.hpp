#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>
#include <vector>

#include "nw/poly.hpp"
#include "nw/series.hpp"
#include "nw/siegel.hpp"

namespace nw {

/// Exponent vectors (j0, j1, j2, j3) with j0 + ... + j3 <= d: total degree
/// ascending, then lexicographically descending. This fixes the column order.
std::vector<Exponents> aux_monomials(unsigned d);

/// binomial(d + 4, 4)
std::size_t aux_monomial_count(unsigned d);

/// r x s matrix whose column J holds the coefficients of q^0..q^(r-1) of
/// q^j0 E2^j1 E4^j2 E6^j3. The bundle is built at truncation N.
/// Errors: TruncationTooShort if N < r; InvalidArgument if d < 1.
IntMatrix build_coeff_matrix(unsigned d, std::size_t r, std::size_t N, unsigned jobs = 1);

enum class OrderRule { HalfColumns, Quartic };

/// floor(s/2) for HalfColumns, floor(d^4/4) for Quartic.
std::size_t default_order(unsigned d, OrderRule rule);

struct AuxPolyReport {
  unsigned d = 0;
  std::size_t r = 0, s = 0;
  SparsePoly poly{4};
  std::size_t achieved_ord = 0;
  std::size_t certification_trunc = 0;
  mpz_class height;
  mpz_class siegel_bound;  // floor of 2 (2 s ||T||)^(r/(s-r))
  mpz_class matrix_height;
  bool within_bound = false;
  std::size_t rank = 0;
  std::string solver_method;
};

/// Builds T, solves T v = 0 with a small integer v, and certifies
/// ord(P o phi) >= r by recomputing the composition at truncation 2r + 8
/// (doubled while the order stays indeterminate).
/// Errors: NotUnderdetermined if r >= s; InvalidArgument if d < 1.
AuxPolyReport construct_aux_poly(unsigned d, std::optional<std::size_t> r = std::nullopt,
                                 OrderRule rule = OrderRule::HalfColumns, unsigned jobs = 1);

struct HeightGrowthRow {
  unsigned d;
  std::size_t r;
  double log_height;
  std::optional<double> ratio;  // log height / (d log d); absent for d = 1
};

std::vector<HeightGrowthRow> height_growth_table(const std::vector<unsigned>& degrees, unsigned jobs = 1);

/// Natural logarithm of a positive integer (diagnostic use only).
double log_mpz(const mpz_class& x);

}  // namespace nw
