#pragma once

#include <gmpxx.h>

#include <array>

#include "nw/poly.hpp"
#include "nw/series.hpp"

namespace nw {

/// Sum of d^e over the positive divisors d of m (trial division up to sqrt m).
mpz_class sigma(unsigned long m, unsigned long e);

/// Normalizing constants c_w of E_w = 1 + c_w * sum sigma_{w-1}(m) q^m for
/// w = 2, 4, 6, derived (not stored) from the Ramanujan system: the q^1 and
/// q^2 coefficients of the three equations pin them uniquely.
struct EisensteinConstants {
  mpq_class c2, c4, c6;
};
const EisensteinConstants& eisenstein_constants();

mpq_class eisenstein_constant(int weight);

/// 1 + c_w sum_{m=1}^{N} sigma_{w-1}(m) q^m, for weight in {2, 4, 6}.
TruncatedSeries eisenstein_series(int weight, std::size_t N);

/// Delta = (E4^3 - E6^2) / 1728, known to order N >= 1.
TruncatedSeries delta_series(std::size_t N);

/// j = E4^3 / Delta as q^(-1) * body; body known to order N - 1.
LaurentTruncated j_series(std::size_t N);

/// phi(q) = (q, E2, E4, E6) at a common truncation order.
struct PhiBundle {
  TruncatedSeries q_series, e2, e4, e6;

  std::size_t trunc_order() const { return q_series.trunc_order(); }
  const TruncatedSeries& coordinate(std::size_t i) const;
};

PhiBundle make_phi(std::size_t N);

/// Residuals of the three Ramanujan equations at truncation N:
/// theta E2 - (E2^2 - E4)/12, theta E4 - (E2 E4 - E6)/3, theta E6 - (E2 E6 - E4^2)/2.
std::array<TruncatedSeries, 3> ramanujan_residuals(const PhiBundle& phi);

/// P(q, E2, E4, E6) for P over x0..x3, known to order `out_trunc`
/// (defaults to the bundle's order). Error: TruncationTooShort.
TruncatedSeries compose_poly(const SparsePoly& P, const PhiBundle& bundle);
TruncatedSeries compose_poly(const SparsePoly& P, const PhiBundle& bundle, std::size_t out_trunc);

}  // namespace nw
