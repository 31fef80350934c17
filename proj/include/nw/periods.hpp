#pragma once

#include <gmpxx.h>

#include <array>

#include "nw/ball.hpp"

namespace nw {

/// Gamma function with a certified remainder: incomplete-gamma series on a
/// shifted argument with 1/2 <= Re s <= 3/2, then the functional equation.
/// Error: PoleProximity when the ball meets a non-positive integer.
ComplexBall gamma(const ComplexBall& s, mpfr_prec_t prec);
RealBall gamma(const mpq_class& s, mpfr_prec_t prec);

/// B(a, b) = Gamma(a) Gamma(b) / Gamma(a + b). Requires Re a, Re b > 0.
ComplexBall beta(const ComplexBall& a, const ComplexBall& b, mpfr_prec_t prec);
RealBall beta(const mpq_class& a, const mpq_class& b, mpfr_prec_t prec);

/// y^2 = 4x^3 - u x - v.
struct EllipticCurveQ {
  mpq_class u, v;
  mpq_class discriminant() const { return u * u * u - 27 * v * v; }
};

struct PeriodData {
  ComplexBall omega1, omega2, eta1, eta2, tau;
  ComplexBall legendre_residual;  // omega1 eta2 - omega2 eta1 - 2 pi i
  std::array<ComplexBall, 3> roots;
  std::size_t nodes = 0;  // quadrature nodes per segment (largest)
};

/// Periods and quasi-periods of dx/y and x dx/y over the loops around the
/// root segments [r0, r1] and [r1, r2] (roots sorted by real part, then
/// imaginary part). Normalized so that Im tau > 0 and Re omega1 > 0.
/// Error: Degenerate.
PeriodData elliptic_periods(const EllipticCurveQ& curve, mpfr_prec_t prec);

/// Moves tau into the standard fundamental domain by a change of basis
/// applied to (omega, eta). Returns the SL2(Z) matrix used (a b; c d), with
/// new omega2 = a omega2 + b omega1 and new omega1 = c omega2 + d omega1.
std::array<long, 4> reduce_basis(PeriodData& pd);

struct Prop47Result {
  PeriodData periods;  // after reduce_basis
  std::array<long, 4> reduction;
  ComplexBall e2, e4, e6;              // at q = exp(2 pi i tau)
  ComplexBall rhs2, rhs4, rhs6;        // 12 w (eta1/2 pi i), 12 u w^4, -216 v w^6, w = omega1/(2 pi i)
  ComplexBall r2, r4, r6;              // differences
  bool all_contain_zero() const { return r2.contains_zero() && r4.contains_zero() && r6.contains_zero(); }
};

Prop47Result prop47_check(const EllipticCurveQ& curve, mpfr_prec_t prec);

/// Fejer's first rule for an integral over [-1, 1]: nodes cos((2j-1) pi/(2n))
/// and positive weights summing to 2; exact for degree < n.
struct FejerRule {
  std::vector<RealBall> nodes, weights;
};
FejerRule fejer_rule(std::size_t n, mpfr_prec_t prec);

struct HyperellipticResult {
  unsigned k = 0, l = 0;
  RealBall segment;         // quadrature of int_0^1 x^(k-1) (1 - x^5)^(-1/2) dx
  RealBall segment_closed;  // B(k/5, 1/2) / 5
  ComplexBall loop;         // quadrature value of the loop integral over gamma_l
  ComplexBall closed;       // (2/5) zeta^(k(l-1)) (1 - zeta^k) B(k/5, 1/2)
  ComplexBall residual;     // loop - closed
  std::size_t nodes = 0;
};

/// Loop integral of x^(k-1) dx / y on y^2 = 1 - x^5, built from the base
/// segment and the pullbacks under x -> zeta x and y -> -y.
/// Error: InvalidArgument unless 1 <= k, l <= 4.
HyperellipticResult hyperelliptic_c5_periods(unsigned k, unsigned l, mpfr_prec_t prec);

}  // namespace nw
