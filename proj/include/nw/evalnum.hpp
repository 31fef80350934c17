#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>
#include <vector>

#include "nw/ball.hpp"
#include "nw/poly.hpp"
#include "nw/series.hpp"

namespace nw {

/// Upper bound for sum_{m>N} m^a t^m, namely (a+1)! t^(N+1) (N+1)^a / (1-t)^(a+1).
/// Requires 0 <= t < 1 (OutsideDisk otherwise).
BigFloat power_tail_bound(unsigned a, std::size_t N, const BigFloat& t);

/// sum_{i<=N} s_i z^i for a truncated series, by Horner's rule.
ComplexBall eval_partial_sum(const TruncatedSeries& s, const ComplexBall& z);

/// A series of E-type for weight w (coefficients bounded by |c_w| m^w) at z:
/// the partial sum plus the tail bound |c_w| (a+1)! t^(N+1) (N+1)^a/(1-t)^(a+1),
/// a = w, t = |z| + radius. Error: OutsideDisk.
ComplexBall eval_series(const TruncatedSeries& s, const ComplexBall& z, int weight);

/// E_w(z) for w in {2, 4, 6}; the number of terms grows until the tail
/// bound is below 2^(-prec+4). Error: OutsideDisk.
ComplexBall eval_eisenstein(int weight, const ComplexBall& z, mpfr_prec_t prec);

/// 1 + |c_w| sum sigma_{w-1}(m) t^m for real t in [0, 1): the coefficientwise
/// majorant of E_w.
RealBall eisenstein_majorant(int weight, const RealBall& t, mpfr_prec_t prec);

/// Terms used by eval_eisenstein for the given precision and |z| bound.
std::size_t eisenstein_terms(int weight, const BigFloat& t, mpfr_prec_t prec);

/// Value of P at ball arguments.
ComplexBall eval_poly(const SparsePoly& P, const std::vector<ComplexBall>& args);

struct TransformResidues {
  ComplexBall r2, r4, r6;
  ComplexBall tau, gamma_tau;
  bool all_contain_zero() const { return r2.contains_zero() && r4.contains_zero() && r6.contains_zero(); }
};

/// E2(g tau) - (c tau + d)^2 E2(tau) - 12 c (c tau + d)/(2 pi i), and
/// E_k(g tau) - (c tau + d)^k E_k(tau) for k = 4, 6.
/// Errors: NotUnimodular; OutsideDisk if Im tau (or Im g tau) is not positive.
TransformResidues quasimodular_transform_check(long a, long b, long c, long d, const ComplexBall& tau,
                                               mpfr_prec_t prec);

struct PhilipponRow {
  unsigned d;
  std::size_t m;  // certified order of P_d o phi
  unsigned k;
  RealBall log_abs;  // log |Q(z, E2(z), E4(z), E6(z))|, Q = w^[k] P_d
  int deg_q;
  double log_height_q;
  double ratio;  // midpoint of log_abs / d^4
  bool outside_window;
  mpfr_prec_t prec_used;
};

struct PhilipponOptions {
  std::vector<unsigned> degrees;
  std::vector<unsigned> k_schedule{0, 1, 2};
  double window_a = 10.0, window_b = 0.0;  // flags rows with ratio outside [-a, -b]
  mpfr_prec_t start_prec = 128;
  unsigned jobs = 1;
};

std::vector<PhilipponRow> philippon_window(const ComplexBall& z, const PhilipponOptions& opts);

struct ConvergentRecord {
  mpz_class p, q;
  mpq_class gap_lower;  // certified lower bound for q^d |alpha - p/q|
  bool certified;       // gap_lower >= upper bound of c
};

struct LiouvilleResult {
  std::vector<mpz_class> minpoly;  // ascending coefficients
  unsigned degree = 0;
  mpq_class alpha_lo, alpha_hi;    // isolating interval of the chosen root
  mpq_class M_lo, M_hi;            // enclosure of sum_{i>=1} |P^(i)(alpha)/i!|
  mpq_class c_lo, c_hi;            // enclosure of min{1, 1/(2M)}
  std::vector<ConvergentRecord> records;
  bool pass = false;
};

/// Real roots of a squarefree integer polynomial isolated by Sturm sequences
/// and bisection; returns disjoint rational intervals in increasing order.
std::vector<std::pair<mpq_class, mpq_class>> isolate_real_roots(const std::vector<mpz_class>& ascending);

/// Continued-fraction convergents p/q (q <= q_max) of a real algebraic
/// number, each certified: q^d |alpha - p/q| >= c with c = min{1, 1/(2M)}.
/// `coeffs_descending` lists the integer coefficients from the leading one
/// down; `root_index` picks a real root in increasing order (default: the
/// largest). Errors: ReduciblePolynomial (degree < 2, a rational root, or a
/// repeated factor); NoRealRoot.
LiouvilleResult liouville_check(const std::vector<mpz_class>& coeffs_descending, const mpz_class& q_max,
                                std::optional<std::size_t> root_index = std::nullopt);

}  // namespace nw
