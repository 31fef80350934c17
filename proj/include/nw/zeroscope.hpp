#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>
#include <vector>

#include "nw/ball.hpp"
#include "nw/poly.hpp"

namespace nw {

struct MultiplicityRecord {
  SparsePoly P{4};
  int deg = 0;
  std::optional<std::size_t> ord;  // empty when indeterminate at the ceiling
  std::optional<mpq_class> ratio;  // ord / deg^4, present iff ord is
  std::size_t truncation = 0;      // truncation at which ord was settled
  std::string label;
};

struct ScanSummary {
  std::size_t count = 0;
  std::optional<mpq_class> max_ratio;  // empirical C
  bool any_indeterminate = false;
};

struct ScanResult {
  std::vector<MultiplicityRecord> records;  // ratio descending, indeterminate last
  ScanSummary summary;
};

struct ScanOptions {
  std::size_t truncation = 200;
  std::size_t ceiling = 400000;
  std::optional<mpq_class> envelope = mpq_class(48);  // abort when ord > envelope * deg^4
  unsigned jobs = 1;
};

struct FamilyMember {
  SparsePoly P{4};
  std::string label;
};

/// Family specs: "coords", "random:<count>:<maxdeg>:<seed>", "aux:<dmax>",
/// "file:<path>" (one polynomial in x0..x3 per line, '#' comments).
/// Errors: UsageError for a malformed spec, ParseError, InvalidArgument for
/// constant members.
std::vector<FamilyMember> make_family(const std::string& spec, unsigned jobs = 1);

/// Random integer polynomials in x0..x3 of degree 1..maxdeg; about half are
/// recentred to vanish at phi(0) = (0, 1, 1, 1).
std::vector<SparsePoly> random_family(std::size_t count, unsigned maxdeg, std::uint64_t seed);

/// ord_0(P o phi), doubling the truncation while indeterminate up to `ceiling`.
MultiplicityRecord measure_multiplicity(const SparsePoly& P, std::size_t truncation, std::size_t ceiling);

/// Errors: InvalidArgument for constant members; EnvelopeViolation (with the
/// offending polynomial in the message) when a determinate ord exceeds the envelope.
ScanResult multiplicity_scan(const std::vector<FamilyMember>& family, const ScanOptions& opts);

struct CauchyGapResult {
  std::size_t m = 0;          // ord of f = P o phi
  std::size_t truncation = 0;
  RealBall abs_f;             // |f(z)|
  RealBall log_abs_f;         // log |f(z)|; meaningless when abs_f meets 0
  bool f_nonzero = false;
  RealBall M;                 // certified upper bound for max_{|q| = rho} |f(q)|
  RealBall rhs;               // m log(|z|/rho) + log M
  mpq_class M_partial;        // sum_{i <= N} |f_i| rho^i
  RealBall M_tail;            // bound on the rest
  bool pass = false;          // lower(lhs) <= upper(rhs): consistent with the inequality
  bool strict = false;        // upper(lhs) <= lower(rhs): certified
};

/// Checks log|f(z)| <= m log(|z|/rho) + log M(rho) with f = P o phi. The
/// left side comes from direct ball evaluation of P(z, E2(z), E4(z), E6(z)).
/// Errors: IndeterminateOrder; TailBoundFailure; OutsideDisk unless |z| < rho < 1.
CauchyGapResult cauchy_gap_check(const SparsePoly& P, const ComplexBall& z, const mpq_class& rho,
                                 mpfr_prec_t prec = 256, std::size_t truncation = 200);

}  // namespace nw
