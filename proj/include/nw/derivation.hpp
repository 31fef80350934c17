#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>
#include <vector>

#include "nw/poly.hpp"

namespace nw {

/// Polynomial vector field sum_i components[i] * d/dx_i.
class Derivation {
 public:
  explicit Derivation(std::vector<SparsePoly> components);

  std::size_t nvars() const { return components_.size(); }
  const std::vector<SparsePoly>& components() const { return components_; }
  const SparsePoly& component(std::size_t i) const { return components_.at(i); }

 private:
  std::vector<SparsePoly> components_;
};

/// D(P) = sum_i D_i * dP/dx_i. Error: ArityMismatch.
SparsePoly apply(const Derivation& D, const SparsePoly& P);

/// The Ramanujan field on (x1, x2, x3) = (E2, E4, E6), written on three
/// variables:  (x1^2 - x2)/12 d1 + (x1 x2 - x3)/3 d2 + (x1 x3 - x2^2)/2 d3.
Derivation ramanujan_v();

/// x0 d0 + v on four variables (x0 = q).
Derivation ramanujan_w();

/// 12^k * w o (w - 1) o ... o (w - (k-1)) applied to P; the rightmost factor
/// acts first.
SparsePoly iterated_wk(const SparsePoly& P, unsigned k);

/// Cofactor Q with D(P) = Q * P, or nullopt when P does not divide D(P).
/// Error: InvalidArgument for P = 0.
std::optional<SparsePoly> invariance_check(const Derivation& D, const SparsePoly& P);

struct DarbouxPolynomial {
  SparsePoly poly;  // primitive, integer coefficients
  mpq_class cofactor;
};

struct DarbouxFamily {
  mpq_class eigenvalue;
  std::size_t dimension;  // eigenspace dimension (modulo constants) beyond lower-degree products
  std::vector<SparsePoly> basis;
};

struct DarbouxResult {
  std::vector<DarbouxPolynomial> polynomials;
  /// Eigenspaces of dimension > 1 whose irreducible members are not
  /// enumerated individually.
  std::vector<DarbouxFamily> families;
  bool non_rational_eigenvalue = false;
  /// False when families were found or non-rational eigenvalues occurred.
  bool complete = true;
};

/// Irreducible P of degree <= maxdeg with D(P) = lambda * P, lambda constant.
/// Requires every component to have degree <= 1 (DegreeRaisingField otherwise).
DarbouxResult darboux_search(const Derivation& D, unsigned maxdeg);

/// Reads a field from text: a line "vars <name> <name> ...", then one
/// component polynomial per line in variable order. '#' starts a comment.
struct NamedDerivation {
  Derivation field;
  std::vector<std::string> names;
};
NamedDerivation parse_derivation(const std::string& text);

}  // namespace nw
