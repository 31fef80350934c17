#pragma once

#include <gmpxx.h>

#include <string>
#include <vector>

namespace nw {

struct IntMatrix {
  std::size_t rows = 0, cols = 0;
  std::vector<std::vector<mpz_class>> entries;

  IntMatrix() = default;
  IntMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), entries(r, std::vector<mpz_class>(c)) {}

  mpz_class norm_inf() const;
};

/// "r s" on the first line, then r lines of s integers.
IntMatrix parse_int_matrix(const std::string& text);

/// Rank over Q by fraction-free (Bareiss) elimination.
std::size_t rank(const IntMatrix& T);

/// Integral LLL reduction (exact, no floating point) of the rows of `basis`,
/// which must be linearly independent. delta = delta_num / delta_den.
void lll_reduce(std::vector<std::vector<mpz_class>>& basis, long delta_num = 99, long delta_den = 100);

/// Basis of the lattice {x in Z^s : T x = 0}, LLL-reduced.
std::vector<std::vector<mpz_class>> integer_kernel(const IntMatrix& T);

struct SiegelResult {
  std::vector<mpz_class> vector;
  mpz_class norm;           // max |v_i|
  mpz_class bound_floor;    // floor of 2 (2 s b)^(r/(s-r)), b = max(||T||, 1)
  bool within_bound = false;
  std::size_t rank = 0;
  std::string method;       // "exhaustive" or "lattice"
};

/// Nonzero integer v with T v = 0 and ||v|| <= 2 (2 s b)^(r/(s-r)).
/// Among the candidates examined, the smallest sup-norm wins; ties go to the
/// lexicographically smallest vector with positive first nonzero entry.
/// Error: NotUnderdetermined if r >= s.
SiegelResult small_kernel(const IntMatrix& T);

/// Exact check of ||v|| <= 2 (2 s b)^(r/(s-r)):  ||v||^(s-r) <= 2^(s-r) (2 s b)^r.
bool siegel_bound_holds(const mpz_class& norm, std::size_t r, std::size_t s, const mpz_class& matrix_norm);
mpz_class siegel_bound_floor(std::size_t r, std::size_t s, const mpz_class& matrix_norm);

}  // namespace nw
