#pragma once

// Small dense exact linear algebra over Q.

#include <gmpxx.h>

#include <vector>

namespace nw {

using QMatrix = std::vector<std::vector<mpq_class>>;
using QVector = std::vector<mpq_class>;

/// Basis of the right kernel {x : A x = 0}, one vector per free column of
/// the reduced row echelon form (free entry 1, other free entries 0).
std::vector<QVector> kernel_basis(QMatrix A, std::size_t cols);

/// Characteristic polynomial det(x I - A), coefficients ascending in x
/// (the last one is 1). Computed by Hessenberg reduction.
QVector charpoly(const QMatrix& A);

/// Value of a polynomial (ascending coefficients) at x.
mpq_class poly_eval(const QVector& coeffs, const mpq_class& x);

}  // namespace nw
