#include "nw/linalg.hpp"

#include <utility>

#include "nw/error.hpp"

namespace nw {

std::vector<QVector> kernel_basis(QMatrix A, std::size_t cols) {
  const std::size_t rows = A.size();
  std::vector<std::size_t> pivot_cols;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t p = r;
    while (p < rows && A[p][c] == 0) ++p;
    if (p == rows) continue;
    std::swap(A[p], A[r]);
    const mpq_class inv = 1 / A[r][c];
    for (std::size_t k = c; k < cols; ++k) A[r][k] *= inv;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || A[i][c] == 0) continue;
      const mpq_class f = A[i][c];
      for (std::size_t k = c; k < cols; ++k)
        if (A[r][k] != 0) A[i][k] -= f * A[r][k];
    }
    pivot_cols.push_back(c);
    ++r;
  }
  std::vector<bool> is_pivot(cols, false);
  for (auto c : pivot_cols) is_pivot[c] = true;

  std::vector<QVector> basis;
  for (std::size_t f = 0; f < cols; ++f) {
    if (is_pivot[f]) continue;
    QVector v(cols);
    v[f] = 1;
    for (std::size_t i = 0; i < pivot_cols.size(); ++i) v[pivot_cols[i]] = -A[i][f];
    basis.push_back(std::move(v));
  }
  return basis;
}

QVector charpoly(const QMatrix& input) {
  const std::size_t n = input.size();
  QMatrix H = input;
  // Similarity reduction to upper Hessenberg form.
  for (std::size_t m = 1; m + 1 < n; ++m) {
    std::size_t p = m;
    while (p < n && H[p][m - 1] == 0) ++p;
    if (p == n) continue;
    if (p != m) {
      std::swap(H[p], H[m]);
      for (std::size_t i = 0; i < n; ++i) std::swap(H[i][p], H[i][m]);
    }
    for (std::size_t i = m + 1; i < n; ++i) {
      if (H[i][m - 1] == 0) continue;
      const mpq_class f = H[i][m - 1] / H[m][m - 1];
      for (std::size_t k = 0; k < n; ++k) H[i][k] -= f * H[m][k];
      for (std::size_t k = 0; k < n; ++k) H[k][m] += f * H[k][i];
    }
  }

  // p_k = det(x I - H[0..k, 0..k]) by the Hessenberg recurrence.
  std::vector<QVector> p(n + 1);
  p[0] = {1};
  for (std::size_t k = 1; k <= n; ++k) {
    const std::size_t j = k - 1;
    QVector pk(k + 1);
    for (std::size_t i = 0; i < p[k - 1].size(); ++i) {
      pk[i + 1] += p[k - 1][i];
      pk[i] -= H[j][j] * p[k - 1][i];
    }
    mpq_class prod = 1;
    for (std::size_t i = j; i-- > 0;) {
      prod *= H[i + 1][i];
      if (prod == 0) break;
      const mpq_class f = prod * H[i][j];
      if (f == 0) continue;
      for (std::size_t t = 0; t < p[i].size(); ++t) pk[t] -= f * p[i][t];
    }
    p[k] = std::move(pk);
  }
  return p[n];
}

mpq_class poly_eval(const QVector& coeffs, const mpq_class& x) {
  mpq_class acc = 0;
  for (std::size_t i = coeffs.size(); i-- > 0;) acc = acc * x + coeffs[i];
  return acc;
}

}  // namespace nw
