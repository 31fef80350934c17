#include "nw/siegel.hpp"

#include <algorithm>
#include <sstream>

#include "nw/error.hpp"
#include "nw/rational.hpp"

namespace nw {

using ZVec = std::vector<mpz_class>;

mpz_class IntMatrix::norm_inf() const {
  mpz_class m = 0;
  for (const auto& row : entries)
    for (const auto& x : row) m = std::max(m, mpz_class(abs(x)));
  return m;
}

IntMatrix parse_int_matrix(const std::string& text) {
  std::istringstream in(text);
  long r = -1, s = -1;
  if (!(in >> r >> s) || r < 0 || s < 0) fail("ParseError", "matrix file must start with 'r s'");
  IntMatrix T(static_cast<std::size_t>(r), static_cast<std::size_t>(s));
  std::string tok;
  for (auto& row : T.entries)
    for (auto& x : row) {
      if (!(in >> tok)) fail("ParseError", "matrix file ends early");
      x = parse_integer(tok);
    }
  if (in >> tok) fail("ParseError", "trailing data after the matrix");
  return T;
}

std::size_t rank(const IntMatrix& T) {
  auto A = T.entries;
  const std::size_t m = T.rows, n = T.cols;
  std::size_t r = 0;
  mpz_class prev = 1;
  for (std::size_t c = 0; c < n && r < m; ++c) {
    std::size_t p = r;
    while (p < m && A[p][c] == 0) ++p;
    if (p == m) continue;
    std::swap(A[p], A[r]);
    for (std::size_t i = r + 1; i < m; ++i) {
      for (std::size_t k = c + 1; k < n; ++k) {
        A[i][k] = A[r][c] * A[i][k] - A[i][c] * A[r][k];
        mpz_divexact(A[i][k].get_mpz_t(), A[i][k].get_mpz_t(), prev.get_mpz_t());
      }
      A[i][c] = 0;
    }
    prev = A[r][c];
    ++r;
  }
  return r;
}

namespace {

mpz_class dot(const ZVec& a, const ZVec& b) {
  mpz_class s = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] != 0 && b[i] != 0) s += a[i] * b[i];
  return s;
}

// Nearest integer to a / b for b > 0, halves rounded up.
mpz_class round_div(const mpz_class& a, const mpz_class& b) {
  mpz_class num = 2 * a + b, den = 2 * b, q;
  mpz_fdiv_q(q.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
  return q;
}

bool lex_less(const ZVec& a, const ZVec& b) { return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end()); }

mpz_class sup_norm(const ZVec& v) {
  mpz_class m = 0;
  for (const auto& x : v) m = std::max(m, mpz_class(abs(x)));
  return m;
}

void sign_normalize(ZVec& v) {
  for (const auto& x : v) {
    if (x == 0) continue;
    if (x < 0)
      for (auto& y : v) y = -y;
    return;
  }
}

bool in_kernel(const IntMatrix& T, const ZVec& v) {
  for (const auto& row : T.entries)
    if (dot(row, v) != 0) return false;
  return true;
}

struct Best {
  ZVec v;
  mpz_class norm;
  bool have = false;

  void offer(ZVec cand) {
    sign_normalize(cand);
    mpz_class n = sup_norm(cand);
    if (n == 0) return;
    if (!have || n < norm || (n == norm && lex_less(cand, v))) {
      v = std::move(cand);
      norm = std::move(n);
      have = true;
    }
  }
};

}  // namespace

void lll_reduce(std::vector<ZVec>& b, long delta_num, long delta_den) {
  const std::size_t n = b.size();
  if (n < 2) return;
  // Integral Gram-Schmidt data: d[i] = det of the Gram matrix of b[0..i-1],
  // lambda[k][j] = d[j+1] * mu[k][j].
  std::vector<mpz_class> d(n + 1);
  std::vector<ZVec> lambda(n, ZVec(n));
  d[0] = 1;
  d[1] = dot(b[0], b[0]);
  if (d[1] == 0) fail("InternalError", "LLL input is linearly dependent");
  std::size_t k = 1, kmax = 0;

  auto red = [&](std::size_t k, std::size_t l) {
    mpz_class twice = 2 * abs(lambda[k][l]);
    if (twice <= d[l + 1]) return;
    const mpz_class q = round_div(lambda[k][l], d[l + 1]);
    for (std::size_t t = 0; t < b[k].size(); ++t)
      if (b[l][t] != 0) b[k][t] -= q * b[l][t];
    lambda[k][l] -= q * d[l + 1];
    for (std::size_t i = 0; i < l; ++i) lambda[k][i] -= q * lambda[l][i];
  };

  auto swap = [&](std::size_t k) {
    std::swap(b[k], b[k - 1]);
    for (std::size_t j = 0; j + 1 < k; ++j) std::swap(lambda[k][j], lambda[k - 1][j]);
    const mpz_class lam = lambda[k][k - 1];
    mpz_class B = d[k - 1] * d[k + 1] + lam * lam;
    mpz_divexact(B.get_mpz_t(), B.get_mpz_t(), d[k].get_mpz_t());
    for (std::size_t i = k + 1; i <= kmax; ++i) {
      const mpz_class t = lambda[i][k];
      mpz_class nk = d[k + 1] * lambda[i][k - 1] - lam * t;
      mpz_divexact(nk.get_mpz_t(), nk.get_mpz_t(), d[k].get_mpz_t());
      mpz_class nk1 = B * t + lam * nk;
      mpz_divexact(nk1.get_mpz_t(), nk1.get_mpz_t(), d[k + 1].get_mpz_t());
      lambda[i][k] = std::move(nk);
      lambda[i][k - 1] = std::move(nk1);
    }
    d[k] = std::move(B);
  };

  while (k < n) {
    if (k > kmax) {
      kmax = k;
      for (std::size_t j = 0; j <= k; ++j) {
        mpz_class u = dot(b[k], b[j]);
        for (std::size_t i = 0; i < j; ++i) {
          u = d[i + 1] * u - lambda[k][i] * lambda[j][i];
          mpz_divexact(u.get_mpz_t(), u.get_mpz_t(), d[i].get_mpz_t());
        }
        if (j < k)
          lambda[k][j] = u;
        else {
          if (u == 0) fail("InternalError", "LLL input is linearly dependent");
          d[k + 1] = u;
        }
      }
    }
    red(k, k - 1);
    const mpz_class lhs = delta_den * d[k + 1] * d[k - 1];
    const mpz_class rhs = delta_num * d[k] * d[k] - delta_den * lambda[k][k - 1] * lambda[k][k - 1];
    if (lhs < rhs) {
      swap(k);
      if (k > 1) --k;
    } else {
      for (std::size_t l = k - 1; l-- > 0;) red(k, l);
      ++k;
    }
  }
}

std::vector<ZVec> integer_kernel(const IntMatrix& T) {
  const std::size_t s = T.cols;
  const std::size_t rk = rank(T);
  const std::size_t dim = s - rk;
  if (dim == 0) return {};
  if (rk == 0) {
    std::vector<ZVec> basis(s, ZVec(s));
    for (std::size_t i = 0; i < s; ++i) basis[i][i] = 1;
    return basis;
  }

  // Rows of T are imposed one at a time. For the current kernel basis b_i
  // and the next row t, reduce (b_i | K * t.b_i): with K large the first
  // n - 1 reduced vectors have zero last entry and span the kernel of t
  // inside the current lattice, so the final basis is saturated. K grows
  // when the separation fails.
  std::vector<ZVec> basis(s, ZVec(s));
  for (std::size_t i = 0; i < s; ++i) basis[i][i] = 1;
  for (const auto& row : T.entries) {
    const std::size_t n = basis.size();
    std::vector<mpz_class> vals(n);
    mpz_class vmax = 0;
    for (std::size_t i = 0; i < n; ++i) {
      vals[i] = dot(row, basis[i]);
      vmax = std::max(vmax, mpz_class(abs(vals[i])));
    }
    if (vmax == 0) continue;
    mpz_class bmax = 1;
    for (const auto& b : basis) bmax = std::max(bmax, sup_norm(b));
    std::size_t bits = n / 2 + 10 + bit_length(bmax) + bit_length(vmax);
    bool separated = false;
    for (int attempt = 0; attempt < 16 && !separated; ++attempt, bits *= 2) {
      mpz_class K = 1;
      K <<= static_cast<mp_bitcnt_t>(bits);
      std::vector<ZVec> emb(n, ZVec(s + 1));
      for (std::size_t i = 0; i < n; ++i) {
        std::copy(basis[i].begin(), basis[i].end(), emb[i].begin());
        emb[i][s] = K * vals[i];
      }
      lll_reduce(emb);
      separated = true;
      for (std::size_t i = 0; i + 1 < n; ++i)
        if (emb[i][s] != 0) separated = false;
      if (!separated) continue;
      basis.clear();
      for (std::size_t i = 0; i + 1 < n; ++i) basis.emplace_back(emb[i].begin(), emb[i].begin() + static_cast<long>(s));
    }
    if (!separated) fail("InternalError", "kernel lattice embedding did not separate");
  }
  if (basis.size() != dim) fail("InternalError", "kernel dimension disagrees with the rank");
  lll_reduce(basis);
  return basis;
}

bool siegel_bound_holds(const mpz_class& norm, std::size_t r, std::size_t s, const mpz_class& matrix_norm) {
  if (r >= s) fail("NotUnderdetermined", "bound needs r < s");
  const mpz_class b = std::max(matrix_norm, mpz_class(1));
  const unsigned long e = s - r;
  const mpz_class lhs = ipow(norm, e);
  const mpz_class rhs = ipow(2, e) * ipow(2 * mpz_class(static_cast<unsigned long>(s)) * b, r);
  return lhs <= rhs;
}

mpz_class siegel_bound_floor(std::size_t r, std::size_t s, const mpz_class& matrix_norm) {
  if (r >= s) fail("NotUnderdetermined", "bound needs r < s");
  const mpz_class b = std::max(matrix_norm, mpz_class(1));
  const mpz_class X = ipow(2, s - r) * ipow(2 * mpz_class(static_cast<unsigned long>(s)) * b, r);
  mpz_class root;
  mpz_root(root.get_mpz_t(), X.get_mpz_t(), s - r);  // floor of the (s-r)-th root
  return root;
}

namespace {

constexpr double kExhaustiveLimit = 5e5;

// Box enumeration over |v_i| <= h; keeps the sup-norm minimum, lex ties.
void exhaustive(const IntMatrix& T, long h, Best& best) {
  const std::size_t s = T.cols;
  std::vector<long> v(s, -h);
  ZVec z(s);
  while (true) {
    bool first_positive = false;
    for (long x : v)
      if (x != 0) {
        first_positive = x > 0;
        break;
      }
    if (first_positive) {
      for (std::size_t i = 0; i < s; ++i) z[i] = v[i];
      if (in_kernel(T, z)) best.offer(z);
    }
    std::size_t i = s;
    while (i-- > 0) {
      if (v[i] < h) {
        ++v[i];
        break;
      }
      v[i] = -h;
    }
    if (i == static_cast<std::size_t>(-1)) return;
  }
}

}  // namespace

SiegelResult small_kernel(const IntMatrix& T) {
  const std::size_t r = T.rows, s = T.cols;
  if (r >= s)
    fail("NotUnderdetermined", "need fewer equations than unknowns (r=" + std::to_string(r) + ", s=" + std::to_string(s) + ")");
  for (const auto& row : T.entries)
    if (row.size() != s) fail("InvalidArgument", "ragged matrix");

  SiegelResult out;
  out.rank = rank(T);
  const mpz_class tn = T.norm_inf();

  Best best;
  const auto kernel = integer_kernel(T);
  for (std::size_t i = 0; i < kernel.size(); ++i) {
    best.offer(kernel[i]);
    for (std::size_t j = i + 1; j < kernel.size(); ++j) {
      ZVec plus(s), minus(s);
      for (std::size_t t = 0; t < s; ++t) {
        plus[t] = kernel[i][t] + kernel[j][t];
        minus[t] = kernel[i][t] - kernel[j][t];
      }
      best.offer(plus);
      best.offer(minus);
    }
  }
  out.method = "lattice";

  if (s <= 6 && best.have && best.norm.fits_slong_p()) {
    const long h = best.norm.get_si();
    double boxes = 1;
    for (std::size_t i = 0; i < s; ++i) boxes *= 2.0 * static_cast<double>(h) + 1;
    if (boxes <= kExhaustiveLimit) {
      Best ex;
      exhaustive(T, h, ex);
      if (ex.have) best = ex;
      out.method = "exhaustive";
    }
  }

  if (!best.have) fail("InternalError", "no kernel vector found");
  if (!in_kernel(T, best.v)) fail("InternalError", "kernel vector fails T v = 0");
  out.vector = best.v;
  out.norm = best.norm;
  out.bound_floor = siegel_bound_floor(r, s, tn);
  out.within_bound = siegel_bound_holds(out.norm, r, s, tn);
  return out;
}

}  // namespace nw
