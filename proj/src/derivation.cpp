#include "nw/derivation.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

#include "nw/error.hpp"
#include "nw/linalg.hpp"
#include "nw/rational.hpp"

namespace nw {

Derivation::Derivation(std::vector<SparsePoly> components) : components_(std::move(components)) {
  for (const auto& c : components_)
    if (c.nvars() != components_.size())
      fail("ArityMismatch", "derivation components must live in the field's own variables");
}

SparsePoly apply(const Derivation& D, const SparsePoly& P) {
  if (P.nvars() != D.nvars())
    fail("ArityMismatch", "derivation on " + std::to_string(D.nvars()) + " variables applied to a polynomial in " +
                              std::to_string(P.nvars()));
  SparsePoly out(P.nvars());
  for (std::size_t i = 0; i < D.nvars(); ++i) {
    if (D.component(i).is_zero()) continue;
    const SparsePoly dp = P.partial(i);
    if (!dp.is_zero()) out = out + D.component(i) * dp;
  }
  return out;
}

namespace {

SparsePoly var(std::size_t n, std::size_t i) { return SparsePoly::variable(n, i); }

std::vector<SparsePoly> v_components(std::size_t n, std::size_t off) {
  const auto x1 = var(n, off), x2 = var(n, off + 1), x3 = var(n, off + 2);
  return {mpq_class(1, 12) * (x1 * x1 - x2), mpq_class(1, 3) * (x1 * x2 - x3), mpq_class(1, 2) * (x1 * x3 - x2 * x2)};
}

}  // namespace

Derivation ramanujan_v() { return Derivation(v_components(3, 0)); }

Derivation ramanujan_w() {
  auto v = v_components(4, 1);
  return Derivation({var(4, 0), v[0], v[1], v[2]});
}

SparsePoly iterated_wk(const SparsePoly& P, unsigned k) {
  static const Derivation w = ramanujan_w();
  SparsePoly Q = P;
  for (unsigned j = k; j-- > 0;) Q = apply(w, Q) - mpq_class(j) * Q;
  if (k == 0) return Q;
  return mpq_class(ipow(12, k)) * Q;
}

std::optional<SparsePoly> invariance_check(const Derivation& D, const SparsePoly& P) {
  if (P.is_zero()) fail("InvalidArgument", "invariance_check needs a nonzero polynomial");
  return exact_quotient(apply(D, P), P);
}

// ---------------------------------------------------------------------------
// Darboux search

namespace {

std::vector<Exponents> monomials_up_to(std::size_t nvars, unsigned maxdeg) {
  std::vector<Exponents> out;
  Exponents e(nvars, 0);
  std::function<void(std::size_t, unsigned)> rec = [&](std::size_t i, unsigned left) {
    if (i + 1 == nvars) {
      e[i] = left;
      out.push_back(e);
      return;
    }
    for (unsigned a = left + 1; a-- > 0;) {
      e[i] = a;
      rec(i + 1, left - a);
    }
  };
  for (unsigned d = 0; d <= maxdeg; ++d) {
    if (nvars == 0) break;
    rec(0, d);
  }
  return out;  // degree ascending, lex descending within a degree
}

// Integer roots of a monic polynomial with integer coefficients (ascending),
// with multiplicities. Roots are bounded by `bound` in absolute value.
std::vector<std::pair<mpz_class, unsigned>> integer_roots(QVector p, const mpz_class& bound) {
  std::vector<std::pair<mpz_class, unsigned>> roots;
  auto deflate = [](QVector& poly, const mpq_class& r) {
    // Synthetic division by (x - r); returns true when exact.
    const std::size_t n = poly.size() - 1;
    QVector q(n);
    mpq_class carry = 0;
    for (std::size_t i = n; i-- > 0;) {
      carry = poly[i + 1] + carry * r;
      q[i] = carry;
    }
    if (poly[0] + carry * r != 0) return false;
    poly = std::move(q);
    return true;
  };
  unsigned zero_mult = 0;
  while (p.size() > 1 && p[0] == 0) {
    p.erase(p.begin());
    ++zero_mult;
  }
  if (zero_mult) roots.emplace_back(0, zero_mult);
  for (mpz_class r = 1; r <= bound && p.size() > 1; ++r) {
    for (int sgn : {1, -1}) {
      const mpz_class cand = sgn * r;
      const mpz_class c0 = p[0].get_num();
      if (c0 % cand != 0) continue;
      unsigned mult = 0;
      while (p.size() > 1 && deflate(p, mpq_class(cand))) ++mult;
      if (mult) roots.emplace_back(cand, mult);
    }
  }
  return roots;
}

// Row echelon helper for span computations on coefficient vectors.
struct Span {
  std::size_t dim;
  std::vector<QVector> rows;  // reduced, pivot entries 1
  std::vector<std::size_t> pivots;

  explicit Span(std::size_t d) : dim(d) {}

  // Reduce v against the current rows.
  QVector reduce(QVector v) const {
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const mpq_class f = v[pivots[i]];
      if (f == 0) continue;
      for (std::size_t k = 0; k < dim; ++k)
        if (rows[i][k] != 0) v[k] -= f * rows[i][k];
    }
    return v;
  }

  bool insert(const QVector& v) {
    QVector r = reduce(v);
    std::size_t p = 0;
    while (p < dim && r[p] == 0) ++p;
    if (p == dim) return false;
    const mpq_class inv = 1 / r[p];
    for (auto& x : r) x *= inv;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const mpq_class f = rows[i][p];
      if (f == 0) continue;
      for (std::size_t k = 0; k < dim; ++k)
        if (r[k] != 0) rows[i][k] -= f * r[k];
    }
    rows.push_back(std::move(r));
    pivots.push_back(p);
    return true;
  }

  std::size_t rank() const { return rows.size(); }
};

SparsePoly to_poly(const QVector& v, const std::vector<Exponents>& monos, std::size_t nvars) {
  SparsePoly p(nvars);
  for (std::size_t i = 0; i < v.size(); ++i)
    if (v[i] != 0) p.add_term(monos[i], v[i]);
  return p;
}

QVector to_vector(const SparsePoly& p, const std::vector<Exponents>& monos) {
  QVector v(monos.size());
  for (std::size_t i = 0; i < monos.size(); ++i) v[i] = p.coeff(monos[i]);
  return v;
}

}  // namespace

DarbouxResult darboux_search(const Derivation& D, unsigned maxdeg) {
  const std::size_t n = D.nvars();
  for (const auto& c : D.components())
    if (c.degree() > 1) fail("DegreeRaisingField", "darboux_search needs components of degree <= 1");

  DarbouxResult result;
  if (maxdeg == 0 || n == 0) return result;

  const auto monos = monomials_up_to(n, maxdeg);
  const std::size_t m = monos.size();
  std::vector<std::size_t> count_to_degree(maxdeg + 1, 0);
  for (const auto& e : monos) ++count_to_degree[total_degree(e)];
  for (unsigned d = 1; d <= maxdeg; ++d) count_to_degree[d] += count_to_degree[d - 1];

  // Column j holds D(monos[j]) in the monomial basis.
  QMatrix M(m, QVector(m));
  for (std::size_t j = 0; j < m; ++j) {
    const SparsePoly image = apply(D, SparsePoly::monomial(monos[j]));
    for (std::size_t i = 0; i < m; ++i) M[i][j] = image.coeff(monos[i]);
  }

  // Integer matrix L*M; its eigenvalues are L times those of M.
  mpz_class L = 1;
  for (const auto& row : M)
    for (const auto& x : row) mpz_lcm(L.get_mpz_t(), L.get_mpz_t(), x.get_den_mpz_t());
  QMatrix LM = M;
  mpz_class row_bound = 0;
  for (auto& row : LM) {
    mpz_class s = 0;
    for (auto& x : row) {
      x *= L;
      s += abs(x.get_num());
    }
    row_bound = std::max(row_bound, s);
  }
  const auto roots = integer_roots(charpoly(LM), row_bound);
  unsigned rational_count = 0;
  for (const auto& r : roots) rational_count += r.second;
  if (rational_count < m) {
    result.non_rational_eigenvalue = true;
    result.complete = false;
  }

  std::vector<mpq_class> eigenvalues;
  for (const auto& r : roots) eigenvalues.push_back(mpq_class(r.first, L));
  std::sort(eigenvalues.begin(), eigenvalues.end(), std::greater<>());

  std::vector<DarbouxPolynomial> found;
  std::map<mpq_class, std::vector<QVector>> previous_space;  // eigenspace at degree d-1

  for (unsigned d = 1; d <= maxdeg; ++d) {
    const std::size_t md = count_to_degree[d];
    const std::vector<Exponents> sub(monos.begin(), monos.begin() + static_cast<long>(md));
    for (const auto& lambda : eigenvalues) {
      QMatrix A(md, QVector(md));
      for (std::size_t i = 0; i < md; ++i)
        for (std::size_t j = 0; j < md; ++j) A[i][j] = M[i][j] - (i == j ? lambda : mpq_class(0));
      const auto V = kernel_basis(A, md);

      // Known part: constants (for lambda = 0), the eigenspace one degree
      // lower, and products of irreducibles found so far.
      Span span(md);
      if (lambda == 0) {
        QVector one(md);
        one[0] = 1;
        span.insert(one);
      }
      for (const auto& v : previous_space[lambda]) {
        QVector ext(md);
        std::copy(v.begin(), v.end(), ext.begin());
        span.insert(ext);
      }
      std::function<void(std::size_t, const SparsePoly&, const mpq_class&, int)> products =
          [&](std::size_t start, const SparsePoly& acc, const mpq_class& ev, int deg) {
            if (deg > 0 && ev == lambda) span.insert(to_vector(acc, sub));
            for (std::size_t i = start; i < found.size(); ++i) {
              const int nd = deg + found[i].poly.degree();
              if (nd > static_cast<int>(d)) continue;
              products(i, acc * found[i].poly, ev + found[i].cofactor, nd);
            }
          };
      products(0, SparsePoly::constant(n, 1), 0, 0);

      // Rows added beyond the known part are the new eigenvectors, kept in
      // reduced echelon form against everything else.
      const std::size_t known_rank = span.rank();
      for (const auto& v : V) span.insert(v);
      const std::vector<QVector> fresh(span.rows.begin() + static_cast<long>(known_rank), span.rows.end());

      if (fresh.size() == 1) {
        const SparsePoly cand = to_poly(fresh[0], sub, n).primitive();
        bool reducible = false;
        for (const auto& f : found)
          if (exact_quotient(cand, f.poly)) {
            reducible = true;
            break;
          }
        if (!reducible) found.push_back({cand, lambda});
      } else if (fresh.size() > 1) {
        DarbouxFamily fam{lambda, fresh.size(), {}};
        for (const auto& f : fresh) fam.basis.push_back(to_poly(f, sub, n).primitive());
        result.families.push_back(std::move(fam));
        result.complete = false;
      }
      previous_space[lambda] = V;
    }
  }

  std::stable_sort(found.begin(), found.end(), [](const DarbouxPolynomial& a, const DarbouxPolynomial& b) {
    if (a.poly.degree() != b.poly.degree()) return a.poly.degree() < b.poly.degree();
    return a.cofactor > b.cofactor;
  });
  result.polynomials = std::move(found);
  return result;
}

NamedDerivation parse_derivation(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<std::string> names;
  std::vector<std::string> lines;
  while (std::getline(in, line)) {
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    if (names.empty()) {
      std::istringstream head(line);
      std::string word;
      head >> word;
      if (word != "vars") fail("ParseError", "field file must start with 'vars <names...>'");
      while (head >> word) names.push_back(word);
      if (names.empty()) fail("ParseError", "field file declares no variables");
      continue;
    }
    lines.push_back(line);
  }
  if (names.empty()) fail("ParseError", "empty field file");
  if (lines.size() != names.size())
    fail("ParseError", "field file has " + std::to_string(lines.size()) + " components for " +
                           std::to_string(names.size()) + " variables");
  std::vector<SparsePoly> comps;
  for (const auto& l : lines) comps.push_back(parse_poly(l, names));
  return {Derivation(std::move(comps)), names};
}

}  // namespace nw
