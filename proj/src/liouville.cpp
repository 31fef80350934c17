#include <algorithm>

#include "nw/error.hpp"
#include "nw/evalnum.hpp"
#include "nw/rational.hpp"

namespace nw {

namespace {

using QPoly = std::vector<mpq_class>;  // ascending, no trailing zeros

void trim(QPoly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

QPoly derivative(const QPoly& p) {
  QPoly d;
  for (std::size_t i = 1; i < p.size(); ++i) d.push_back(p[i] * static_cast<unsigned long>(i));
  trim(d);
  return d;
}

QPoly remainder(QPoly a, const QPoly& b) {
  while (a.size() >= b.size() && !a.empty()) {
    const mpq_class f = a.back() / b.back();
    const std::size_t shift = a.size() - b.size();
    for (std::size_t i = 0; i < b.size(); ++i) a[i + shift] -= f * b[i];
    a.pop_back();
    trim(a);
  }
  return a;
}

QPoly gcd(QPoly a, QPoly b) {
  while (!b.empty()) {
    QPoly r = remainder(a, b);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

mpq_class eval(const QPoly& p, const mpq_class& x) {
  mpq_class acc = 0;
  for (std::size_t i = p.size(); i-- > 0;) acc = acc * x + p[i];
  return acc;
}

int sign_at(const QPoly& p, const mpq_class& x) { return sgn(eval(p, x)); }

std::vector<QPoly> sturm_chain(const QPoly& p) {
  std::vector<QPoly> chain{p, derivative(p)};
  while (!chain.back().empty()) {
    QPoly r = remainder(chain[chain.size() - 2], chain.back());
    for (auto& c : r) c = -c;
    if (r.empty()) break;
    chain.push_back(std::move(r));
  }
  return chain;
}

int variations(const std::vector<QPoly>& chain, const mpq_class& x) {
  int count = 0, last = 0;
  for (const auto& p : chain) {
    const int s = sign_at(p, x);
    if (s == 0) continue;
    if (last != 0 && s != last) ++count;
    last = s;
  }
  return count;
}

QPoly to_qpoly(const std::vector<mpz_class>& ascending) {
  QPoly p(ascending.begin(), ascending.end());
  trim(p);
  return p;
}

// Halves an isolating interval (lo, hi] of a simple root with P(lo) P(hi) < 0.
void bisect(const QPoly& p, mpq_class& lo, mpq_class& hi) {
  const mpq_class mid = (lo + hi) / 2;
  const int sm = sign_at(p, mid);
  if (sm == 0) {
    lo = hi = mid;
  } else if (sm == sign_at(p, lo)) {
    lo = mid;
  } else {
    hi = mid;
  }
}

void refine_to(const QPoly& p, mpq_class& lo, mpq_class& hi, const mpq_class& width) {
  while (hi - lo > width) bisect(p, lo, hi);
}

// Simplest rational (smallest denominator) in the closed interval [lo, hi].
mpq_class simplest_between(mpq_class lo, mpq_class hi) {
  mpz_class fl;
  mpz_fdiv_q(fl.get_mpz_t(), lo.get_num_mpz_t(), lo.get_den_mpz_t());
  if (fl == lo) return lo;
  if (fl + 1 <= hi) return mpq_class(fl + 1);
  const mpq_class inner = simplest_between(1 / (hi - fl), 1 / (lo - fl));
  return mpq_class(fl) + 1 / inner;
}

struct QInterval {
  mpq_class lo, hi;
};

QInterval operator+(const QInterval& a, const QInterval& b) { return {a.lo + b.lo, a.hi + b.hi}; }

QInterval operator*(const QInterval& a, const QInterval& b) {
  const mpq_class c[4] = {a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi};
  return {*std::min_element(c, c + 4), *std::max_element(c, c + 4)};
}

QInterval abs(const QInterval& a) {
  if (a.lo >= 0) return a;
  if (a.hi <= 0) return {-a.hi, -a.lo};
  return {0, std::max(mpq_class(-a.lo), a.hi)};
}

mpz_class binom(unsigned long n, unsigned long k) {
  mpz_class b;
  mpz_bin_uiui(b.get_mpz_t(), n, k);
  return b;
}

// Partial quotients shared by every number in (lo, hi). Stops at the first
// step where the endpoints disagree.
std::vector<mpz_class> shared_quotients(mpq_class lo, mpq_class hi) {
  std::vector<mpz_class> out;
  for (;;) {
    mpz_class a, b;
    mpz_fdiv_q(a.get_mpz_t(), lo.get_num_mpz_t(), lo.get_den_mpz_t());
    mpz_fdiv_q(b.get_mpz_t(), hi.get_num_mpz_t(), hi.get_den_mpz_t());
    if (a != b || lo == a || hi == a) return out;
    out.push_back(a);
    const mpq_class nlo = 1 / (hi - a), nhi = 1 / (lo - a);
    lo = nlo;
    hi = nhi;
  }
}

}  // namespace

std::vector<std::pair<mpq_class, mpq_class>> isolate_real_roots(const std::vector<mpz_class>& ascending) {
  const QPoly p = to_qpoly(ascending);
  if (p.size() < 2) fail("InvalidArgument", "root isolation needs a non-constant polynomial");
  if (gcd(p, derivative(p)).size() > 1) fail("ReduciblePolynomial", "polynomial has a repeated factor");
  // Cauchy bound: every root lies in (-B, B).
  mpq_class B = 0;
  for (std::size_t i = 0; i + 1 < p.size(); ++i) B = std::max(B, mpq_class(abs(p[i] / p.back())));
  B += 1;
  const auto chain = sturm_chain(p);
  std::vector<std::pair<mpq_class, mpq_class>> out;
  std::vector<std::pair<mpq_class, mpq_class>> stack{{-B, B}};
  while (!stack.empty()) {
    auto [a, b] = stack.back();
    stack.pop_back();
    const int n = variations(chain, a) - variations(chain, b);
    if (n == 0) continue;
    if (n == 1) {
      out.emplace_back(a, b);
      continue;
    }
    const mpq_class m = (a + b) / 2;
    stack.emplace_back(a, m);
    stack.emplace_back(m, b);
  }
  std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
  return out;
}

LiouvilleResult liouville_check(const std::vector<mpz_class>& coeffs_descending, const mpz_class& q_max,
                                std::optional<std::size_t> root_index) {
  if (coeffs_descending.empty() || coeffs_descending.front() == 0)
    fail("InvalidArgument", "leading coefficient must be nonzero");
  if (q_max < 1) fail("InvalidArgument", "q_max must be positive");
  LiouvilleResult res;
  res.minpoly.assign(coeffs_descending.rbegin(), coeffs_descending.rend());
  const QPoly p = to_qpoly(res.minpoly);
  res.degree = static_cast<unsigned>(p.size() - 1);
  if (res.degree < 2) fail("ReduciblePolynomial", "degree must be at least 2");
  if (gcd(p, derivative(p)).size() > 1) fail("ReduciblePolynomial", "polynomial has a repeated factor");

  const auto roots = isolate_real_roots(res.minpoly);
  // A rational root has denominator dividing the leading coefficient, so at
  // width below 1/lead^2 it must be the simplest rational of its interval.
  const mpq_class lead_abs = abs(p.back());
  for (auto [lo, hi] : roots) {
    refine_to(p, lo, hi, 1 / (2 * lead_abs * lead_abs));
    const mpq_class cand = simplest_between(lo, hi);
    if (eval(p, cand) == 0) fail("ReduciblePolynomial", "rational root " + cand.get_str());
  }
  if (roots.empty()) fail("NoRealRoot", "polynomial has no real root");
  const std::size_t idx = root_index.value_or(roots.size() - 1);
  if (idx >= roots.size()) fail("InvalidArgument", "root index out of range");
  mpq_class lo = roots[idx].first, hi = roots[idx].second;
  refine_to(p, lo, hi, mpq_class(1, 1) / (mpz_class(1) << 80));

  // Taylor coefficients P^(i)(alpha)/i! enclosed by interval Horner.
  const QInterval alpha{lo, hi};
  QInterval M{0, 0};
  for (std::size_t i = 1; i < p.size(); ++i) {
    QInterval acc{0, 0};
    for (std::size_t j = p.size(); j-- > i;) {
      const mpq_class c = p[j] * binom(j, i);
      acc = acc * alpha + QInterval{c, c};
    }
    M = M + abs(acc);
  }
  res.M_lo = M.lo;
  res.M_hi = M.hi;
  res.c_lo = std::min(mpq_class(1), mpq_class(1 / (2 * M.hi)));
  res.c_hi = M.lo > 0 ? std::min(mpq_class(1), mpq_class(1 / (2 * M.lo))) : mpq_class(1);

  // Convergents of alpha up to q_max.
  std::vector<mpz_class> quotients;
  mpz_class p_prev = 1, q_prev = 0, p_cur, q_cur;
  std::size_t used = 0;
  bool first = true;
  for (;;) {
    if (used == quotients.size()) {
      refine_to(p, lo, hi, (hi - lo) / (mpz_class(1) << 64));
      quotients = shared_quotients(lo, hi);
      if (used >= quotients.size()) continue;
    }
    const mpz_class& a = quotients[used++];
    mpz_class pn, qn;
    if (first) {
      pn = a;
      qn = 1;
      p_prev = 1;
      q_prev = 0;
      first = false;
    } else {
      pn = a * p_cur + p_prev;
      qn = a * q_cur + q_prev;
      p_prev = p_cur;
      q_prev = q_cur;
    }
    p_cur = pn;
    q_cur = qn;
    if (q_cur > q_max) break;

    const mpq_class x(p_cur, q_cur);
    // Refine until p/q is outside the interval and the distance is tight.
    for (;;) {
      if (x < lo || x > hi) {
        const mpq_class dist = x < lo ? mpq_class(lo - x) : mpq_class(x - hi);
        if (hi - lo <= dist / 1024) break;
      }
      bisect(p, lo, hi);
    }
    const mpq_class dist = x < lo ? mpq_class(lo - x) : mpq_class(x - hi);
    ConvergentRecord rec;
    rec.p = p_cur;
    rec.q = q_cur;
    rec.gap_lower = dist * ipow(q_cur, res.degree);
    rec.certified = rec.gap_lower >= res.c_hi;
    res.records.push_back(rec);
  }
  res.alpha_lo = lo;
  res.alpha_hi = hi;
  res.pass = !res.records.empty() &&
             std::all_of(res.records.begin(), res.records.end(), [](const auto& r) { return r.certified; });
  return res;
}

}  // namespace nw
