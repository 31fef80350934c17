#pragma once

// Independent reference computations used by the tests. Each one is written
// the slow, obvious way and shares no code with the library routine it checks.

#include <gmpxx.h>

#include <cstdint>
#include <map>
#include <random>
#include <vector>

namespace oracle {

// Sum of d^e over every d in 1..m dividing m.
inline mpz_class divisor_power_sum(unsigned long m, unsigned long e) {
  mpz_class s = 0;
  for (unsigned long d = 1; d <= m; ++d)
    if (m % d == 0) {
      mpz_class t = 1;
      for (unsigned long i = 0; i < e; ++i) t *= d;
      s += t;
    }
  return s;
}

inline std::vector<mpq_class> eisenstein(int weight, std::size_t N) {
  // Constants checked separately against the Ramanujan system.
  const long c = weight == 2 ? -24 : weight == 4 ? 240 : -504;
  std::vector<mpq_class> out(N + 1);
  out[0] = 1;
  for (std::size_t m = 1; m <= N; ++m) out[m] = c * mpq_class(divisor_power_sum(m, weight - 1));
  return out;
}

inline std::vector<mpq_class> convolve(const std::vector<mpq_class>& a, const std::vector<mpq_class>& b) {
  const std::size_t N = std::min(a.size(), b.size());
  std::vector<mpq_class> out(N);
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j + i < N; ++j) out[i + j] += a[i] * b[j];
  return out;
}

// Polynomials as plain maps, differentiated and multiplied term by term.
using Mono = std::vector<std::uint32_t>;
using Poly = std::map<Mono, mpq_class>;

inline void add(Poly& p, const Mono& e, const mpq_class& c) {
  auto& slot = p[e];
  slot += c;
  if (slot == 0) p.erase(e);
}

inline Poly mul(const Poly& a, const Poly& b) {
  Poly out;
  for (const auto& [ea, ca] : a)
    for (const auto& [eb, cb] : b) {
      Mono e(ea.size());
      for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
      add(out, e, ca * cb);
    }
  return out;
}

inline Poly partial(const Poly& p, std::size_t v) {
  Poly out;
  for (const auto& [e, c] : p) {
    if (e[v] == 0) continue;
    Mono f = e;
    --f[v];
    add(out, f, c * e[v]);
  }
  return out;
}

inline Poly apply_field(const std::vector<Poly>& field, const Poly& p) {
  Poly out;
  for (std::size_t i = 0; i < field.size(); ++i)
    for (const auto& [e, c] : mul(field[i], partial(p, i))) add(out, e, c);
  return out;
}

// Truncated series of a polynomial in (q, E2, E4, E6) by direct expansion.
inline std::vector<mpq_class> compose(const Poly& p, std::size_t N) {
  const std::vector<std::vector<mpq_class>> base = {eisenstein(2, N), eisenstein(4, N), eisenstein(6, N)};
  std::vector<mpq_class> out(N + 1);
  for (const auto& [e, c] : p) {
    std::vector<mpq_class> term(N + 1);
    if (e[0] <= N) term[e[0]] = c;
    for (std::size_t v = 0; v < 3; ++v)
      for (std::uint32_t k = 0; k < e[v + 1]; ++k) term = convolve(term, base[v]);
    for (std::size_t i = 0; i <= N; ++i) out[i] += term[i];
  }
  return out;
}

// Exhaustive search for a nonzero v with T v = 0 and |v_i| <= h.
inline bool kernel_vector_within(const std::vector<std::vector<mpz_class>>& T, std::size_t s, long h) {
  std::vector<long> v(s, -h);
  while (true) {
    bool nonzero = false;
    for (long x : v) nonzero |= x != 0;
    if (nonzero) {
      bool ok = true;
      for (const auto& row : T) {
        mpz_class acc = 0;
        for (std::size_t i = 0; i < s; ++i) acc += row[i] * v[i];
        if (acc != 0) {
          ok = false;
          break;
        }
      }
      if (ok) return true;
    }
    std::size_t i = 0;
    while (i < s && v[i] == h) v[i++] = -h;
    if (i == s) return false;
    ++v[i];
  }
}

}  // namespace oracle
