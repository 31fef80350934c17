#include <doctest.h>

#include <random>

#include "nw/error.hpp"
#include "nw/siegel.hpp"
#include "oracles.hpp"

using namespace nw;

namespace {

IntMatrix make(std::vector<std::vector<long>> rows) {
  IntMatrix T(rows.size(), rows.empty() ? 0 : rows[0].size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j) T.entries[i][j] = rows[i][j];
  return T;
}

IntMatrix random_matrix(std::mt19937_64& rng, std::size_t r, std::size_t s, long h) {
  std::uniform_int_distribution<long> dist(-h, h);
  IntMatrix T(r, s);
  for (auto& row : T.entries)
    for (auto& x : row) x = dist(rng);
  return T;
}

bool in_kernel(const IntMatrix& T, const std::vector<mpz_class>& v) {
  for (const auto& row : T.entries) {
    mpz_class acc = 0;
    for (std::size_t i = 0; i < v.size(); ++i) acc += row[i] * v[i];
    if (acc != 0) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("examples") {
  const auto a = small_kernel(make({{1, 1, 1}}));
  CHECK(in_kernel(make({{1, 1, 1}}), a.vector));
  CHECK(a.norm == 1);
  CHECK(a.within_bound);

  const auto z = small_kernel(make({{0, 0}}));
  CHECK(z.norm == 1);
  CHECK(z.rank == 0);

  const auto T = make({{2, 4, 6}, {1, 2, 3}});
  const auto b = small_kernel(T);
  CHECK(in_kernel(T, b.vector));
  CHECK(b.norm <= 2592);
  CHECK(b.bound_floor == 2592);
  CHECK(b.rank == 1);

  bool raised = false;
  try {
    small_kernel(make({{1, 2}, {3, 4}}));
  } catch (const Error& e) {
    raised = e.code() == "NotUnderdetermined";
  }
  CHECK(raised);
}

TEST_CASE("tie-breaking is deterministic and sign-normalized") {
  const auto a = small_kernel(make({{1, 1, 1}}));
  CHECK(a.vector == std::vector<mpz_class>{0, 1, -1});
  const auto again = small_kernel(make({{1, 1, 1}}));
  CHECK(again.vector == a.vector);
}

TEST_CASE("rank by Bareiss") {
  CHECK(rank(make({{2, 4, 6}, {1, 2, 3}})) == 1);
  CHECK(rank(make({{1, 0, 0}, {0, 1, 0}})) == 2);
  CHECK(rank(make({{0, 0, 0}})) == 0);
}

TEST_CASE("tiny instances against exhaustive enumeration") {
  std::mt19937_64 rng(21);
  for (int t = 0; t < 60; ++t) {
    const std::size_t s = 2 + t % 3;
    const std::size_t r = 1 + t % (s - 1);
    const auto T = random_matrix(rng, r, s, 10);
    const auto res = small_kernel(T);
    CHECK(in_kernel(T, res.vector));
    CHECK(res.within_bound);
    const long h = res.bound_floor.get_si();
    if (h <= 10) CHECK(oracle::kernel_vector_within(T.entries, s, h));
    // Nothing strictly shorter exists.
    if (res.norm > 1 && res.norm <= 12) CHECK_FALSE(oracle::kernel_vector_within(T.entries, s, res.norm.get_si() - 1));
  }
}

TEST_CASE("random instances: membership and bound") {
  std::mt19937_64 rng(17);
  for (int t = 0; t < 24; ++t) {
    const std::size_t s = 8 + (t * 5) % 25;
    const std::size_t r = std::max<std::size_t>(1, s * (1 + t % 3) / 4);
    const auto T = random_matrix(rng, r, s, t % 2 ? 1000000 : 50);
    const auto res = small_kernel(T);
    CHECK(in_kernel(T, res.vector));
    CHECK(res.within_bound);
  }
}

TEST_CASE("integer kernel is saturated") {
  // Kernel of [2 4 6] over Z has basis of sup-norm <= 2 (for example
  // (2,-1,0), (1,1,-1)); a non-saturated basis would give larger vectors.
  const auto K = integer_kernel(make({{2, 4, 6}}));
  REQUIRE(K.size() == 2);
  mpz_class det = K[0][0] * K[1][1] - K[0][1] * K[1][0];
  mpz_class det2 = K[0][0] * K[1][2] - K[0][2] * K[1][0];
  mpz_class det3 = K[0][1] * K[1][2] - K[0][2] * K[1][1];
  // Plucker coordinates of a primitive sublattice are coprime.
  mpz_class g;
  mpz_gcd(g.get_mpz_t(), det.get_mpz_t(), det2.get_mpz_t());
  mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), det3.get_mpz_t());
  CHECK(g == 1);
}

TEST_CASE("matrix file") {
  const auto T = parse_int_matrix("2 3\n1 2 3\n-4 5 6\n");
  CHECK(T.rows == 2);
  CHECK(T.entries[1][0] == -4);
  bool raised = false;
  try {
    parse_int_matrix("2 3\n1 2 3\n");
  } catch (const Error& e) {
    raised = e.code() == "ParseError";
  }
  CHECK(raised);
}
