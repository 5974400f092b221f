#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "ruledfib/error.hpp"
#include "ruledfib/finite_field.hpp"
#include "ruledfib/sym_cocycle.hpp"

using namespace ruledfib;

namespace {

using NumMatrix = std::vector<std::vector<FieldElement>>;

std::int64_t binom(std::int64_t n, std::int64_t k) {
  std::int64_t r = 1;
  for (std::int64_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// The symmetric-power matrix evaluated at a field value x.
NumMatrix numeric_sym(const FieldPtr& fld, int m, const FieldElement& x) {
  const auto n = static_cast<std::size_t>(m) + 1;
  NumMatrix a(n, std::vector<FieldElement>(n, FieldElement::zero(fld)));
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = r; c < n; ++c)
      a[r][c] = x.pow(c - r) * static_cast<std::int64_t>(binom(m - static_cast<std::int64_t>(r), c - r) % fld->p);
  return a;
}

NumMatrix mul(const NumMatrix& a, const NumMatrix& b) {
  const auto fld = a[0][0].field();
  NumMatrix out(a.size(), std::vector<FieldElement>(b[0].size(), FieldElement::zero(fld)));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b[0].size(); ++j)
      for (std::size_t t = 0; t < b.size(); ++t) out[i][j] = out[i][j] + a[i][t] * b[t][j];
  return out;
}

// Both sides of the gauge identity at sampled values of f, lam, gj with gi
// fixed by the relation (or perturbed when `break_relation`).
bool numeric_conjugation(std::uint32_t p, bool ordinary, std::mt19937_64& rng, bool break_relation) {
  const auto fld = make_field(p, 3);
  std::uniform_int_distribution<std::uint64_t> pick(0, fld->order - 1);
  const FieldElement f(fld, pick(rng)), gj(fld, pick(rng));
  FieldElement lam = FieldElement::zero(fld);
  if (ordinary)
    while (lam.is_zero()) lam = FieldElement(fld, pick(rng));
  FieldElement gi = f.pow(p) - lam * f + gj;
  if (break_relation) gi = gi + FieldElement::one(fld);
  const std::size_t n = p + 1;
  auto gauge = [&](const FieldElement& g) {
    NumMatrix m(n, std::vector<FieldElement>(n, FieldElement::zero(fld)));
    for (std::size_t i = 0; i < n; ++i) m[i][i] = FieldElement::one(fld);
    m[0][p - 1] = m[0][p - 1] + lam;
    m[0][p] = m[0][p] - g;
    return m;
  };
  NumMatrix split(n, std::vector<FieldElement>(n, FieldElement::zero(fld)));
  split[0][0] = FieldElement::one(fld);
  const auto low = numeric_sym(fld, static_cast<int>(p) - 1, f);
  for (std::size_t r = 1; r < n; ++r)
    for (std::size_t c = 1; c < n; ++c) split[r][c] = low[r - 1][c - 1];
  return mul(numeric_sym(fld, static_cast<int>(p), f), gauge(gi)) == mul(gauge(gj), split);
}

}  // namespace

TEST_CASE("small symmetric-power matrices") {
  auto a0 = build_sym_matrix(5, 0);
  REQUIRE(a0.size() == 1);
  CHECK(a0[0][0] == Poly::constant(5, 1));
  auto a1 = build_sym_matrix(3, 1);
  CHECK(a1[0][0] == Poly::constant(3, 1));
  CHECK(a1[0][1] == Poly::var(3, Var::F));
  CHECK(a1[1][0].is_zero());
  CHECK(a1[1][1] == Poly::constant(3, 1));
  auto a2 = build_sym_matrix(2, 2);
  CHECK(a2[0][1].is_zero());
  CHECK(a2[0][2] == Poly::var(2, Var::F, 2));
  CHECK(a2[1][2] == Poly::var(2, Var::F));
  try {
    build_sym_matrix(3, 4);
    FAIL("expected ExponentOutOfRange");
  } catch (const Error& err) {
    CHECK(err.kind() == ErrorKind::ExponentOutOfRange);
  }
}

TEST_CASE("matrix entries match binomials") {
  for (std::uint32_t p : {2u, 3u, 5u, 7u, 11u}) {
    for (int m = 0; m <= static_cast<int>(p); ++m) {
      auto a = build_sym_matrix(p, m);
      for (int r = 0; r <= m; ++r) {
        for (int c = 0; c <= m; ++c) {
          Poly want(p);
          if (c >= r) want = Poly::constant(p, binom(m - r, c - r) % p) * Poly::var(p, Var::F).pow(c - r);
          CHECK(a[r][c] == want);
        }
      }
    }
  }
}

TEST_CASE("p divides the middle binomials") {
  for (std::uint32_t p = 2; p <= 23; ++p) {
    if (!is_prime(p)) continue;
    for (std::uint32_t k = 1; k < p; ++k) CHECK(binom(p, k) % p == 0);
  }
}

TEST_CASE("block structure") {
  for (std::uint32_t p : {2u, 3u, 5u, 7u}) CHECK(verify_block_structure(p));
}

TEST_CASE("nesting of consecutive powers") {
  for (std::uint32_t p : {3u, 5u, 7u}) {
    for (int m = 0; m < static_cast<int>(p); ++m) {
      auto small = build_sym_matrix(p, m);
      auto big = build_sym_matrix(p, m + 1);
      for (int r = 0; r <= m; ++r)
        for (int c = 0; c <= m; ++c) CHECK(big[r + 1][c + 1] == small[r][c]);
    }
  }
}

TEST_CASE("rewriting is confluent and idempotent") {
  std::mt19937_64 rng(23);
  for (std::uint32_t p : {2u, 3u, 5u}) {
    for (auto mode : {Reduction::Ordinary, Reduction::Supersingular}) {
      std::uniform_int_distribution<int> e(0, 3 * static_cast<int>(p)), c(0, static_cast<int>(p) - 1);
      for (int trial = 0; trial < 100; ++trial) {
        Poly x(p), y(p);
        for (int t = 0; t < 4; ++t) {
          x.add_term(Monomial{static_cast<std::uint16_t>(e(rng)), static_cast<std::uint16_t>(c(rng)), 0,
                              static_cast<std::uint16_t>(c(rng)), 0},
                     c(rng));
          y.add_term(Monomial{static_cast<std::uint16_t>(e(rng)), 0, static_cast<std::uint16_t>(c(rng)), 0, 0}, c(rng));
        }
        const auto rx = reduce(x, mode);
        CHECK(rx.degree_in(Var::F) < static_cast<int>(p));
        CHECK(reduce(rx, mode) == rx);
        CHECK(reduce(x * y, mode) == reduce(rx * reduce(y, mode), mode));
        CHECK(reduce(x + y, mode) == rx + reduce(y, mode));
      }
    }
  }
}

TEST_CASE("conjugation identity") {
  std::mt19937_64 rng(29);
  for (std::uint32_t p : {2u, 3u, 5u, 7u}) {
    for (auto mode : {Reduction::Ordinary, Reduction::Supersingular}) {
      CAPTURE(p);
      CHECK(verify_conjugation(p, mode));
      const bool ord = mode == Reduction::Ordinary;
      for (int s = 0; s < 20; ++s) CHECK(numeric_conjugation(p, ord, rng, false));
      // The oracle notices a broken relation.
      CHECK_FALSE(numeric_conjugation(p, ord, rng, true));
    }
  }
}

TEST_CASE("cocycle condition") {
  std::mt19937_64 rng(31);
  for (std::uint32_t p : {2u, 3u, 5u, 7u}) {
    const auto fld = make_field(p, 2);
    std::uniform_int_distribution<std::uint64_t> pick(0, fld->order - 1);
    for (int m = 0; m <= static_cast<int>(p); ++m) {
      CHECK(verify_cocycle_condition(p, m));
      for (int s = 0; s < 10; ++s) {
        FieldElement x(fld, pick(rng)), y(fld, pick(rng));
        CHECK(mul(numeric_sym(fld, m, x), numeric_sym(fld, m, y)) == numeric_sym(fld, m, x + y));
      }
    }
  }
}
