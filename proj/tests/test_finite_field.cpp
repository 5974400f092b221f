#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "ruledfib/finite_field.hpp"

using namespace ruledfib;

namespace {

// Schoolbook product of two residues followed by reduction, written
// independently of the library's arithmetic.
std::vector<std::int64_t> naive_mulmod(std::vector<std::int64_t> a, std::vector<std::int64_t> b,
                                       const std::vector<std::uint32_t>& mod, std::int64_t p) {
  const std::size_t k = mod.size() - 1;
  std::vector<std::int64_t> prod(2 * k, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) prod[i + j] = (prod[i + j] + a[i] * b[j]) % p;
  for (std::size_t deg = prod.size(); deg-- > k;) {
    const std::int64_t c = prod[deg];
    if (!c) continue;
    for (std::size_t i = 0; i <= k; ++i) {
      prod[deg - k + i] = ((prod[deg - k + i] - c * mod[i]) % p + p) % p;
    }
  }
  prod.resize(k);
  return prod;
}

std::vector<std::int64_t> as_vec(const FieldElement& a) {
  auto c = a.coeffs();
  return {c.begin(), c.end()};
}

}  // namespace

TEST_CASE("prime field F_2 has modulus x") {
  auto f = make_field(2, 1);
  CHECK(f->order == 2);
  CHECK(f->modulus == std::vector<std::uint32_t>{0, 1});
}

TEST_CASE("construction errors") {
  CHECK_THROWS_AS(make_field(4, 1), Error);
  try {
    make_field(4, 1);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NonPrime);
  }
  try {
    make_field(3, 0);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::DegreeOutOfRange);
  }
  try {
    make_field(2, 21);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::DegreeOutOfRange);
  }
}

TEST_CASE("F_9 modulus is the least irreducible quadratic") {
  auto f = make_field(3, 2);
  const auto& m = f->modulus;
  REQUIRE(m.size() == 3);
  auto eval = [&](std::int64_t x, std::int64_t c0, std::int64_t c1) { return (x * x + c1 * x + c0) % 3; };
  for (int x = 0; x < 3; ++x) CHECK(eval(x, m[0], m[1]) != 0);
  // Every smaller tail (same lexicographic order) has a root.
  const int tail = static_cast<int>(m[0] + 3 * m[1]);
  for (int t = 0; t < tail; ++t) {
    bool has_root = false;
    for (int x = 0; x < 3; ++x) has_root |= eval(x, t % 3, t / 3) == 0;
    CHECK(has_root);
  }
}

TEST_CASE("multiplication agrees with schoolbook reduction") {
  for (auto [p, k] : {std::pair{3, 2}, {2, 4}, {5, 2}, {3, 3}, {7, 2}}) {
    auto f = make_field(p, k);
    for (std::uint64_t i = 0; i < f->order; ++i) {
      for (std::uint64_t j = 0; j < f->order; j += 3) {
        FieldElement a(f, i), b(f, j);
        CHECK(as_vec(a * b) == naive_mulmod(as_vec(a), as_vec(b), f->modulus, p));
      }
    }
    FieldElement g(f, static_cast<std::uint64_t>(p));  // the class of x
    CHECK(as_vec(g * g) == naive_mulmod(as_vec(g), as_vec(g), f->modulus, p));
  }
}

TEST_CASE("field axioms on random triples") {
  std::mt19937_64 rng(7);
  for (auto [p, k] : {std::pair{2, 1}, {2, 2}, {2, 4}, {3, 2}, {5, 1}, {5, 2}, {3, 3}, {7, 2}}) {
    auto f = make_field(p, k);
    std::uniform_int_distribution<std::uint64_t> pick(0, f->order - 1);
    for (int i = 0; i < 1000; ++i) {
      FieldElement a(f, pick(rng)), b(f, pick(rng)), c(f, pick(rng));
      CHECK(a + b == b + a);
      CHECK(a * b == b * a);
      CHECK((a + b) + c == a + (b + c));
      CHECK((a * b) * c == a * (b * c));
      CHECK(a * (b + c) == a * b + a * c);
      CHECK(a + FieldElement::zero(f) == a);
      CHECK(a - a == FieldElement::zero(f));
      if (!a.is_zero()) CHECK(a * a.inverse() == FieldElement::one(f));
      CHECK((a + b).frobenius() == a.frobenius() + b.frobenius());
    }
  }
}

TEST_CASE("Fermat and Galois order") {
  for (auto [p, k] : {std::pair{2, 3}, {3, 2}, {5, 2}, {2, 5}}) {
    auto f = make_field(p, k);
    for (const auto& a : all_elements(f)) {
      if (!a.is_zero()) CHECK(a.pow(f->order - 1).is_one());
      FieldElement b = a;
      for (int i = 0; i < k; ++i) b = frobenius_power(b);
      CHECK(b == a);
      if (a.in_prime_field()) CHECK(frobenius_power(a) == a);
    }
  }
}

TEST_CASE("Frobenius of the generator of F_4 is the other root of the modulus") {
  auto f = make_field(2, 2);
  FieldElement x(f, 2);
  FieldElement y = frobenius_power(x);
  CHECK(y != x);
  const auto& m = f->modulus;
  FieldElement val = y * y + y * static_cast<std::int64_t>(m[1]) + FieldElement::from_int(f, m[0]);
  CHECK(val.is_zero());
}

TEST_CASE("division and mixing errors") {
  auto f = make_field(5, 1);
  auto g = make_field(7, 1);
  try {
    (void)(FieldElement::one(f) / FieldElement::zero(f));
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::DivisionByZero);
  }
  try {
    (void)arith(FieldElement::one(f), FieldElement::one(g), ArithOp::Add);
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::MixedFields);
  }
}

TEST_CASE("square roots and quadratic solving match brute force") {
  for (auto [p, k] : {std::pair{2, 3}, {3, 2}, {5, 1}, {7, 2}, {2, 4}}) {
    auto f = make_field(p, k);
    const auto elems = all_elements(f);
    for (const auto& a : elems) {
      bool square = false;
      for (const auto& z : elems) square |= z * z == a;
      CHECK(a.is_square() == square);
      auto r = a.sqrt();
      CHECK(r.has_value() == square);
      if (r) CHECK(*r * *r == a);
    }
    for (std::size_t bi = 0; bi < elems.size(); bi += 2) {
      for (const auto& c : elems) {
        const auto& b = elems[bi];
        std::vector<FieldElement> brute;
        for (const auto& z : elems)
          if (z * z + b * z == c) brute.push_back(z);
        auto got = solve_quadratic(b, c);
        CHECK(got.size() == brute.size());
        for (const auto& z : got) CHECK(z * z + b * z == c);
      }
    }
  }
}

TEST_CASE("embeddings are ring maps") {
  auto small = make_field(2, 2);
  auto big = make_field(2, 4);
  FieldEmbedding emb(small, big);
  for (const auto& a : all_elements(small)) {
    for (const auto& b : all_elements(small)) {
      CHECK(emb(a + b) == emb(a) + emb(b));
      CHECK(emb(a * b) == emb(a) * emb(b));
    }
  }
  CHECK(emb(FieldElement::one(small)).is_one());
}

TEST_CASE("primitive element generates the multiplicative group") {
  auto f = make_field(3, 2);
  auto g = primitive_element(f);
  FieldElement cur = g;
  int order = 1;
  while (!cur.is_one()) {
    cur = cur * g;
    ++order;
  }
  CHECK(order == 8);
}
