#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <map>
#include <numeric>
#include <random>
#include <set>

#include "ruledfib/error.hpp"
#include "ruledfib/fiber_arithmetic.hpp"

using namespace ruledfib;

namespace {

using Types = std::vector<std::pair<std::int64_t, std::int64_t>>;

// Try every residue vector; true iff every distinguished index admits one.
bool brute_ku(const Types& t) {
  const std::int64_t l = std::accumulate(t.begin(), t.end(), std::int64_t{1},
                                         [](std::int64_t acc, const auto& x) { return std::lcm(acc, x.first); });
  for (std::size_t i = 0; i < t.size(); ++i) {
    std::vector<std::int64_t> n(t.size(), 0);
    bool found = false;
    for (;;) {
      std::int64_t s = 0;
      for (std::size_t j = 0; j < t.size(); ++j) s += n[j] * (l / t[j].first);
      if (s % l == 0 && n[i] % t[i].second == 1 % t[i].second) {
        found = true;
        break;
      }
      std::size_t j = 0;
      while (j < t.size() && ++n[j] == t[j].first) n[j++] = 0;
      if (j == t.size()) break;
    }
    if (!found) return false;
  }
  return true;
}

bool witness_ok(const Types& t, std::size_t i, const std::vector<std::int64_t>& w) {
  std::int64_t l = 1;
  for (const auto& x : t) l = std::lcm(l, x.first);
  std::int64_t s = 0;
  for (std::size_t j = 0; j < t.size(); ++j) s += w[j] * (l / t[j].first);
  return s % l == 0 && w[i] % t[i].second == 1 % t[i].second;
}

std::set<std::string> names(const std::vector<Violation>& v) {
  std::set<std::string> out;
  for (const auto& x : v) out.insert(x.name);
  return out;
}

}  // namespace

TEST_CASE("validation") {
  FiberConfig three{0, 0, {MultipleFiber::tame(2), MultipleFiber::tame(2), MultipleFiber::tame(2)}, std::nullopt};
  CHECK(validate_config(three).empty());
  FiberConfig vi{-1, 2, {MultipleFiber::tame(2), {2, 0, 1, true}}, std::nullopt};
  CHECK(validate_config(vi).empty());
  FiberConfig bad{0, 0, {{3, 1, 3, false}, MultipleFiber::tame(3)}, std::nullopt};
  CHECK(names(validate_config(bad)).count("tame-coefficient") == 1);
  FiberConfig over{0, 0, {MultipleFiber::tame(2), MultipleFiber::tame(2), MultipleFiber::tame(2), MultipleFiber::tame(2)},
                   std::nullopt};
  CHECK(names(validate_config(over)).count("canonical-sum-bound") == 1);
  FiberConfig wild0{0, 3, {{3, 2, 1, true}}, std::nullopt};
  CHECK(names(validate_config(wild0)).count("wild-count") == 1);
  FiberConfig fact{-1, 3, {{6, 4, 1, true}}, std::nullopt};
  CHECK(names(validate_config(fact)).count("multiplicity-factorization") == 1);
  // Supersingular fibers: p | m forces wildness.
  FiberConfig ss{0, 3, {MultipleFiber::tame(3), MultipleFiber::tame(3)}, Reduction::Supersingular};
  CHECK(names(validate_config(ss)).count("supersingular-tameness") == 1);
  ss.reduction = Reduction::Ordinary;
  CHECK(validate_config(ss).empty());
  FiberConfig rel{-1, 5, {{25, 10, 1, true}}, std::nullopt};
  CHECK(names(validate_config(rel)).count("coefficient-relation") == 1);
}

TEST_CASE("feasibility examples") {
  for (std::int64_t m = 2; m <= 60; ++m) {
    auto r = ku_feasible({{m, m}, {m, m}});
    CHECK(r.feasible);
    CHECK(r.per_index[0].witness == std::vector<std::int64_t>{1, m - 1});
    CHECK_FALSE(ku_feasible({{m, m}}).feasible);
  }
  for (std::int64_t m = 3; m <= 5; ++m) CHECK_FALSE(ku_feasible({{2, 2}, {3, 3}, {m, m}}).feasible);
  CHECK(ku_feasible({{2, 2}, {2, 2}, {2, 2}}).feasible);
  try {
    ku_feasible({});
    FAIL("expected EmptyInput");
  } catch (const Error& err) {
    CHECK(err.kind() == ErrorKind::EmptyInput);
  }
}

TEST_CASE("equal multiplicities are forced for two tame fibers") {
  for (std::int64_t a = 2; a <= 30; ++a)
    for (std::int64_t b = 2; b <= 30; ++b) CHECK(ku_feasible({{a, a}, {b, b}}).feasible == (a == b));
}

TEST_CASE("dynamic programming agrees with residue exhaustion") {
  std::vector<std::pair<std::int64_t, std::int64_t>> atoms;
  for (std::int64_t m = 1; m <= 12; ++m)
    for (std::int64_t nu = 1; nu <= m; ++nu)
      if (m % nu == 0) atoms.emplace_back(m, nu);
  std::size_t count = 0;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    for (std::size_t j = i; j <= atoms.size(); ++j) {
      for (std::size_t k = j; k <= atoms.size(); ++k) {
        if (j == atoms.size() && k != atoms.size()) continue;
        Types t = {atoms[i]};
        if (j < atoms.size()) t.push_back(atoms[j]);
        if (k < atoms.size()) t.push_back(atoms[k]);
        const auto r = ku_feasible(t);
        CHECK(r.feasible == brute_ku(t));
        for (std::size_t x = 0; x < t.size(); ++x)
          if (r.per_index[x].feasible) CHECK(witness_ok(t, x, r.per_index[x].witness));
        ++count;
      }
    }
  }
  CHECK(count > 8000);
}

TEST_CASE("feasibility is invariant under permutation") {
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<std::int64_t> mdist(1, 12);
  for (int trial = 0; trial < 500; ++trial) {
    Types t;
    const int len = 1 + trial % 4;
    for (int i = 0; i < len; ++i) {
      const auto m = mdist(rng);
      std::vector<std::int64_t> divs;
      for (std::int64_t d = 1; d <= m; ++d)
        if (m % d == 0) divs.push_back(d);
      t.emplace_back(m, divs[rng() % divs.size()]);
    }
    const bool base = ku_feasible(t).feasible;
    for (int s = 0; s < 5; ++s) {
      std::shuffle(t.begin(), t.end(), rng);
      CHECK(ku_feasible(t).feasible == base);
    }
  }
}

TEST_CASE("enumeration with d = 0") {
  auto en = enumerate_configs(0, 0, 60);
  std::map<std::string, std::set<std::string>> got;
  for (const auto& fam : en.families)
    for (const auto& c : fam.members) got[fam.id].insert(c.to_string());
  std::map<std::string, std::set<std::string>> want;
  want["I"].insert("d=0 ()");
  for (int m = 2; m <= 60; ++m) {
    const auto f = MultipleFiber::tame(m).to_string();
    want["II"].insert("d=0 (" + f + ", " + f + ")");
  }
  want["III"].insert("d=0 (1/2, 1/2, 1/2)");
  CHECK(got == want);
  CHECK(en.max_m == 60);
}

TEST_CASE("enumeration with d = -1") {
  for (std::uint32_t p : {2u, 3u, 5u}) {
    CAPTURE(p);
    auto en = enumerate_configs(-1, p, 60);
    std::map<std::string, std::set<std::string>> got;
    for (const auto& fam : en.families)
      for (const auto& c : fam.members) got[fam.id].insert(c.to_string());
    std::map<std::string, std::set<std::string>> want;
    for (std::int64_t q = p; q <= 60; q *= p) {
      want["IV"].insert("d=-1 (" + std::to_string(q - 1) + "/" + std::to_string(q) + "*)");
      want["V"].insert("d=-1 (" + std::to_string(q - 2) + "/" + std::to_string(q) + "*)");
    }
    if (p == 2) want["VI"].insert("d=-1 (0/2*, 1/2)");
    CHECK(got == want);
    for (const auto& fam : en.families)
      for (const auto& c : fam.members) CHECK(validate_config(c).empty());
  }
  CHECK(enumerate_configs(-1, 0, 30).families.empty());
  try {
    enumerate_configs(1, 2, 10);
    FAIL("expected OutOfScope");
  } catch (const Error& err) {
    CHECK(err.kind() == ErrorKind::OutOfScope);
  }
}

TEST_CASE("canonical coefficient and its parity") {
  FiberConfig two{0, 0, {MultipleFiber::tame(7), MultipleFiber::tame(7)}, std::nullopt};
  CHECK(kodaira_coefficient(two) == -2);
  FiberConfig three{0, 0, {MultipleFiber::tame(2), MultipleFiber::tame(2), MultipleFiber::tame(2)}, std::nullopt};
  CHECK(kodaira_coefficient(three) == -1);
  FiberConfig v{-1, 3, {{9, 7, 1, true}}, std::nullopt};
  CHECK(kodaira_coefficient(v) == -2);
  CHECK(kodaira_coefficient(FiberConfig{0, 0, {}, std::nullopt}) == -2);
  try {
    kodaira_coefficient(FiberConfig{0, 0, {MultipleFiber::tame(2), MultipleFiber::tame(3)}, std::nullopt});
    FAIL("expected MixedMultiplicities");
  } catch (const Error& err) {
    CHECK(err.kind() == ErrorKind::MixedMultiplicities);
  }
  const std::set<std::string> even = {"I", "II", "V"};
  for (auto [d, p] : {std::pair{0, 0u}, {0, 3u}, {-1, 2u}, {-1, 3u}, {-1, 5u}}) {
    for (const auto& fam : enumerate_configs(d, p, 40).families) {
      for (const auto& c : fam.members) {
        const auto k = kodaira_coefficient(c);
        CHECK((k % 2 == 0) == (even.count(fam.id) == 1));
      }
    }
  }
}
