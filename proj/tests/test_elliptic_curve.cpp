#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "ruledfib/elliptic_curve.hpp"

using namespace ruledfib;

namespace {

// Count affine solutions by trying every (x, y) pair.
std::uint64_t brute_count(const Curve& e) {
  std::uint64_t n = 1;
  const auto elems = all_elements(e.field());
  for (const auto& x : elems)
    for (const auto& y : elems) n += e.contains(x, y) ? 1 : 0;
  return n;
}

std::vector<Curve> sample_curves() {
  std::vector<Curve> out;
  auto f2 = make_field(2, 1);
  out.push_back(Curve::make(f2, {0, 0, 1, 0, 0}));  // y^2 + y = x^3
  out.push_back(Curve::make(f2, {1, 1, 0, 0, 1}));  // y^2 + xy = x^3 + x^2 + 1
  auto f4 = make_field(2, 2);
  out.push_back(Curve::make(f4, {1, 0, 0, 0, 1}));
  out.push_back(Curve::make(f4, {0, 0, 1, 0, 0}));
  auto f3 = make_field(3, 1);
  out.push_back(Curve::make(f3, {0, 0, 0, 2, 0}));  // y^2 = x^3 - x
  out.push_back(Curve::make(f3, {0, 1, 0, 0, 1}));
  auto f5 = make_field(5, 1);
  out.push_back(Curve::make(f5, {0, 0, 0, 4, 0}));  // y^2 = x^3 - x
  out.push_back(Curve::make(f5, {0, 0, 0, 1, 1}));
  auto f9 = make_field(3, 2);
  out.push_back(Curve::make(f9, {0, 0, 0, 1, 1}));
  auto f7 = make_field(7, 1);
  out.push_back(Curve::make(f7, {1, 2, 3, 4, 5}));
  return out;
}

}  // namespace

TEST_CASE("supersingular curve over F_2") {
  auto e = Curve::make(make_field(2, 1), {0, 0, 1, 0, 0});
  CHECK(brute_count(e) == 3);
  CHECK(e.count() == 3);
  CHECK(e.trace() == 0);
  CHECK(e.supersingular());
}

TEST_CASE("ordinary curve over F_2") {
  auto e = Curve::make(make_field(2, 1), {1, 1, 0, 0, 1});
  const auto n = brute_count(e);
  CHECK(e.count() == n);
  const std::int64_t t = 3 - static_cast<std::int64_t>(n);
  CHECK(e.trace() == t);
  CHECK(e.ordinary() == (t % 2 != 0));
  CHECK(e.ordinary());
}

TEST_CASE("singular equation is rejected") {
  try {
    Curve::make(make_field(3, 1), {0, 0, 0, 0, 0});
    FAIL("expected SingularCurve");
  } catch (const Error& err) {
    CHECK(err.kind() == ErrorKind::SingularCurve);
  }
}

TEST_CASE("counts, Hasse bound and supersingularity cross-check") {
  for (const auto& e : sample_curves()) {
    CAPTURE(e.to_string());
    CHECK(e.count() == brute_count(e));
    CHECK(static_cast<double>(std::llabs(e.trace())) <= 2.0 * std::sqrt(static_cast<double>(e.field()->order)));
    CHECK(e.supersingular() == (e.trace() % static_cast<std::int64_t>(e.characteristic()) == 0));
    // Independent criterion: #E(F_{q^j}) = 1 mod p for all j iff supersingular.
    bool all_one = true;
    for (int j = 1; j <= 6; ++j) all_one &= e.count_over_extension(j) % e.characteristic() == 1;
    CHECK(all_one == e.supersingular());
  }
}

TEST_CASE("extension counts agree with enumeration") {
  for (const auto& e : sample_curves()) {
    if (e.field()->order > 5) continue;
    for (int j = 2; j <= 4; ++j) {
      auto ext = extend_curve(e, j);
      CHECK(ext.curve.count() == e.count_over_extension(j));
    }
  }
}

TEST_CASE("group axioms on random triples") {
  std::mt19937_64 rng(11);
  for (const auto& e : sample_curves()) {
    const auto pts = e.points();
    REQUIRE(pts.size() == e.count());
    std::uniform_int_distribution<std::size_t> pick(0, pts.size() - 1);
    for (int i = 0; i < 1000; ++i) {
      const auto& p = pts[pick(rng)];
      const auto& q = pts[pick(rng)];
      const auto& r = pts[pick(rng)];
      CHECK((p + q) + r == p + (q + r));
      CHECK(p + q == q + p);
      CHECK(p + e.infinity() == p);
      CHECK((p + (-p)).is_infinity());
    }
  }
}

TEST_CASE("associativity on every triple over F_4") {
  auto e = Curve::make(make_field(2, 2), {1, 0, 0, 0, 1});
  const auto pts = e.points();
  for (const auto& p : pts)
    for (const auto& q : pts)
      for (const auto& r : pts) CHECK((p + q) + r == p + (q + r));
}

TEST_CASE("point orders") {
  auto e = Curve::make(make_field(2, 1), {0, 0, 1, 0, 0});
  CHECK(point_order(e.infinity()) == 1);
  auto p = e.point(0, 0);
  CHECK(point_order(p) == 3);
  CHECK(!(p * 2).is_infinity());
  CHECK((p * 3).is_infinity());
  for (const auto& c : sample_curves())
    for (const auto& q : c.points()) CHECK(c.count() % point_order(q) == 0);
}

TEST_CASE("group structure and torsion") {
  auto e = Curve::make(make_field(5, 1), {0, 0, 0, 4, 0});
  CHECK(e.count() == 8);
  CHECK(e.group_structure() == std::pair<std::uint64_t, std::uint64_t>{2, 4});
  CHECK(torsion_points(e, 2).size() == 4);
  CHECK(geometric_torsion_size(e, 2) == 4);
  CHECK(full_torsion_extension_degree(e, 2) == 1);
  auto s = Curve::make(make_field(2, 1), {0, 0, 1, 0, 0});
  CHECK(geometric_torsion_size(s, 2) == 1);
  CHECK(geometric_torsion_size(s, 6) == 9);
  auto o = Curve::make(make_field(2, 1), {1, 1, 0, 0, 1});
  CHECK(geometric_torsion_size(o, 2) == 2);
  CHECK(full_torsion_extension_degree(o, 2) == 1);
}

TEST_CASE("points off the curve are rejected") {
  auto e = Curve::make(make_field(5, 1), {0, 0, 0, 4, 0});
  CHECK_THROWS_AS(e.point(1, 1), Error);
}

TEST_CASE("mixed curves") {
  auto a = Curve::make(make_field(5, 1), {0, 0, 0, 4, 0});
  auto b = Curve::make(make_field(5, 1), {0, 0, 0, 1, 1});
  try {
    (void)add_points(a.point(0, 0), b.points()[1]);
    FAIL("expected MixedCurves");
  } catch (const Error& err) {
    CHECK(err.kind() == ErrorKind::MixedCurves);
  }
}

TEST_CASE("lifting respects the group law") {
  auto e = Curve::make(make_field(2, 1), {1, 1, 0, 0, 1});
  auto ext = extend_curve(e, 3);
  for (const auto& p : e.points())
    for (const auto& q : e.points()) CHECK(ext.lift(p + q) == ext.lift(p) + ext.lift(q));
}
