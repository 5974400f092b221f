#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "ruledfib/cover_diagram.hpp"
#include "ruledfib/error.hpp"

using namespace ruledfib;

namespace {

CoverStage two_sheet(std::uint32_t p, BaseFiber b) {
  CoverStage s;
  s.deg_phi = s.deg_q = 2;
  s.psi = {2, true, p, {}};
  s.fibers.push_back(std::move(b));
  return s;
}

bool has(const std::vector<Violation>& v, const std::string& name) {
  for (const auto& x : v)
    if (x.name == name) return true;
  return false;
}

void require_all_pass(const CoverDiagram& d) {
  for (const auto& c : verify_diagram(d)) {
    CAPTURE(d.case_id);
    CAPTURE(c.name);
    CAPTURE(c.detail);
    CHECK(c.pass);
  }
}

Curve f5_full() { return Curve::make(make_field(5, 1), {0, 0, 0, 4, 0}); }
Curve f2_ordinary() { return Curve::make(make_field(2, 1), {1, 1, 0, 0, 1}); }
Curve f2_super() { return Curve::make(make_field(2, 1), {0, 0, 1, 0, 0}); }

}  // namespace

TEST_CASE("accounting on hand-built fibers") {
  // unramified point under a non-multiple fiber
  CHECK(check_accounting(two_sheet(3, {"R", 1, 0, false, {UpperFiber{}, UpperFiber{}}})).empty());
  // two unramified points over m = 2, both multiple
  CHECK(check_accounting(two_sheet(3, {"Q", 2, 1, false, {UpperFiber{1, 2}, UpperFiber{1, 2}}})).empty());
  const auto bad = check_accounting(two_sheet(3, {"Q", 2, 1, false, {UpperFiber{1, 1}, UpperFiber{1, 2}}}));
  CHECK(has(bad, "multiplicity-divides"));
  CHECK(has(bad, "unramified-unit-forces-unit-lower"));
  CHECK(has(check_accounting(two_sheet(3, {"R", 1, 0, false, {UpperFiber{1, 2}, UpperFiber{1, 1}}})),
            "unit-lower-forces-unit-upper"));
  CHECK(has(check_accounting(two_sheet(3, {"Q", 2, 1, false, {UpperFiber{1, 2}}})), "ramification-sum"));
  auto s = two_sheet(3, {"R", 1, 0, false, {UpperFiber{}, UpperFiber{}}});
  s.deg_q = 3;
  CHECK(has(check_accounting(s), "stein-degree"));
  CHECK(has(check_accounting(s), "fiber-product-degree"));
}

TEST_CASE("wildness transfer clauses") {
  auto pair_tame = two_sheet(3, {"Q", 2, 1, false, {UpperFiber{1, 2, false}, UpperFiber{1, 2, false}}});
  CHECK(wildness_transfer(pair_tame, 0) == Wildness::Tame);
  auto pair_wild = two_sheet(2, {"Q", 2, 0, true, {UpperFiber{1, 2, true}, UpperFiber{1, 2, true}}});
  CHECK(wildness_transfer(pair_wild, 0) == Wildness::Wild);
  auto ram_sep = two_sheet(2, {"Q", 2, 0, true, {UpperFiber{2, 1, false, 2, true}}});
  CHECK(wildness_transfer(ram_sep, 0) == Wildness::Wild);
  auto ram_insep = two_sheet(2, {"Q", 2, 0, true, {UpperFiber{2, 1, false, 2, false}}});
  CHECK(wildness_transfer(ram_insep, 0) == Wildness::Undetermined);
  auto ram_iso = two_sheet(2, {"Q", 2, 1, true, {UpperFiber{2, 2, true, 1, true}}});
  CHECK(wildness_transfer(ram_iso, 0) == Wildness::Wild);
  auto odd = two_sheet(3, {"Q", 2, 1, false, {UpperFiber{2, 1, false, 2, true}}});
  CHECK(wildness_transfer(odd, 0) == Wildness::Undetermined);
  auto deg3 = pair_tame;
  deg3.deg_q = 3;
  CHECK(wildness_transfer(deg3, 0) == Wildness::Undetermined);
  CHECK(wildness_name(Wildness::Wild) == "wild");
}

TEST_CASE("Hurwitz count") {
  CHECK(hurwitz_check({2, true, 3, {{"Q1", 2, 1}, {"Q2", 2, 1}}}));
  CHECK(hurwitz_check({2, true, 2, {{"Q1", 2, 2}}}));
  CHECK_FALSE(hurwitz_check({2, true, 2, {{"Q1", 2, 1}, {"Q2", 2, 1}}}));
  CHECK_FALSE(hurwitz_check({2, true, 3, {{"Q1", 2, 1}}}));
  CHECK(hurwitz_check({3, true, 3, {{"Q1", 3, 4}}}));
  CHECK(hurwitz_check({3, true, 5, {{"Q1", 3, 2}, {"Q2", 3, 2}}}));
  CHECK(hurwitz_check({1, true, 5, {}}));
  try {
    hurwitz_check({2, false, 2, {}});
    FAIL("expected InseparableInput");
  } catch (const Error& err) {
    CHECK(err.kind() == ErrorKind::InseparableInput);
  }
}

TEST_CASE("2DD on the reduced fiber classes") {
  CoverStage s;
  s.e_lower = -1;
  s.e_upper = 0;
  s.deg_q = 2;
  CHECK(two_dd_holds(s));
  s.e_lower = 0;
  CHECK_FALSE(two_dd_holds(s));
}

TEST_CASE("i-2 with ord L prime to p") {
  auto e = f5_full();
  auto d = build_resolution("i-2", {e, e.point(0, 0)});
  REQUIRE(d.stages.size() == 1);
  CHECK(d.stages[0].psi.separable);
  CHECK(d.stages[0].deg_q == 2);
  CHECK(d.stages[0].upper_surface == "F x P^1");
  require_all_pass(d);

  auto f7 = Curve::make(make_field(7, 1), {0, 0, 0, 0, 1});
  auto d3 = build_resolution("i-2", {f7, f7.point(0, 1)}, 6);
  CHECK(d3.extension_degree > 1);
  CHECK(d3.stages[0].deg_q == 3);
  require_all_pass(d3);
  CHECK_THROWS_AS(build_resolution("i-2", {f7, f7.point(0, 1)}, 1), NeedsExtension);
}

TEST_CASE("i-2 with ord L = p on an ordinary curve") {
  auto e = f2_ordinary();
  auto d = build_resolution("i-2", {e, e.point(0, 1)});
  REQUIRE(d.stages.size() == 1);
  CHECK_FALSE(d.stages[0].psi.separable);
  CHECK_FALSE(d.stages[0].fibers[0].above[0].restriction_separable);
  require_all_pass(d);
}

TEST_CASE("i-5 in characteristic 3") {
  auto ord = Curve::make(make_field(3, 1), {0, 1, 0, 0, 1});
  REQUIRE(ord.ordinary());
  auto d = build_resolution("i-5", {ord, std::nullopt});
  CHECK(d.reduction == Reduction::Ordinary);
  CHECK(d.stages[0].psi.separable);
  CHECK(d.stages[0].psi.branch.size() == 1);
  CHECK(d.stages[0].psi.branch[0].contribution == 4);
  require_all_pass(d);

  auto ss = Curve::make(make_field(3, 1), {0, 0, 0, 2, 0});
  REQUIRE(ss.supersingular());
  auto s = build_resolution("i-5", {ss, std::nullopt});
  CHECK_FALSE(s.stages[0].psi.separable);
  require_all_pass(s);
}

TEST_CASE("ii-1 in characteristic 5 and 3") {
  auto e = f5_full();
  auto d = build_resolution("ii-1", {e, e.point(2, 1)}, 4);
  REQUIRE(d.stages.size() == 2);
  CHECK(d.stages[0].upper_surface == "P(O+L), ord L = 2");
  CHECK(d.stages[0].pulled_back_bundle.find(" + ") != std::string::npos);
  CHECK(d.stages[1].pulled_back_bundle == "O + O");
  require_all_pass(d);

  auto e3 = Curve::make(make_field(3, 1), {0, 0, 0, 2, 0});
  auto d3 = build_resolution("ii-1", {e3, e3.point(0, 0)}, 4);
  require_all_pass(d3);
}

TEST_CASE("ii-3 on an ordinary curve over F_2") {
  auto e = f2_ordinary();
  auto d = build_resolution("ii-3", {e, e.point(0, 1)}, 4);
  REQUIRE(d.stages.size() == 2);
  CHECK(d.stages[0].psi.branch.size() == 1);
  CHECK(wildness_transfer(d.stages[0], 0) == Wildness::Wild);
  require_all_pass(d);
}

TEST_CASE("ii-2 on a supersingular curve over F_2") {
  auto e = f2_super();
  auto d = build_resolution("ii-2", {e, e.point(0, 0)});
  REQUIRE(d.stages.size() == 2);
  CHECK(d.stages[0].upper_surface == "P(E20)");
  CHECK(wildness_transfer(d.stages[0], 0) == Wildness::Wild);
  require_all_pass(d);
}

TEST_CASE("unsupported and mismatched rows") {
  auto e = f5_full();
  for (const char* id : {"i-1", "i-3", "i-4"}) {
    try {
      build_resolution(id, {e, std::nullopt});
      FAIL("expected UnsupportedCase");
    } catch (const Error& err) {
      CHECK(err.kind() == ErrorKind::UnsupportedCase);
    }
  }
  CHECK_THROWS_AS(build_resolution("ii-2", {e, e.point(0, 0)}), Error);
  CHECK_THROWS_AS(build_resolution("ii-3", {f2_super(), f2_super().point(0, 0)}), Error);
  CHECK_THROWS_AS(build_resolution("i-2", {e, std::nullopt}), Error);
  // order 2p on an ordinary curve mixes both parts
  auto o = f2_ordinary();
  for (const auto& q : o.points()) {
    if (point_order(q) != 4) continue;
    try {
      build_resolution("i-2", {o, q});
      FAIL("expected UnsupportedCase");
    } catch (const Error& err) {
      CHECK(err.kind() == ErrorKind::UnsupportedCase);
    }
  }
}
