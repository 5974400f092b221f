#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "ruledfib/classifier.hpp"

using namespace ruledfib;

namespace {

ClassificationInput symbolic(std::uint32_t p, Reduction r, BundleShape s, std::optional<LineOrder> ord = {}) {
  ClassificationInput in;
  in.shape = s;
  in.symbolic = {p, r, std::nullopt};
  in.order = ord;
  return in;
}

ClassificationInput concrete(const Curve& e, BundleShape s, std::optional<CurvePoint> pt = {}) {
  ClassificationInput in;
  in.shape = s;
  in.curve = e;
  in.point = pt;
  return in;
}

Curve f2_ordinary() { return Curve::make(make_field(2, 1), {1, 1, 0, 0, 1}); }
Curve f2_super() { return Curve::make(make_field(2, 1), {0, 0, 1, 0, 0}); }
Curve f5_full() { return Curve::make(make_field(5, 1), {0, 0, 0, 4, 0}); }
Curve f3_super() { return Curve::make(make_field(3, 1), {0, 0, 0, 2, 0}); }
Curve f3_ordinary() { return Curve::make(make_field(3, 1), {0, 1, 0, 0, 1}); }

CurvePoint affine(const Curve& e) {
  for (const auto& q : e.points())
    if (!q.is_infinity()) return q;
  FAIL("no affine point");
  return e.infinity();
}

// Invariants every emitted result must satisfy.
void check_invariants(const ClassificationInput& in, const ClassificationResult& r) {
  CAPTURE(r.row_id);
  CHECK(r.fibers.empty() == (r.row_id == "i-1" || !r.has_fibration));
  CHECK(r.strange_type() == (r.row_id == "ii-2"));
  if (!r.has_fibration) return;
  FiberConfig c{r.d, in.p(), r.fibers, std::nullopt};
  const auto wild = std::count_if(r.fibers.begin(), r.fibers.end(), [](const auto& f) { return f.wild; });
  CHECK(r.d == -wild);
  CHECK(validate_config(c).empty());
  CHECK((kodaira_coefficient(c) % 2 == 0) == (r.e == 0));
  const bool mm = r.fibers.size() == 2 && r.fibers[0].m == r.fibers[1].m && !r.fibers[0].wild;
  if (r.e == 0 && !r.fibers.empty()) CHECK(mm == (in.shape == BundleShape::Decomposable));
}

void check_row(const ClassificationInput& in, const std::string& row) {
  const auto r = classify(in);
  const auto t = table_lookup(in);
  CHECK(r.row_id == row);
  CHECK(r.same_answer(t));
  CHECK_FALSE(r.trace.empty());
  check_invariants(in, r);
}

}  // namespace

TEST_CASE("worked examples") {
  auto i1 = classify(symbolic(0, Reduction::NotApplicable, BundleShape::Decomposable));
  CHECK(i1.has_fibration);
  CHECK(i1.row_id == "i-1");
  CHECK(i1.fibers.empty());

  auto i5 = classify(symbolic(3, Reduction::Ordinary, BundleShape::Atiyah));
  CHECK(i5.row_id == "i-5");
  REQUIRE(i5.fibers.size() == 1);
  CHECK(i5.fibers[0].a == 1);
  CHECK(i5.fibers[0].m == 3);
  CHECK(i5.fibers[0].wild);

  auto ii2 = classify(symbolic(2, Reduction::Supersingular, BundleShape::ExtQ));
  CHECK(ii2.row_id == "ii-2");
  REQUIRE(ii2.fibers.size() == 1);
  CHECK(ii2.fibers[0] == MultipleFiber{2, 1, 1, true});
  CHECK(ii2.strange_type());

  auto ii3 = classify(symbolic(2, Reduction::Ordinary, BundleShape::ExtQ));
  CHECK(ii3.row_id == "ii-3");
  CHECK(ii3.fibers == std::vector<MultipleFiber>{{2, 0, 1, true}, MultipleFiber::tame(2)});

  auto i2 = classify(symbolic(5, Reduction::Ordinary, BundleShape::Decomposable, LineOrder::finite(4)));
  CHECK(i2.row_id == "i-2");
  CHECK(i2.fibers == std::vector<MultipleFiber>{MultipleFiber::tame(4), MultipleFiber::tame(4)});

  auto i4 = classify(symbolic(0, Reduction::NotApplicable, BundleShape::Atiyah));
  CHECK_FALSE(i4.has_fibration);
  CHECK(i4.row_id == "i-4");
}

TEST_CASE("symbolic rows in characteristic 0") {
  const auto n = Reduction::NotApplicable;
  check_row(symbolic(0, n, BundleShape::Decomposable), "i-1");
  for (std::uint64_t m : {2, 3, 6, 12}) check_row(symbolic(0, n, BundleShape::Decomposable, LineOrder::finite(m)), "i-2");
  check_row(symbolic(0, n, BundleShape::Decomposable, LineOrder::infinite()), "i-3");
  check_row(symbolic(0, n, BundleShape::Atiyah), "i-4");
  check_row(symbolic(0, n, BundleShape::ExtQ), "ii-1");
}

TEST_CASE("symbolic rows in positive characteristic") {
  for (std::uint32_t p : {2u, 3u, 5u, 7u}) {
    for (auto red : {Reduction::Ordinary, Reduction::Supersingular}) {
      CAPTURE(p);
      check_row(symbolic(p, red, BundleShape::Atiyah), "i-5");
      check_row(symbolic(p, red, BundleShape::ExtQ), p == 2 ? (red == Reduction::Supersingular ? "ii-2" : "ii-3") : "ii-1");
      check_row(symbolic(p, red, BundleShape::Decomposable, LineOrder::infinite()), "i-3");
    }
    check_row(symbolic(p, Reduction::Ordinary, BundleShape::Decomposable, LineOrder::finite(p)), "i-2");
    check_row(symbolic(p, Reduction::Ordinary, BundleShape::Decomposable, LineOrder::finite(2 * p)), "i-2");
  }
}

TEST_CASE("concrete rows over small fields") {
  auto e = f5_full();
  check_row(concrete(e, BundleShape::Decomposable), "i-1");
  for (const auto& q : e.points()) {
    if (q.is_infinity()) continue;
    check_row(concrete(e, BundleShape::Decomposable, q), "i-2");
  }
  check_row(concrete(e, BundleShape::Atiyah), "i-5");
  check_row(concrete(e, BundleShape::ExtQ, e.point(0, 0)), "ii-1");
  check_row(concrete(f3_super(), BundleShape::ExtQ, affine(f3_super())), "ii-1");
  check_row(concrete(f3_ordinary(), BundleShape::Atiyah), "i-5");
  check_row(concrete(f3_super(), BundleShape::Atiyah), "i-5");
  check_row(concrete(f2_super(), BundleShape::ExtQ, affine(f2_super())), "ii-2");
  check_row(concrete(f2_ordinary(), BundleShape::ExtQ, affine(f2_ordinary())), "ii-3");
  check_row(concrete(f2_ordinary(), BundleShape::Atiyah), "i-5");
  auto f4 = make_field(2, 2);
  auto o4 = Curve::make(f4, {1, 0, 0, 0, 1});
  auto s4 = Curve::make(f4, {0, 0, 1, 0, 0});
  check_row(concrete(o4, BundleShape::ExtQ, affine(o4)), "ii-3");
  check_row(concrete(s4, BundleShape::ExtQ, affine(s4)), "ii-2");
  check_row(concrete(s4, BundleShape::Decomposable, affine(s4)), "i-2");
}

TEST_CASE("concrete evidence is attached to the trace") {
  auto e = f2_super();
  auto r = classify(concrete(e, BundleShape::ExtQ, e.point(0, 0)));
  bool built = false, checks = false;
  for (const auto& s : r.trace) {
    if (s.rule == "pullback-trivialization" && s.detail.find("phi =") != std::string::npos) built = true;
    if (s.rule == "resolution-checks" && s.detail.find("all diagram checks pass") != std::string::npos) checks = true;
  }
  CHECK(built);
  CHECK(checks);
}

TEST_CASE("orders requested on a concrete curve") {
  auto e = f2_ordinary();
  auto in = concrete(e, BundleShape::Decomposable);
  in.order = LineOrder::finite(7);
  auto r = classify(in);
  CHECK_FALSE(r.status.has_value());
  CHECK(r.row_id == "i-2");
  CHECK(r.same_answer(table_lookup(in)));

  in.max_extension = 1;
  r = classify(in);
  REQUIRE(r.status.has_value());
  CHECK(*r.status == ErrorKind::UnreachableOverField);
  CHECK(r.symbolic_mode);
  CHECK(r.row_id == "i-2");

  in.order = LineOrder::infinite();
  r = classify(in);
  CHECK(r.status == ErrorKind::UnreachableOverField);
  CHECK(r.row_id == "i-3");
  CHECK_FALSE(r.has_fibration);
}

TEST_CASE("input validation") {
  CHECK_THROWS_AS(classify(symbolic(0, Reduction::Ordinary, BundleShape::Atiyah)), Error);
  CHECK_THROWS_AS(classify(symbolic(4, Reduction::Ordinary, BundleShape::Atiyah)), Error);
  CHECK_THROWS_AS(classify(symbolic(3, Reduction::Supersingular, BundleShape::Decomposable, LineOrder::finite(3))),
                  Error);
  try {
    classify(symbolic(3, Reduction::Ordinary, BundleShape::Decomposable, LineOrder::unknown()));
    FAIL("expected UnknownOrder");
  } catch (const Error& err) {
    CHECK(err.kind() == ErrorKind::UnknownOrder);
  }
  auto e = f5_full();
  CHECK_THROWS_AS(classify(concrete(e, BundleShape::ExtQ)), Error);
  CHECK_THROWS_AS(classify(concrete(e, BundleShape::Decomposable, affine(f3_super()))), Error);
}
