#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "ruledfib/isogeny.hpp"

using namespace ruledfib;

namespace {

Curve ordinary_f2() { return Curve::make(make_field(2, 1), {1, 1, 0, 0, 1}); }
Curve supersingular_f2() { return Curve::make(make_field(2, 1), {0, 0, 1, 0, 0}); }
Curve full_two_torsion_f5() { return Curve::make(make_field(5, 1), {0, 0, 0, 4, 0}); }

// Homomorphism check on the points of a small extension.
void check_homomorphism(const Isogeny& phi, int j) {
  auto ext = extend_curve(phi.domain(), j);
  auto phi_j = phi.base_change(ext);
  const auto pts = ext.curve.points();
  for (std::size_t i = 0; i < pts.size(); i += 3)
    for (std::size_t k = 0; k < pts.size(); k += 5) CHECK(phi_j(pts[i] + pts[k]) == phi_j(pts[i]) + phi_j(pts[k]));
}

}  // namespace

TEST_CASE("Frobenius on a prime-field curve is an endomorphism") {
  auto e = ordinary_f2();
  auto fr = frobenius_isogeny(e);
  CHECK(fr.codomain() == e);
  CHECK(fr.degree() == 2);
  CHECK_FALSE(fr.separable());
  CHECK(fr.dual_separable());
  CHECK_FALSE(frobenius_isogeny(supersingular_f2()).dual_separable());
}

TEST_CASE("Frobenius over F_4 moves the curve") {
  auto f4 = make_field(2, 2);
  FieldElement w(f4, 2);
  auto e = Curve::make(f4, FieldElement::one(f4), w, FieldElement::zero(f4), FieldElement::zero(f4),
                       FieldElement::one(f4));
  auto fr = frobenius_isogeny(e);
  CHECK(fr.codomain() != e);
  CHECK(fr.codomain().a2() == w * w);
  auto onto = frobenius_onto(e);
  CHECK(onto.codomain() == e);
  for (const auto& p : e.points()) {
    if (p.is_infinity()) continue;
    CHECK(fr.codomain().contains(fr(p).x(), fr(p).y()));
  }
}

TEST_CASE("Velu quotient by a 2-torsion point over F_2") {
  auto e = ordinary_f2();
  auto k = e.point(0, 1);
  REQUIRE(point_order(k) == 2);
  auto phi = velu_quotient(e, k);
  CHECK(phi.degree() == 2);
  CHECK(phi.separable());
  CHECK_FALSE(phi.dual_separable());
  CHECK(phi.kernel_points().size() == 2);
  CHECK(phi(k).is_infinity());
  check_homomorphism(phi, 4);
  auto dual = dual_isogeny(phi);
  CHECK(dual.degree() == 2);
  CHECK(equals_multiplication(phi, dual, 2));
  auto ext = extend_curve(e, 4);
  auto phi4 = phi.base_change(ext);
  auto dual4 = dual.base_change(extend_curve(phi.codomain(), 4));
  for (const auto& p : ext.curve.points()) CHECK(dual4(phi4(p)) == p * 2);
}

TEST_CASE("Velu over F_5 and the dual") {
  auto e = full_two_torsion_f5();
  for (const auto& k : torsion_points(e, 2)) {
    if (k.is_infinity()) continue;
    auto phi = velu_quotient(e, k);
    check_homomorphism(phi, 2);
    CHECK(phi.dual_separable());
    auto dual = dual_isogeny(phi);
    CHECK(equals_multiplication(phi, dual, 2));
  }
  auto p4 = e.points();
  for (const auto& p : p4) {
    if (point_order(p) != 4) continue;
    auto phi = velu_quotient(e, p);
    CHECK(phi.degree() == 4);
    check_homomorphism(phi, 2);
    break;
  }
}

TEST_CASE("trivial kernel") {
  auto e = ordinary_f2();
  try {
    velu_quotient(e, e.infinity());
    FAIL("expected OrderOne");
  } catch (const Error& err) {
    CHECK(err.kind() == ErrorKind::OrderOne);
  }
}

TEST_CASE("dual of Frobenius") {
  auto o = ordinary_f2();
  auto fr = frobenius_isogeny(o);
  auto v = dual_isogeny(fr);
  CHECK(v.separable());
  CHECK(equals_multiplication(fr, v, 2));
  auto s = supersingular_f2();
  auto frs = frobenius_isogeny(s);
  auto vs = dual_isogeny(frs);
  CHECK_FALSE(vs.separable());
  CHECK(equals_multiplication(frs, vs, 2));
}

TEST_CASE("degrees multiply under composition") {
  auto e = full_two_torsion_f5();
  auto k = e.point(0, 0);
  auto phi = velu_quotient(e, k);
  auto t = torsion_points(phi.codomain(), 2);
  for (const auto& q : t) {
    if (q.is_infinity()) continue;
    auto psi = velu_quotient(phi.codomain(), q);
    auto c = compose(phi, psi);
    CHECK(c.degree() == phi.degree() * psi.degree());
    CHECK(c.kind() == IsogenyKind::Composite);
    for (const auto& p : e.points()) CHECK(c(p) == psi(phi(p)));
  }
}

TEST_CASE("preimages under a separable degree-2 isogeny") {
  auto e = full_two_torsion_f5();
  auto phi = velu_quotient(e, e.point(0, 0));
  std::size_t full = 0;
  for (const auto& p : e.points()) {
    auto q = phi(p);
    auto pre = preimages(phi, q);
    CHECK(pre.multiplicity == 1);
    REQUIRE(pre.points.size() == 2);
    CHECK(std::find(pre.points.begin(), pre.points.end(), p) != pre.points.end());
    CHECK(point_order(pre.points[0] - pre.points[1]) == 2);
    ++full;
  }
  CHECK(full == e.count());
}

TEST_CASE("preimages needing an extension are reported") {
  auto e = full_two_torsion_f5();
  auto phi = velu_quotient(e, e.point(0, 0));
  const auto image = [&] {
    std::vector<CurvePoint> v;
    for (const auto& p : e.points()) v.push_back(phi(p));
    return v;
  }();
  for (const auto& q : phi.codomain().points()) {
    if (std::find(image.begin(), image.end(), q) != image.end()) continue;
    try {
      preimages(phi, q);
      FAIL("expected NeedsExtension");
    } catch (const NeedsExtension& ne) {
      CHECK(ne.degree() == 2);
    }
  }
}

TEST_CASE("Frobenius preimage is unique with multiplicity p") {
  auto e = ordinary_f2();
  auto fr = frobenius_isogeny(e);
  for (const auto& q : e.points()) {
    auto pre = preimages(fr, q);
    CHECK(pre.points.size() == 1);
    CHECK(pre.multiplicity == 2);
    CHECK(fr(pre.points[0]) == q);
  }
}

TEST_CASE("isomorphisms") {
  auto s = Curve::make(make_field(2, 2), {0, 0, 1, 0, 0});
  auto autos = find_isomorphisms(s, s);
  CHECK(autos.size() >= 2);
  for (const auto& a : autos) {
    CHECK(a.degree() == 1);
    for (const auto& p : s.points())
      for (const auto& q : s.points()) CHECK(a(p + q) == a(p) + a(q));
  }
  auto e = full_two_torsion_f5();
  auto id = identity_isogeny(e);
  for (const auto& p : e.points()) CHECK(id(p) == p);
}
