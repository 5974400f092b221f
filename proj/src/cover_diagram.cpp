#include "ruledfib/cover_diagram.hpp"

#include <algorithm>
#include <numeric>

#include "ruledfib/error.hpp"
#include "ruledfib/surface_lattice.hpp"

namespace ruledfib {

std::string_view wildness_name(Wildness w) {
  switch (w) {
    case Wildness::Tame: return "tame";
    case Wildness::Wild: return "wild";
    case Wildness::Undetermined: return "undetermined";
  }
  return "undetermined";
}

std::vector<Violation> check_accounting(const CoverStage& s) {
  std::vector<Violation> out;
  if (s.deg_phi != s.deg_q) out.push_back({"fiber-product-degree", "deg q must equal deg phi"});
  if (s.psi.degree != s.deg_q) out.push_back({"stein-degree", "deg psi must equal deg q"});
  for (const auto& b : s.fibers) {
    const std::string at = "over " + b.label;
    int sum_e = 0, sum_me = 0;
    for (const auto& u : b.above) {
      sum_e += u.e;
      if ((u.m * u.e) % b.m != 0) {
        out.push_back({"multiplicity-divides", at + ": m = " + std::to_string(b.m) + " does not divide m'e = " +
                                                   std::to_string(u.m * u.e)});
      } else {
        sum_me += u.m * u.e / b.m;
      }
    }
    if (sum_e != s.psi.degree) out.push_back({"ramification-sum", at + ": ramification indices do not sum to deg psi"});
    if (sum_me > s.deg_q) out.push_back({"multiplicity-sum", at + ": sum m'e/m exceeds deg q"});
    if (b.m == 1 && std::any_of(b.above.begin(), b.above.end(), [](const auto& u) { return u.m != 1; })) {
      out.push_back({"unit-lower-forces-unit-upper", at});
    }
    if (b.m != 1 && std::any_of(b.above.begin(), b.above.end(), [](const auto& u) { return u.e == 1 && u.m == 1; })) {
      out.push_back({"unramified-unit-forces-unit-lower", at});
    }
    for (const auto& u : b.above) {
      if (u.e == 1 && (b.m > 1) != (u.m > 1)) out.push_back({"unramified-multiple-iff", at});
    }
  }
  return out;
}

Wildness wildness_transfer(const CoverStage& s, std::size_t base_index) {
  if (s.deg_q != 2 || base_index >= s.fibers.size()) return Wildness::Undetermined;
  const auto& b = s.fibers[base_index];
  if (b.m < 2) return Wildness::Undetermined;
  const auto& up = b.above;
  if (up.size() == 2 && up[0].e == 1 && up[1].e == 1 && up[0].m == b.m && up[1].m == b.m &&
      up[0].wild == up[1].wild) {
    return up[0].wild ? Wildness::Wild : Wildness::Tame;
  }
  if (s.psi.p == 2 && b.m == 2 && up.size() == 1 && up[0].e == 2) {
    if (up[0].m == 1 && up[0].restriction_separable) return Wildness::Wild;
    if (up[0].m == 2 && up[0].restriction_degree == 1) return Wildness::Wild;
  }
  return Wildness::Undetermined;
}

bool hurwitz_check(const PsiData& psi) {
  if (!psi.separable) throw Error(ErrorKind::InseparableInput, "Hurwitz count needs a separable map");
  int total = 0;
  for (const auto& b : psi.branch) {
    if (b.e < 2 || b.e > psi.degree) return false;
    const bool wild = psi.p > 0 && b.e % static_cast<int>(psi.p) == 0;
    if (wild ? b.contribution < b.e : b.contribution != b.e - 1) return false;
    total += b.contribution;
  }
  return total == 2 * psi.degree - 2;
}

bool two_dd_holds(const CoverStage& s) {
  if (s.e_lower != -1) return false;
  return base_change_pullback(reduced_fiber_class(-1), s.deg_q, s.e_upper) == reduced_fiber_class(s.e_upper) * 2;
}

namespace {

std::string name_o_plus_l(int m) { return "P(O+L), ord L = " + std::to_string(m); }

bool is_power_of(std::uint64_t m, std::uint32_t p) {
  if (p == 0 || m < 2) return false;
  while (m % p == 0) m /= p;
  return m == 1;
}

std::vector<UpperFiber> copies(int n, UpperFiber u) { return std::vector<UpperFiber>(static_cast<std::size_t>(n), u); }

// Square resolving P(O + O(P - O)) by the isogeny that kills O(P - O).
CoverStage stage_decomposable(const Curve& e, const CurvePoint& pt) {
  const std::uint32_t p = e.characteristic();
  const auto m64 = point_order(pt);
  if (m64 < 2) throw Error(ErrorKind::InvalidInput, "L must be nontrivial");
  const int m = static_cast<int>(m64);
  const bool separable_case = p == 0 || m64 % p != 0;
  if (!separable_case && !(is_power_of(m64, p) && e.ordinary())) {
    throw Error(ErrorKind::UnsupportedCase, "ord L must be prime to p, or a power of p on an ordinary curve");
  }
  const Isogeny phi = kill_torsion_line(e, pt);
  const auto pulled = pullback(BundleExpr::split(LineClass::of_point(pt)), phi);
  for (const auto& s : pulled.bundle.summands()) {
    if (!s.twist.degree_zero_part_trivial() || s.twist.degree() != 0) {
      throw Error(ErrorKind::InvalidInput, "pullback of O+L did not trivialize");
    }
  }
  CoverStage st;
  st.lower_surface = name_o_plus_l(m);
  st.upper_surface = "F x P^1";
  st.phi = phi.describe();
  st.deg_phi = static_cast<int>(phi.degree());
  st.phi_separable = phi.separable();
  st.deg_q = st.deg_phi;
  st.psi = {m, separable_case, p, {}};
  st.pulled_back_bundle = pulled.bundle.to_string();
  for (const char* q : {"Q1", "Q2"}) {
    BaseFiber b{q, m, m - 1, false, {}};
    b.above = {UpperFiber{m, 1, false, m, separable_case}};
    st.fibers.push_back(b);
    if (separable_case) st.psi.branch.push_back({q, m, m - 1});
  }
  BaseFiber generic{"R", 1, 0, false, {}};
  generic.above = separable_case ? copies(m, UpperFiber{}) : std::vector<UpperFiber>{UpperFiber{m, 1, false, 1, false}};
  st.fibers.push_back(generic);
  st.notes.push_back(separable_case ? "psi is branched over both multiple-fiber points"
                                    : "phi, q and psi are purely inseparable of degree " + std::to_string(m));
  return st;
}

// Square resolving P(E_{2,0}) by the dual of Frobenius.
CoverStage stage_atiyah(const Curve& e) {
  const std::uint32_t p = e.characteristic();
  const int pi = static_cast<int>(p);
  const Isogeny phi = dual_isogeny(frobenius_isogeny(e));
  const auto pulled = pullback(BundleExpr::atiyah(2), phi);
  const bool ord = e.ordinary();
  CoverStage st;
  st.lower_surface = "P(E20)";
  st.upper_surface = "F x P^1";
  st.phi = phi.describe();
  st.deg_phi = static_cast<int>(phi.degree());
  st.phi_separable = phi.separable();
  st.deg_q = st.deg_phi;
  st.psi = {pi, ord, p, {}};
  st.pulled_back_bundle = pulled.bundle.to_string();
  BaseFiber q1{"Q1", pi, pi - 2, true, {UpperFiber{pi, 1, false, pi, ord}}};
  st.fibers.push_back(q1);
  BaseFiber generic{"R", 1, 0, false, ord ? copies(pi, UpperFiber{}) : std::vector<UpperFiber>{UpperFiber{pi, 1, false, 1, false}}};
  st.fibers.push_back(generic);
  if (ord) {
    st.psi.branch.push_back({"Q1", pi, 2 * pi - 2});
    st.notes.push_back("psi is wildly ramified with Q1 its unique branch point");
  } else {
    st.notes.push_back("phi, q and psi are purely inseparable of degree p");
  }
  st.notes.push_back("m = p: m divides m'e with m' = 1 and e <= deg psi = p");
  return st;
}

// Some rational 2-torsion point, or NeedsExtension with the least degree providing one.
CurvePoint two_torsion_point(const Curve& e) {
  for (const auto& t : torsion_points(e, 2))
    if (!t.is_infinity()) return t;
  for (int j = 2; j <= kDefaultExtensionBound; ++j) {
    try {
      auto ext = extend_curve(e, j);
      if (torsion_points(ext.curve, 2).size() > 1) throw NeedsExtension(j, "no rational 2-torsion point");
    } catch (const NeedsExtension&) {
      throw;
    } catch (const Error&) {
      break;
    }
  }
  throw NeedsExtension(0, "no 2-torsion point found within the extension bound");
}

struct SeparableSplit {
  CoverStage stage;
  Curve upper_curve;
  CurvePoint torsion;  // Q2 - Q1 on the upper curve
};

// Square resolving P(E_Q) by a separable degree-2 isogeny onto E.
SeparableSplit stage_ext_separable(const Curve& e, const CurvePoint& q) {
  const std::uint32_t p = e.characteristic();
  const Isogeny phi = p == 2 ? dual_isogeny(frobenius_isogeny(e)) : dual_isogeny(velu_quotient(e, two_torsion_point(e)));
  if (!phi.separable() || phi.degree() != 2) throw Error(ErrorKind::InvalidInput, "expected a separable degree-2 isogeny");
  const auto pulled = pullback(BundleExpr::ext_q(q), phi);
  const auto& ss = pulled.bundle.summands();
  const CurvePoint q1 = ss.at(0).twist.point().value_or(phi.domain().infinity());
  const CurvePoint q2 = ss.at(1).twist.point().value_or(phi.domain().infinity());
  CoverStage st;
  st.lower_surface = "P(EQ)";
  st.upper_surface = name_o_plus_l(2);
  st.e_lower = -1;
  st.e_upper = 0;
  st.phi = phi.describe();
  st.deg_phi = 2;
  st.phi_separable = true;
  st.deg_q = 2;
  st.psi = {2, true, p, {}};
  st.pulled_back_bundle = pulled.bundle.to_string();
  const UpperFiber ramified{2, 1, false, 2, true};
  const UpperFiber tame_pair{1, 2, false, 1, true};
  if (p != 2) {
    st.fibers.push_back({"Q1", 2, 1, false, {ramified}});
    st.fibers.push_back({"Q2", 2, 1, false, {ramified}});
    st.fibers.push_back({"Q3", 2, 1, false, {tame_pair, tame_pair}});
    st.psi.branch = {{"Q1", 2, 1}, {"Q2", 2, 1}};
    st.notes.push_back("psi is branched at two of the three multiple-fiber points");
  } else {
    st.fibers.push_back({"Q1", 2, 0, true, {ramified}});
    st.fibers.push_back({"Q2", 2, 1, false, {tame_pair, tame_pair}});
    st.psi.branch = {{"Q1", 2, 2}};
    st.notes.push_back("psi is wildly ramified with the wild-fiber point Q1 its unique branch point");
  }
  st.fibers.push_back({"R", 1, 0, false, {UpperFiber{}, UpperFiber{}}});
  st.notes.push_back("(ii-1) fibers (2,2,2) carry no wild flag in the table; tame since d = 0 there");
  return {st, phi.domain(), q2 - q1};
}

struct FrobeniusSplit {
  CoverStage stage;
  Curve upper_curve;
};

// Square resolving P(E_Q) in characteristic 2 by Frobenius onto E.
FrobeniusSplit stage_ext_frobenius(const Curve& e, const CurvePoint& q) {
  const Isogeny phi = frobenius_onto(e);
  const auto pulled = pullback(BundleExpr::ext_q(q), phi);
  CoverStage st;
  st.lower_surface = "P(EQ)";
  st.upper_surface = "P(E20)";
  st.e_lower = -1;
  st.e_upper = 0;
  st.phi = phi.describe();
  st.deg_phi = 2;
  st.phi_separable = false;
  st.deg_q = 2;
  st.psi = {2, false, 2, {}};
  st.pulled_back_bundle = pulled.bundle.to_string();
  st.fibers.push_back({"Q1", 2, 1, true, {UpperFiber{2, 2, true, 1, true}}});
  st.fibers.push_back({"R", 1, 0, false, {UpperFiber{2, 1, false, 1, false}}});
  st.notes.push_back("Frobenius square: phi, q and psi purely inseparable of degree 2");
  st.notes.push_back("2D' = q^*D gives 2m = m'e = 4, so the wild fiber has m = 2 (alpha = 1)");
  return {st, phi.domain()};
}

CoverDiagram build_once(const std::string& case_id, const CaseData& data) {
  const Curve& e = data.curve;
  const std::uint32_t p = e.characteristic();
  CoverDiagram d;
  d.case_id = case_id;
  d.p = p;
  d.reduction = e.supersingular() ? Reduction::Supersingular : Reduction::Ordinary;
  auto need_point = [&]() -> const CurvePoint& {
    if (!data.point) throw Error(ErrorKind::InvalidInput, "case " + case_id + " needs a point");
    if (data.point->curve() != e) throw Error(ErrorKind::MixedCurves, "point is not on the curve");
    return *data.point;
  };
  if (case_id == "i-2") {
    d.stages.push_back(stage_decomposable(e, need_point()));
  } else if (case_id == "i-5") {
    d.stages.push_back(stage_atiyah(e));
  } else if (case_id == "ii-1" || case_id == "ii-3") {
    if ((case_id == "ii-1") != (p != 2)) throw Error(ErrorKind::InvalidInput, "ii-1 needs p != 2, ii-3 needs p = 2");
    if (p == 2 && e.supersingular()) throw Error(ErrorKind::InvalidInput, "ii-3 needs an ordinary curve");
    const CurvePoint& q = need_point();
    if (q.is_infinity()) throw Error(ErrorKind::InvalidInput, "Q must be an affine point");
    auto first = stage_ext_separable(e, q);
    d.stages.push_back(first.stage);
    d.stages.push_back(stage_decomposable(first.upper_curve, first.torsion));
  } else if (case_id == "ii-2") {
    if (p != 2 || !e.supersingular()) throw Error(ErrorKind::InvalidInput, "ii-2 needs a supersingular curve with p = 2");
    const CurvePoint& q = need_point();
    if (q.is_infinity()) throw Error(ErrorKind::InvalidInput, "Q must be an affine point");
    auto first = stage_ext_frobenius(e, q);
    d.stages.push_back(first.stage);
    d.stages.push_back(stage_atiyah(first.upper_curve));
  } else if (case_id == "i-1" || case_id == "i-3" || case_id == "i-4") {
    throw Error(ErrorKind::UnsupportedCase, "row " + case_id + " has no multiple fibers to resolve");
  } else {
    throw Error(ErrorKind::InvalidInput, "unknown row " + case_id);
  }
  return d;
}

}  // namespace

CoverDiagram build_resolution(const std::string& case_id, const CaseData& data, int max_extension) {
  if (case_id == "i-5" && data.curve.characteristic() == 0) throw Error(ErrorKind::CharZero, "i-5 needs p > 0");
  int deg = 1;
  for (;;) {
    try {
      if (deg == 1) return build_once(case_id, data);
      auto ext = extend_curve(data.curve, deg);
      CaseData lifted{ext.curve, std::nullopt};
      if (data.point) lifted.point = ext.lift(*data.point);
      auto d = build_once(case_id, lifted);
      d.extension_degree = deg;
      return d;
    } catch (const NeedsExtension& ne) {
      if (ne.degree() <= 0 || deg * ne.degree() > max_extension) throw;
      deg *= ne.degree();
    }
  }
}

std::vector<DiagramCheck> verify_diagram(const CoverDiagram& d) {
  std::vector<DiagramCheck> out;
  for (std::size_t k = 0; k < d.stages.size(); ++k) {
    const auto& s = d.stages[k];
    const std::string tag = "stage " + std::to_string(k + 1) + " ";
    const auto v = check_accounting(s);
    std::string names;
    for (const auto& x : v) names += (names.empty() ? "" : ", ") + x.name;
    out.push_back({tag + "accounting", v.empty(), names});
    if (s.psi.separable) {
      bool ok = false;
      try {
        ok = hurwitz_check(s.psi);
      } catch (const Error&) {
      }
      out.push_back({tag + "hurwitz", ok, ""});
    }
    std::size_t determined = 0, multiple = 0;
    bool consistent = true;
    for (std::size_t i = 0; i < s.fibers.size(); ++i) {
      if (s.fibers[i].m < 2) continue;
      ++multiple;
      const auto w = wildness_transfer(s, i);
      if (w == Wildness::Undetermined) continue;
      ++determined;
      consistent &= (w == Wildness::Wild) == s.fibers[i].wild;
    }
    out.push_back({tag + "wildness", consistent,
                   std::to_string(determined) + " of " + std::to_string(multiple) + " multiple fibers determined"});
    if (s.e_lower == -1) out.push_back({tag + "2DD", two_dd_holds(s), ""});
    if (k + 1 < d.stages.size()) {
      // Multiple fibers upstairs are exactly the lower multiple fibers of the next square.
      std::vector<std::pair<int, bool>> up, next;
      for (const auto& b : s.fibers)
        for (const auto& u : b.above)
          if (u.m > 1) up.emplace_back(u.m, u.wild);
      for (const auto& b : d.stages[k + 1].fibers)
        if (b.m > 1) next.emplace_back(b.m, b.wild);
      std::sort(up.begin(), up.end());
      std::sort(next.begin(), next.end());
      out.push_back({tag + "chains", up == next && s.upper_surface == d.stages[k + 1].lower_surface, ""});
    }
  }
  bool product = !d.stages.empty() && d.stages.back().upper_surface == "F x P^1";
  if (product)
    for (const auto& b : d.stages.back().fibers)
      for (const auto& u : b.above) product &= u.m == 1;
  out.push_back({"top row is a product without multiple fibers", product, ""});
  return out;
}

}  // namespace ruledfib
