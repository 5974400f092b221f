#include "ruledfib/classifier.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "ruledfib/cover_diagram.hpp"
#include "ruledfib/surface_lattice.hpp"

namespace ruledfib {

std::string_view shape_name(BundleShape s) {
  switch (s) {
    case BundleShape::Decomposable: return "O+L";
    case BundleShape::Atiyah: return "E20";
    case BundleShape::ExtQ: return "EQ";
  }
  return "?";
}

std::uint32_t ClassificationInput::p() const { return curve ? curve->characteristic() : symbolic.p; }

Reduction ClassificationInput::reduction() const {
  if (!curve) return symbolic.reduction;
  return curve->supersingular() ? Reduction::Supersingular : Reduction::Ordinary;
}

void ClassificationInput::validate() const {
  if (curve) {
    if (point && point->curve() != *curve) throw Error(ErrorKind::MixedCurves, "point is not on the input curve");
  } else {
    symbolic.validate();
    if (point) throw Error(ErrorKind::InvalidInput, "a point needs a concrete curve");
  }
  if (shape == BundleShape::ExtQ && curve && (!point || point->is_infinity())) {
    throw Error(ErrorKind::InvalidInput, "E_Q needs an affine point Q on the curve");
  }
  if (shape != BundleShape::Decomposable && order) {
    throw Error(ErrorKind::InvalidInput, "an order of L only makes sense for O+L");
  }
  if (shape == BundleShape::Decomposable && reduction() == Reduction::Supersingular && order &&
      order->kind == LineOrder::Kind::Finite && order->value % p() == 0) {
    throw Error(ErrorKind::InvalidInput, "a supersingular curve has no line bundle of order divisible by p");
  }
  if (max_extension < 1) throw Error(ErrorKind::InvalidInput, "max_extension must be >= 1");
}

bool ClassificationResult::strange_type() const {
  return std::any_of(fibers.begin(), fibers.end(), [](const auto& f) { return f.strange_type(); });
}

bool ClassificationResult::same_answer(const ClassificationResult& o) const {
  if (has_fibration != o.has_fibration || row_id != o.row_id || fibers.size() != o.fibers.size()) return false;
  auto key = [](const MultipleFiber& f) { return std::tuple(f.m, f.a, f.wild); };
  std::vector<std::tuple<std::int64_t, std::int64_t, bool>> x, y;
  for (const auto& f : fibers) x.push_back(key(f));
  for (const auto& f : o.fibers) y.push_back(key(f));
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  return x == y;
}

std::optional<OrderedPoint> find_point_of_order(const Curve& e, std::uint64_t m, int bound) {
  // points are enumerated, so the search stays on small fields
  const std::uint64_t cap = std::min<std::uint64_t>(field_size_cap(), kEnumerationFieldCap);
  std::uint64_t size = 1;
  for (int j = 1; j <= bound; ++j) {
    size *= e.field()->order;
    if (size > cap) break;
    if (j > 1 && e.count_over_extension(j) % m != 0) continue;
    if (j == 1 && e.count() % m != 0) continue;
    try {
      auto ext = extend_curve(e, j);
      for (const auto& pt : ext.curve.points())
        if (point_order(pt) == m) return OrderedPoint{ext, pt};
    } catch (const Error& err) {
      if (err.kind() == ErrorKind::DegreeOutOfRange) break;
      throw;
    }
  }
  return std::nullopt;
}

namespace {

MultipleFiber table_fiber(std::int64_t m, std::int64_t a, bool wild) { return {m, a, wild ? 1 : m, wild}; }

// Row label from the input data alone.
std::string row_of(BundleShape shape, std::uint32_t p, Reduction red, const LineOrder& ord) {
  switch (shape) {
    case BundleShape::Decomposable:
      if (ord.kind == LineOrder::Kind::Unknown) throw Error(ErrorKind::UnknownOrder, "ord L is not known");
      if (ord.kind == LineOrder::Kind::Infinite) return "i-3";
      return ord.value == 1 ? "i-1" : "i-2";
    case BundleShape::Atiyah: return p == 0 ? "i-4" : "i-5";
    case BundleShape::ExtQ:
      if (p != 2) return "ii-1";
      return red == Reduction::Supersingular ? "ii-2" : "ii-3";
  }
  return "";
}

LineOrder order_of_l(const ClassificationInput& in) {
  if (in.shape != BundleShape::Decomposable) return LineOrder::finite(1);
  if (in.point) return LineOrder::finite(point_order(*in.point));
  if (in.order) return *in.order;
  if (!in.curve && in.symbolic.designated_order) return *in.symbolic.designated_order;
  return LineOrder::finite(1);
}

struct Site {
  std::string label;
  std::vector<std::int64_t> m_candidates;
  std::optional<bool> wild;  // pinned wildness
  std::string reason;
};

std::vector<std::int64_t> divisors(std::int64_t n) {
  std::vector<std::int64_t> out;
  for (std::int64_t k = 1; k <= n; ++k)
    if (n % k == 0) out.push_back(k);
  return out;
}

// Fiber configurations consistent with the per-site options.
std::vector<FiberConfig> solve_sites(const std::vector<Site>& sites, std::uint32_t p, Reduction red, int e) {
  std::vector<std::vector<std::optional<MultipleFiber>>> options;
  for (const auto& s : sites) {
    std::vector<std::optional<MultipleFiber>> opts;
    for (auto m : s.m_candidates) {
      if (m == 1) {
        opts.push_back(std::nullopt);
        continue;
      }
      for (auto nu : divisors(m))
        for (std::int64_t a = 0; a < m; ++a) {
          const bool wild = nu != m;
          if (s.wild && *s.wild != wild) continue;
          opts.push_back(MultipleFiber{m, a, nu, wild});
        }
    }
    options.push_back(std::move(opts));
  }
  const std::int64_t target = e == 0 ? -2 : -1;
  std::vector<FiberConfig> found;
  std::vector<std::size_t> idx(options.size(), 0);
  for (;;) {
    if (std::all_of(options.begin(), options.end(), [](const auto& o) { return !o.empty(); })) {
      FiberConfig c;
      c.p = p;
      if (p > 0) c.reduction = red;
      for (std::size_t i = 0; i < options.size(); ++i)
        if (options[i][idx[i]]) c.fibers.push_back(*options[i][idx[i]]);
      c.d = -static_cast<int>(std::count_if(c.fibers.begin(), c.fibers.end(), [](const auto& f) { return f.wild; }));
      c.normalize();
      bool ok = validate_config(c).empty();
      if (ok) {
        try {
          ok = kodaira_coefficient(c) == target;
        } catch (const Error&) {
          ok = false;
        }
      }
      if (ok && !c.fibers.empty()) {
        std::vector<std::pair<std::int64_t, std::int64_t>> types;
        for (const auto& f : c.fibers) types.emplace_back(f.m, f.nu);
        ok = ku_feasible(types).feasible;
      }
      if (ok && std::find(found.begin(), found.end(), c) == found.end()) found.push_back(c);
    } else {
      break;
    }
    std::size_t k = 0;
    while (k < idx.size() && ++idx[k] == options[k].size()) idx[k++] = 0;
    if (k == idx.size()) break;
  }
  return found;
}

// Multiplicity candidates and wildness for a base point given the fibers above it.
Site site_from_cover(const std::string& label, std::vector<UpperFiber> above, std::int64_t divisibility,
                     std::uint32_t p, bool psi_separable) {
  Site s{label, {}, std::nullopt, ""};
  std::optional<Wildness> agreed;
  bool conflict = false;
  for (auto m : divisors(divisibility)) {
    CoverStage st;
    st.deg_phi = st.deg_q = 2;
    st.psi = {2, psi_separable, p, {}};
    BaseFiber b{label, static_cast<int>(m), 0, false, above};
    bool integral = true;
    for (auto& u : b.above) {
      // restriction degree deg q * m / (m' e) for a lone preimage
      if (b.above.size() == 1) {
        if ((2 * m) % (u.m * u.e) != 0) integral = false;
        else u.restriction_degree = static_cast<int>(2 * m / (u.m * u.e));
      }
    }
    st.fibers.push_back(b);
    if (!integral || !check_accounting(st).empty()) continue;
    s.m_candidates.push_back(m);
    if (m > 1) {
      const auto w = wildness_transfer(st, 0);
      if (w != Wildness::Undetermined) {
        if (agreed && *agreed != w) conflict = true;
        agreed = w;
      }
    }
  }
  if (agreed && !conflict) s.wild = *agreed == Wildness::Wild;
  std::ostringstream r;
  r << "m in {";
  for (std::size_t i = 0; i < s.m_candidates.size(); ++i) r << (i ? "," : "") << s.m_candidates[i];
  r << "} by accounting";
  if (s.wild) r << ", " << (*s.wild ? "wild" : "tame") << " by wildness transfer";
  s.reason = r.str();
  return s;
}

std::string fibers_string(const std::vector<MultipleFiber>& fs) {
  if (fs.empty()) return "none";
  std::string out;
  for (const auto& f : fs) out += (out.empty() ? "" : ", ") + f.to_string();
  return out;
}

struct Deriver {
  const ClassificationInput& in;
  ClassificationResult r;

  void step(std::string rule, std::string detail) { r.trace.push_back({std::move(rule), std::move(detail)}); }

  // Attaches the concrete resolution square, if it can be built.
  void evidence(const std::string& row, const std::optional<CurvePoint>& pt, const Curve& curve) {
    try {
      // the square is built by point enumeration, so keep to small fields
      int bound = 0;
      for (std::uint64_t size = curve.field()->order; bound < in.max_extension && size <= kEnumerationFieldCap;
           size *= curve.field()->order)
        ++bound;
      const auto d = build_resolution(row, {curve, pt}, std::max(bound, 1));
      for (std::size_t k = 0; k < d.stages.size(); ++k) {
        const auto& s = d.stages[k];
        step("pullback-trivialization", "stage " + std::to_string(k + 1) + ": phi = " + s.phi + "; pullback " +
                                            s.pulled_back_bundle + "; " + s.lower_surface + " <- " + s.upper_surface);
      }
      bool all = true;
      for (const auto& c : verify_diagram(d)) all &= c.pass;
      step("resolution-checks", std::string(all ? "all diagram checks pass" : "a diagram check FAILED") +
                                    (d.extension_degree > 1 ? " (over the degree " + std::to_string(d.extension_degree) +
                                                                  " extension)"
                                                            : ""));
    } catch (const Error& err) {
      step("pullback-trivialization",
           "concrete square not built: " + std::string(err.what()));
    }
  }

  void settle(const std::vector<Site>& sites, int e) {
    for (const auto& s : sites) step("fiber-site", s.label + ": " + s.reason);
    auto found = solve_sites(sites, in.p(), in.reduction(), e);
    if (found.size() != 1) {
      throw Error(ErrorKind::InvalidInput,
                  "derivation left " + std::to_string(found.size()) + " candidate configurations");
    }
    const auto& c = found[0];
    step("canonical-formula", "coefficient " + std::to_string(kodaira_coefficient(c)) + " with d = " +
                                  std::to_string(c.d) + " (number of wild fibers) fixes a: " + c.to_string());
    const auto fam = family_of(c);
    std::int64_t max_m = 2;
    for (const auto& f : c.fibers) max_m = std::max(max_m, f.m);
    const auto en = enumerate_configs(c.d, c.p, max_m);
    bool listed = false;
    for (const auto& f : en.families)
      if (f.id == fam)
        listed = std::any_of(f.members.begin(), f.members.end(), [&](const auto& x) { return x.fibers == c.fibers; });
    const bool family_ok = e == 0 ? (fam == "I" || fam == "II" || fam == "V") : (fam == "III" || fam == "IV" || fam == "VI");
    step("family-membership", "family " + fam + (listed ? " (listed by the enumeration)" : " (NOT enumerated)") +
                                  (family_ok ? ", allowed for e = " : ", NOT allowed for e = ") + std::to_string(e));
    if (!listed || !family_ok) throw Error(ErrorKind::InvalidInput, "derived configuration outside the allowed families");
    r.d = c.d;
    r.fibers = c.fibers;
  }

  void decomposable(const LineOrder& ord) {
    const std::uint32_t p = in.p();
    LineClass l;
    if (in.point) l = LineClass::of_point(*in.point);
    else if (ord.kind == LineOrder::Kind::Finite && ord.value == 1) l = LineClass::trivial();
    else l = LineClass::symbolic("L", ord);
    const auto b = BundleExpr::split(l);
    const int bound = ord.kind == LineOrder::Kind::Finite ? static_cast<int>(std::min<std::uint64_t>(ord.value, 4096)) : 64;
    int n0 = 0;
    for (int n = 1; n <= bound && !n0; ++n)
      if (cohomology(sym_power(b, n, p)).h0 >= 2) n0 = n;
    if (!n0) {
      step("h0-sym-jump", "h0(Sym^n(O+L)) = 1 for n <= " + std::to_string(bound) +
                              "; L^k is nontrivial for every k != 0, so no pencil exists");
      r.has_fibration = false;
      return;
    }
    step("h0-sym-jump", "h0(Sym^n(O+L)) = 1 for n < " + std::to_string(n0) + " and 2 at n = " + std::to_string(n0) +
                            "; the pencil has fiber class " + std::to_string(n0) + " C0");
    r.has_fibration = true;
    if (n0 == 1) {
      step("product", "S = E x P^1 and the fibration is the second projection");
      return;
    }
    step("section-fibers", "the disjoint sections C0, C1 of O+L are supports of the two fibers n0 C0, n0 C1 "
                           "(decomposable bundle gives type (m,m))");
    std::vector<Site> sites = {
        {"C0", {n0}, false, "m = " + std::to_string(n0) + "; normal bundle L^-1 of order m, so nu = m and tame"},
        {"C1", {n0}, false, "m = " + std::to_string(n0) + "; normal bundle L of order m, so nu = m and tame"}};
    settle(sites, 0);
    if (in.curve && in.point) evidence("i-2", in.point, in.point->curve());
  }

  void atiyah() {
    const std::uint32_t p = in.p();
    const int bound = p == 0 ? 64 : static_cast<int>(p);
    int n0 = 0;
    for (int n = 1; n <= bound && !n0; ++n)
      if (cohomology(sym_power(BundleExpr::atiyah(2), n, p)).h0 >= 2) n0 = n;
    if (!n0) {
      step("h0-sym-jump", "Sym^n E20 = E_{n+1,0} has h0 = 1 for every n in characteristic 0; no pencil exists");
      r.has_fibration = false;
      return;
    }
    step("h0-sym-jump", "h0(Sym^n E20) = 1 for n < p and 2 at n = p = " + std::to_string(n0) +
                            " (Sym^p E20 = O + E_{p,0})");
    r.has_fibration = true;
    settle({{"C0", {n0}, true, "m = " + std::to_string(n0) + "; normal bundle of C0 is trivial, so nu = 1 < m and wild"}},
           0);
    if (in.curve) evidence("i-5", std::nullopt, *in.curve);
  }

  void ext_q() {
    const std::uint32_t p = in.p();
    const Reduction red = in.reduction();
    const bool frobenius_route = p == 2 && red == Reduction::Supersingular;
    // Upper square: a degree-2 isogeny pulls E_Q back to an e = 0 bundle.
    ClassificationInput up;
    up.symbolic.p = p;
    up.symbolic.reduction = red;
    if (frobenius_route) {
      up.shape = BundleShape::Atiyah;
      step("base-change-square", "p = 2 supersingular: the Verschiebung is inseparable; Frobenius pulls E_Q back to "
                                 "E20 (x) O(Q'), so the upper surface is P(E20)");
    } else {
      up.shape = BundleShape::Decomposable;
      up.order = LineOrder::finite(2);
      step("base-change-square", std::string(p == 2 ? "p = 2 ordinary: the Verschiebung" : "a dual 2-isogeny") +
                                     " is separable of degree 2 and pulls E_Q back to O(Q1) + O(Q2) with "
                                     "ord(Q1 - Q2) = 2, so the upper surface is P(O+L), ord L = 2");
    }
    const auto upper = classify(up);
    step("upper-fibration", "upper fibers: " + fibers_string(upper.fibers));
    // Fiber class of the lower fibration from q^* F = 2 F'.
    const auto delta = reduced_fiber_class(-1);
    const auto pulled = base_change_pullback(delta, 2, 0);
    std::int64_t n_upper = 1;
    for (const auto& f : upper.fibers) n_upper = std::max(n_upper, f.m);
    if (pulled.f != 0 || (2 * n_upper) % pulled.c0 != 0) throw Error(ErrorKind::InvalidInput, "unexpected 2DD data");
    const std::int64_t t = 2 * n_upper / pulled.c0;
    const std::int64_t divisibility = t * std::gcd(delta.c0, delta.f);
    step("2DD", "q^* D = " + pulled.to_string() + " = 2 D'; with q^* F = 2 F' = " + std::to_string(2 * n_upper) +
                    " C0' this gives F = " + std::to_string(t) + " D, so every multiplicity divides " +
                    std::to_string(divisibility));
    std::vector<Site> sites;
    if (!frobenius_route) {
      const auto& u = upper.fibers;
      if (u.size() != 2 || u[0] != u[1]) throw Error(ErrorKind::InvalidInput, "upper fibers are not a pair");
      const UpperFiber pair{1, static_cast<int>(u[0].m), u[0].wild, 1, true};
      sites.push_back(site_from_cover(p == 2 ? "Q2" : "Q3", {pair, pair}, divisibility, p, true));
      const int branch = p == 2 ? 1 : 2;
      step("hurwitz-branch-count", p == 2 ? "2n - 2 = 2 with wild contribution >= e = 2: one branch point"
                                          : "2n - 2 = 2 with tame contribution e - 1 = 1: two branch points");
      for (int i = 0; i < branch; ++i)
        sites.push_back(site_from_cover("Q" + std::to_string(i + 1), {UpperFiber{2, 1, false, 1, true}}, divisibility, p,
                                        true));
      sites.push_back(site_from_cover("R", {UpperFiber{}, UpperFiber{}}, divisibility, p, true));
    } else {
      const auto& u = upper.fibers;
      if (u.size() != 1) throw Error(ErrorKind::InvalidInput, "upper P(E20) should carry one multiple fiber");
      sites.push_back(site_from_cover("Q1", {UpperFiber{2, static_cast<int>(u[0].m), u[0].wild, 1, true}}, divisibility,
                                      p, false));
      sites.push_back(site_from_cover("R", {UpperFiber{2, 1, false, 1, false}}, divisibility, p, false));
    }
    r.has_fibration = true;
    settle(sites, -1);
    if (!frobenius_route && p != 2 &&
        std::none_of(r.fibers.begin(), r.fibers.end(), [](const auto& f) { return f.wild; })) {
      step("tame-inference", "d = 0 leaves no room for wild fibers, so (2,2,2) is all tame");
    }
    if (in.curve) evidence(r.row_id, in.point, *in.curve);
  }
};

}  // namespace

ClassificationResult classify(const ClassificationInput& in_raw) {
  in_raw.validate();
  ClassificationInput in = in_raw;
  ClassificationResult r;
  r.e = in.e();
  r.symbolic_mode = !in.curve;
  std::vector<TraceStep> pre;
  LineOrder ord = order_of_l(in);

  // A concrete curve with only an order requested: look for such a point.
  if (in.curve && in.shape == BundleShape::Decomposable && !in.point && in.order) {
    bool found = false;
    if (ord.kind == LineOrder::Kind::Finite) {
      if (auto hit = find_point_of_order(*in.curve, ord.value, in.max_extension)) {
        pre.push_back({"point-search", "point " + hit->point.to_string() + " of order " + std::to_string(ord.value) +
                                           " over the degree " + std::to_string(hit->extension.degree) + " extension"});
        in.point = hit->point;
        in.curve = hit->extension.curve;
        found = true;
      }
    }
    if (!found) {
      pre.push_back({"unreachable", "no line bundle of order " + ord.to_string() +
                                        " is realizable at this field size; answering in symbolic mode"});
      r.status = ErrorKind::UnreachableOverField;
      r.symbolic_mode = true;
      SymbolicCurve s{in.p(), in.reduction(), std::nullopt};
      in.curve.reset();
      in.symbolic = s;
    }
  }

  r.row_id = row_of(in.shape, in.p(), in.reduction(), ord);
  Deriver dv{in, r};
  dv.r.trace = pre;
  dv.step("normalized-shape", std::string(shape_name(in.shape)) + " is normalized with e = " + std::to_string(r.e) +
                                  (in.shape == BundleShape::Decomposable ? ", ord L = " + ord.to_string() : ""));
  const auto menu = normalized_bundle_menu(r.e, in.p());
  std::string names;
  for (const auto& m : menu) names += (names.empty() ? "" : ", ") + m.name;
  dv.step("bundle-menu", "e = " + std::to_string(r.e) + " allows " + names);
  dv.step("reduction-type", in.p() == 0 ? std::string("characteristic 0")
                                        : "p = " + std::to_string(in.p()) + ", " +
                                              std::string(reduction_name(in.reduction())) +
                                              (in.curve ? " (p | t test on the curve)" : " (symbolic flag)"));
  switch (in.shape) {
    case BundleShape::Decomposable: dv.decomposable(ord); break;
    case BundleShape::Atiyah: dv.atiyah(); break;
    case BundleShape::ExtQ: dv.ext_q(); break;
  }
  if (dv.r.has_fibration) {
    FiberConfig c{dv.r.d, in.p(), dv.r.fibers, std::nullopt};
    const bool parity = (kodaira_coefficient(c) % 2 == 0) == (r.e == 0);
    dv.step("e-parity", std::string("coefficient ") + std::to_string(kodaira_coefficient(c)) +
                            (parity ? " has the parity of e" : " CONTRADICTS the parity of e"));
    if (!parity) throw Error(ErrorKind::InvalidInput, "e-parity check failed");
    if (dv.r.strange_type()) dv.step("strange-type", "a wild fiber with a = m - 1");
  }
  return dv.r;
}

ClassificationResult table_lookup(const ClassificationInput& in) {
  in.validate();
  ClassificationResult r;
  const std::uint32_t p = in.p();
  const LineOrder ord = order_of_l(in);
  r.e = in.e();
  r.row_id = row_of(in.shape, p, in.reduction(), ord);
  r.symbolic_mode = !in.curve;
  const auto pi = static_cast<std::int64_t>(p);
  if (r.row_id == "i-1") {
    r.has_fibration = true;
  } else if (r.row_id == "i-2") {
    r.has_fibration = true;
    const auto m = static_cast<std::int64_t>(ord.value);
    r.fibers = {table_fiber(m, m - 1, false), table_fiber(m, m - 1, false)};
  } else if (r.row_id == "i-5") {
    r.has_fibration = true;
    r.fibers = {table_fiber(pi, pi - 2, true)};
    r.d = -1;
  } else if (r.row_id == "ii-1") {
    r.has_fibration = true;
    r.fibers = {table_fiber(2, 1, false), table_fiber(2, 1, false), table_fiber(2, 1, false)};
  } else if (r.row_id == "ii-2") {
    r.has_fibration = true;
    r.fibers = {table_fiber(2, 1, true)};
    r.d = -1;
  } else if (r.row_id == "ii-3") {
    r.has_fibration = true;
    r.fibers = {table_fiber(2, 0, true), table_fiber(2, 1, false)};
    r.d = -1;
  }
  std::sort(r.fibers.begin(), r.fibers.end());
  r.trace.push_back({"table", "row " + r.row_id});
  return r;
}

bool cross_check(const ClassificationInput& in) { return classify(in).same_answer(table_lookup(in)); }

}  // namespace ruledfib
