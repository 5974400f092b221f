#include "ruledfib/isogeny.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace ruledfib {

namespace {

struct VeluTerm {
  FieldElement xq, yq, gx, gy, tq, uq;
};

std::uint64_t ipow(std::uint64_t b, unsigned e) {
  std::uint64_t r = 1;
  while (e--) r *= b;
  return r;
}

}  // namespace

struct Isogeny::Data {
  Curve domain, codomain;
  std::uint64_t degree = 1;
  std::uint64_t insep = 1;
  IsogenyKind kind = IsogenyKind::Isomorphism;
  std::vector<CurvePoint> kernel;
  bool separable = true;
  bool dual_separable = true;
  // Velu
  std::vector<CurvePoint> subgroup;
  std::vector<VeluTerm> terms;
  // Isomorphism
  WeierstrassChange change;
  // Composite
  std::vector<Isogeny> steps;
};

std::string_view kind_name(IsogenyKind kind) {
  switch (kind) {
    case IsogenyKind::Frobenius: return "frobenius";
    case IsogenyKind::Velu: return "velu";
    case IsogenyKind::Composite: return "composite";
    case IsogenyKind::Isomorphism: return "isomorphism";
  }
  return "unknown";
}

const Curve& Isogeny::domain() const { return data_->domain; }
const Curve& Isogeny::codomain() const { return data_->codomain; }
std::uint64_t Isogeny::degree() const { return data_->degree; }
IsogenyKind Isogeny::kind() const { return data_->kind; }
const std::vector<CurvePoint>& Isogeny::kernel_points() const { return data_->kernel; }
bool Isogeny::separable() const { return data_->separable; }
bool Isogeny::dual_separable() const { return data_->dual_separable; }
std::uint64_t Isogeny::inseparable_degree() const { return data_->insep; }
const WeierstrassChange& Isogeny::change() const { return data_->change; }

std::vector<Isogeny> Isogeny::steps() const {
  if (data_->kind == IsogenyKind::Composite) return data_->steps;
  return {*this};
}

CurvePoint Isogeny::operator()(const CurvePoint& pt) const {
  const Data& d = *data_;
  if (pt.curve() != d.domain) throw Error(ErrorKind::MixedCurves, "point is not on the isogeny's domain");
  if (pt.is_infinity()) return d.codomain.infinity();
  switch (d.kind) {
    case IsogenyKind::Frobenius: {
      const std::uint32_t p = d.domain.characteristic();
      return d.codomain.point(pt.x().pow(p), pt.y().pow(p));
    }
    case IsogenyKind::Isomorphism: {
      const auto& c = d.change;
      const FieldElement xr = pt.x() - c.r;
      const FieldElement u2 = c.u * c.u;
      return d.codomain.point(xr / u2, (pt.y() - c.s * xr - c.t) / (u2 * c.u));
    }
    case IsogenyKind::Composite: {
      CurvePoint cur = pt;
      for (const auto& s : d.steps) cur = s(cur);
      return cur;
    }
    case IsogenyKind::Velu: {
      if (std::binary_search(d.subgroup.begin(), d.subgroup.end(), pt)) return d.codomain.infinity();
      const Curve& e = d.domain;
      const FieldElement& x = pt.x();
      const FieldElement& y = pt.y();
      FieldElement X = x, Y = y;
      for (const auto& term : d.terms) {
        const FieldElement inv = (x - term.xq).inverse();
        const FieldElement inv2 = inv * inv;
        X += term.tq * inv + term.uq * inv2;
        Y -= term.uq * (y * 2 + e.a1() * x + e.a3()) * inv2 * inv +
             term.tq * (e.a1() * (x - term.xq) + y - term.yq) * inv2 +
             (e.a1() * term.uq - term.gx * term.gy) * inv2;
      }
      return d.codomain.point(X, Y);
    }
  }
  throw Error(ErrorKind::InvalidInput, "unknown isogeny kind");
}

Isogeny frobenius_isogeny(const Curve& e) {
  auto d = std::make_shared<Isogeny::Data>();
  d->domain = e;
  d->codomain = e.frobenius_twist(1);
  d->degree = e.characteristic();
  d->insep = e.characteristic();
  d->kind = IsogenyKind::Frobenius;
  d->kernel = {e.infinity()};
  d->separable = false;
  d->dual_separable = e.ordinary();
  return Isogeny(d);
}

Isogeny frobenius_onto(const Curve& e) {
  const int k = e.field()->k;
  return frobenius_isogeny(e.frobenius_twist(k - 1));
}

Isogeny velu_quotient(const Curve& e, const CurvePoint& generator) {
  if (generator.curve() != e) {
    if (!generator.curve().field()->same_as(*e.field())) {
      throw Error(ErrorKind::IrrationalKernel, "kernel generator is not rational over the curve's field");
    }
    throw Error(ErrorKind::MixedCurves, "kernel generator lies on another curve");
  }
  if (generator.is_infinity()) throw Error(ErrorKind::OrderOne, "kernel generator is the identity");
  std::vector<CurvePoint> pts{e.infinity()};
  for (CurvePoint cur = generator; !cur.is_infinity(); cur = cur + generator) pts.push_back(cur);
  return velu_quotient_subgroup(e, std::move(pts));
}

Isogeny velu_quotient_subgroup(const Curve& e, std::vector<CurvePoint> kernel) {
  std::sort(kernel.begin(), kernel.end());
  kernel.erase(std::unique(kernel.begin(), kernel.end()), kernel.end());
  for (const auto& pt : kernel) {
    if (pt.curve() != e) throw Error(ErrorKind::MixedCurves, "kernel point lies on another curve");
  }
  if (kernel.empty() || !kernel.front().is_infinity()) kernel.insert(kernel.begin(), e.infinity());
  if (kernel.size() < 2) throw Error(ErrorKind::OrderOne, "kernel is trivial");
  for (const auto& a : kernel) {
    for (const auto& b : kernel) {
      if (!std::binary_search(kernel.begin(), kernel.end(), a + b)) {
        throw Error(ErrorKind::InvalidInput, "kernel points are not closed under addition");
      }
    }
  }
  auto d = std::make_shared<Isogeny::Data>();
  d->domain = e;
  d->degree = kernel.size();
  d->kind = IsogenyKind::Velu;
  d->kernel = kernel;
  d->subgroup = kernel;
  d->separable = true;
  d->dual_separable = d->degree % e.characteristic() != 0;

  const FieldPtr& f = e.field();
  FieldElement t = FieldElement::zero(f), w = FieldElement::zero(f);
  std::set<CurvePoint> seen;
  for (const auto& q : kernel) {
    if (q.is_infinity() || seen.count(q)) continue;
    const CurvePoint neg = -q;
    seen.insert(q);
    seen.insert(neg);
    VeluTerm term;
    term.xq = q.x();
    term.yq = q.y();
    term.gx = q.x() * q.x() * 3 + e.a2() * q.x() * 2 + e.a4() - e.a1() * q.y();
    term.gy = -(q.y() * 2) - e.a1() * q.x() - e.a3();
    term.tq = (neg == q) ? term.gx : term.gx * 2 - e.a1() * term.gy;
    term.uq = term.gy * term.gy;
    t += term.tq;
    w += term.uq + term.xq * term.tq;
    d->terms.push_back(term);
  }
  d->codomain = Curve::make(f, e.a1(), e.a2(), e.a3(), e.a4() - t * 5, e.a6() - e.b2() * t - w * 7);
  return Isogeny(d);
}

namespace {

std::array<FieldElement, 5> transformed(const Curve& e, const WeierstrassChange& c) {
  const FieldElement &a1 = e.a1(), &a2 = e.a2(), &a3 = e.a3(), &a4 = e.a4(), &a6 = e.a6();
  const FieldElement &u = c.u, &r = c.r, &s = c.s, &t = c.t;
  const FieldElement u2 = u * u, u3 = u2 * u, u4 = u2 * u2, u6 = u3 * u3;
  return {(a1 + s * 2) / u,
          (a2 - s * a1 + r * 3 - s * s) / u2,
          (a3 + r * a1 + t * 2) / u3,
          (a4 - s * a3 + r * a2 * 2 - (t + r * s) * a1 + r * r * 3 - s * t * 2) / u4,
          (a6 + r * a4 + r * r * a2 + r * r * r - t * a3 - t * t - r * t * a1) / u6};
}

}  // namespace

Isogeny isomorphism(const Curve& e, const WeierstrassChange& c) {
  if (c.u.is_zero()) throw Error(ErrorKind::DivisionByZero, "isomorphism scale u must be nonzero");
  const auto a = transformed(e, c);
  auto d = std::make_shared<Isogeny::Data>();
  d->domain = e;
  d->codomain = Curve::make(e.field(), a[0], a[1], a[2], a[3], a[4]);
  d->degree = 1;
  d->kind = IsogenyKind::Isomorphism;
  d->kernel = {e.infinity()};
  d->change = c;
  return Isogeny(d);
}

Isogeny identity_isogeny(const Curve& e) {
  const FieldPtr& f = e.field();
  const FieldElement z = FieldElement::zero(f);
  return isomorphism(e, {FieldElement::one(f), z, z, z});
}

std::vector<Isogeny> find_isomorphisms(const Curve& from, const Curve& to) {
  std::vector<Isogeny> out;
  if (!from.field()->same_as(*to.field())) return out;
  if (from.j_invariant() != to.j_invariant()) return out;
  const FieldPtr& f = from.field();
  const auto elems = all_elements(f);
  const std::uint32_t p = f->p;
  const auto target = to.coefficients();
  std::set<std::array<std::uint64_t, 4>> seen;

  auto try_change = [&](const WeierstrassChange& c) {
    if (c.u.is_zero() || transformed(from, c) != target) return;
    if (!seen.insert({c.u.index(), c.r.index(), c.s.index(), c.t.index()}).second) return;
    out.push_back(isomorphism(from, c));
  };

  const FieldElement &a1 = from.a1(), &a2 = from.a2(), &a3 = from.a3(), &a4 = from.a4(), &a6 = from.a6();
  const FieldElement &b1 = to.a1(), &b2 = to.a2(), &b3 = to.a3(), &b4 = to.a4(), &b6 = to.a6();
  for (const auto& u : elems) {
    if (u.is_zero()) continue;
    const FieldElement u2 = u * u, u3 = u2 * u, u4 = u2 * u2, u6 = u3 * u3;
    if (p != 2) {
      const FieldElement s = (u * b1 - a1) / FieldElement::from_int(f, 2);
      std::vector<FieldElement> rs;
      if (p != 3) {
        rs.push_back((u2 * b2 - a2 + s * a1 + s * s) / FieldElement::from_int(f, 3));
      } else {
        rs = elems;
      }
      for (const auto& r : rs) {
        const FieldElement t = (u3 * b3 - a3 - r * a1) / FieldElement::from_int(f, 2);
        try_change({u, r, s, t});
      }
    } else if (!a1.is_zero()) {
      if (u * b1 != a1) continue;
      const FieldElement r = (u3 * b3 - a3) / a1;
      for (const auto& s : solve_quadratic(a1, a2 + r - u2 * b2)) {
        const FieldElement t = (u4 * b4 - a4 - s * a3 - r * r) / a1 - r * s;
        try_change({u, r, s, t});
      }
    } else {
      if (u3 * b3 != a3) continue;
      for (const auto& s : elems) {
        const FieldElement r = u2 * b2 + a2 + s * s;
        for (const auto& t : solve_quadratic(a3, u6 * b6 - a6 - r * a4 - r * r * a2 - r * r * r)) {
          try_change({u, r, s, t});
        }
      }
    }
  }
  return out;
}

Isogeny compose(const Isogeny& first, const Isogeny& second) {
  if (first.codomain() != second.domain()) {
    throw Error(ErrorKind::MixedCurves, "isogenies are not composable");
  }
  auto d = std::make_shared<Isogeny::Data>();
  d->domain = first.domain();
  d->codomain = second.codomain();
  d->degree = first.degree() * second.degree();
  d->insep = first.inseparable_degree() * second.inseparable_degree();
  d->kind = IsogenyKind::Composite;
  for (const auto& s : first.steps()) d->steps.push_back(s);
  for (const auto& s : second.steps()) d->steps.push_back(s);
  d->separable = d->insep == 1;
  d->dual_separable = std::all_of(d->steps.begin(), d->steps.end(),
                                  [](const Isogeny& s) { return s.dual_separable(); });
  Isogeny out(d);
  std::vector<CurvePoint> ker;
  for (const auto& pt : d->domain.points()) {
    if (out(pt).is_infinity()) ker.push_back(pt);
  }
  d->kernel = std::move(ker);
  return out;
}

Isogeny Isogeny::base_change(const CurveExtension& ext) const {
  const Data& d = *data_;
  const FieldEmbedding& emb = *ext.embedding;
  switch (d.kind) {
    case IsogenyKind::Frobenius: return frobenius_isogeny(ext.curve);
    case IsogenyKind::Isomorphism:
      return isomorphism(ext.curve, {emb(d.change.u), emb(d.change.r), emb(d.change.s), emb(d.change.t)});
    case IsogenyKind::Velu: {
      std::vector<CurvePoint> lifted;
      for (const auto& pt : d.subgroup) lifted.push_back(ext.lift(pt));
      return velu_quotient_subgroup(ext.curve, std::move(lifted));
    }
    case IsogenyKind::Composite: {
      std::optional<Isogeny> acc;
      Curve cur = ext.curve;
      for (const auto& s : d.steps) {
        CurveExtension step_ext{ext.degree, cur, ext.embedding};
        Isogeny bs = s.base_change(step_ext);
        cur = bs.codomain();
        acc = acc ? compose(*acc, bs) : bs;
      }
      return *acc;
    }
  }
  throw Error(ErrorKind::InvalidInput, "unknown isogeny kind");
}

std::string Isogeny::describe() const {
  std::ostringstream os;
  os << kind_name(kind()) << " of degree " << degree();
  if (kind() == IsogenyKind::Composite) {
    os << " [";
    const auto st = steps();
    for (std::size_t i = 0; i < st.size(); ++i) os << (i ? " ; " : "") << st[i].describe();
    os << "]";
  } else if (kind() == IsogenyKind::Velu) {
    os << " with kernel {";
    for (std::size_t i = 0; i < kernel_points().size(); ++i) {
      os << (i ? ", " : "") << kernel_points()[i].to_string();
    }
    os << "}";
  }
  return os.str();
}

bool equals_multiplication(const Isogeny& phi, const Isogeny& psi, std::uint64_t n) {
  if (psi.domain() != phi.codomain() || psi.codomain() != phi.domain()) return false;
  const Curve& e = phi.domain();
  const std::uint64_t need = 4 * n * n + 1;
  const std::uint64_t cap = field_size_cap();
  int j = 1;
  __int128 qj = e.field()->order;
  while (e.count_over_extension(j) < need) {
    if (qj * e.field()->order > cap) break;
    qj *= e.field()->order;
    ++j;
  }
  const CurveExtension ext = extend_curve(e, j);
  const CurveExtension ext_mid = extend_curve(phi.codomain(), j);
  const Isogeny phi_j = phi.base_change(ext);
  const Isogeny psi_j = psi.base_change(ext_mid);
  for (const auto& pt : ext.curve.points()) {
    if (psi_j(phi_j(pt)) != pt * static_cast<std::int64_t>(n)) return false;
  }
  return true;
}

namespace {

std::vector<std::vector<CurvePoint>> subgroups_of_order(const Curve& e, std::uint64_t n) {
  std::vector<std::vector<CurvePoint>> out;
  if (n == 1) return {{e.infinity()}};
  const auto tors = torsion_points(e, n);
  std::set<std::vector<CurvePoint>> seen;
  auto close = [&](std::vector<CurvePoint> gens) {
    std::vector<CurvePoint> grp{e.infinity()};
    for (std::size_t i = 0; i < grp.size() && grp.size() <= n; ++i) {
      for (const auto& g : gens) {
        const CurvePoint s = grp[i] + g;
        if (std::find(grp.begin(), grp.end(), s) == grp.end()) grp.push_back(s);
      }
    }
    std::sort(grp.begin(), grp.end());
    if (grp.size() == n && seen.insert(grp).second) out.push_back(grp);
  };
  for (const auto& a : tors) close({a});
  if (tors.size() <= 64) {
    for (std::size_t i = 0; i < tors.size(); ++i) {
      for (std::size_t k = i + 1; k < tors.size(); ++k) close({tors[i], tors[k]});
    }
  }
  return out;
}

std::optional<Isogeny> search_dual(const Isogeny& phi) {
  const Curve& e = phi.domain();
  const std::uint64_t n = phi.degree();
  const std::uint64_t p = e.characteristic();
  unsigned a = 0;
  for (std::uint64_t m = n; m % p == 0; m /= p) ++a;
  const std::uint64_t insep_n = e.ordinary() ? ipow(p, a) : ipow(p, 2 * a);
  const std::uint64_t insep_dual = insep_n / phi.inseparable_degree();

  std::optional<Isogeny> fr;
  Curve cur = phi.codomain();
  for (std::uint64_t k = 1; k < insep_dual; k *= p) {
    Isogeny step = frobenius_isogeny(cur);
    fr = fr ? compose(*fr, step) : step;
    cur = step.codomain();
  }
  const std::uint64_t rest = n / insep_dual;
  for (const auto& grp : subgroups_of_order(cur, rest)) {
    std::optional<Isogeny> head = fr;
    Curve mid = cur;
    if (rest > 1) {
      Isogeny v = velu_quotient_subgroup(cur, grp);
      head = head ? compose(*head, v) : v;
      mid = v.codomain();
    }
    for (const auto& iso : find_isomorphisms(mid, e)) {
      Isogeny cand = head ? compose(*head, iso) : iso;
      if (equals_multiplication(phi, cand, n)) return cand;
    }
  }
  return std::nullopt;
}

std::int64_t max_extension(const Curve& e, int bound) {
  const std::uint64_t cap = std::min(field_size_cap(), kEnumerationFieldCap);
  __int128 qj = 1;
  int j = 0;
  while (j < bound && qj * e.field()->order <= cap) {
    qj *= e.field()->order;
    ++j;
  }
  return j;
}

}  // namespace

Isogeny dual_isogeny(const Isogeny& phi, int bound) {
  if (auto d = search_dual(phi)) return *d;
  const std::int64_t jmax = max_extension(phi.domain(), bound);
  for (int j = 2; j <= jmax; ++j) {
    const CurveExtension ext = extend_curve(phi.domain(), j);
    if (search_dual(phi.base_change(ext))) {
      throw NeedsExtension(j, "dual isogeny kernel becomes rational over the degree-" + std::to_string(j) +
                                  " extension");
    }
  }
  throw NeedsExtension(0, "dual isogeny kernel not rational within the extension bound");
}

Preimages preimages(const Isogeny& phi, const CurvePoint& q, int bound) {
  if (q.curve() != phi.codomain()) throw Error(ErrorKind::MixedCurves, "point is not on the codomain");
  const std::uint64_t want = phi.separable_degree();
  auto collect = [](const Isogeny& f, const CurvePoint& target) {
    std::vector<CurvePoint> out;
    for (const auto& pt : f.domain().points()) {
      if (f(pt) == target) out.push_back(pt);
    }
    return out;
  };
  Preimages res;
  res.multiplicity = phi.inseparable_degree();
  res.points = collect(phi, q);
  if (res.points.size() == want) return res;
  const std::int64_t jmax = max_extension(phi.domain(), bound);
  for (int j = 2; j <= jmax; ++j) {
    const CurveExtension ext = extend_curve(phi.domain(), j);
    const CurveExtension ext_cod = extend_curve(phi.codomain(), j);
    if (collect(phi.base_change(ext), ext_cod.lift(q)).size() == want) {
      throw NeedsExtension(j, "preimages of " + q.to_string() + " become rational over the degree-" +
                                  std::to_string(j) + " extension");
    }
  }
  throw NeedsExtension(0, "preimages of " + q.to_string() + " not rational within the extension bound");
}

}  // namespace ruledfib
