#include "ruledfib/bundle.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <tuple>

namespace ruledfib {

std::string LineOrder::to_string() const {
  switch (kind) {
    case Kind::Finite: return std::to_string(value);
    case Kind::Infinite: return "inf";
    case Kind::Unknown: return "unknown";
  }
  return "unknown";
}

void SymbolicCurve::validate() const {
  if ((p == 0) != (reduction == Reduction::NotApplicable)) {
    throw Error(ErrorKind::InvalidInput, "reduction flag must be n/a exactly when p = 0");
  }
  if (p != 0 && !is_prime(p)) throw Error(ErrorKind::NonPrime, std::to_string(p) + " is not prime");
}

// ---------------------------------------------------------------- LineClass

LineClass LineClass::trivial(std::int64_t shift) {
  LineClass l;
  l.shift_ = shift;
  return l;
}

LineClass LineClass::of_point(const CurvePoint& p, std::int64_t shift) {
  LineClass l;
  l.kind_ = Kind::Point;
  l.point_ = p;
  l.shift_ = shift;
  l.normalize();
  return l;
}

LineClass LineClass::symbolic(std::string name, LineOrder order, std::int64_t exponent, std::int64_t shift) {
  LineClass l;
  l.kind_ = Kind::Symbolic;
  l.name_ = std::move(name);
  l.order_ = order;
  l.exponent_ = exponent;
  l.shift_ = shift;
  l.normalize();
  return l;
}

void LineClass::normalize() {
  if (kind_ == Kind::Point && point_->is_infinity()) {
    kind_ = Kind::Trivial;
    point_.reset();
  }
  if (kind_ == Kind::Symbolic) {
    if (order_.kind == LineOrder::Kind::Finite) {
      const auto n = static_cast<std::int64_t>(order_.value);
      exponent_ = ((exponent_ % n) + n) % n;
    }
    if (exponent_ == 0) {
      kind_ = Kind::Trivial;
      name_.clear();
    }
  }
  if (kind_ == Kind::Trivial) {
    point_.reset();
    name_.clear();
    exponent_ = 0;
    order_ = LineOrder::finite(1);
  }
}

LineOrder LineClass::degree_zero_order() const {
  switch (kind_) {
    case Kind::Trivial: return LineOrder::finite(1);
    case Kind::Point: return LineOrder::finite(point_order(*point_));
    case Kind::Symbolic:
      if (order_.kind == LineOrder::Kind::Finite) {
        const auto n = order_.value;
        return LineOrder::finite(n / std::gcd(n, static_cast<std::uint64_t>(exponent_)));
      }
      return order_;
  }
  return LineOrder::unknown();
}

bool LineClass::degree_zero_part_trivial() const {
  const LineOrder o = degree_zero_order();
  if (o.kind == LineOrder::Kind::Unknown) {
    throw Error(ErrorKind::UnknownOrder, "order of " + to_string() + " is not specified");
  }
  return o.kind == LineOrder::Kind::Finite && o.value == 1;
}

LineClass LineClass::operator*(const LineClass& rhs) const {
  if (kind_ == Kind::Trivial) {
    LineClass out = rhs;
    out.shift_ += shift_;
    return out;
  }
  if (rhs.kind_ == Kind::Trivial) {
    LineClass out = *this;
    out.shift_ += rhs.shift_;
    return out;
  }
  if (kind_ == Kind::Point && rhs.kind_ == Kind::Point) {
    return of_point(*point_ + *rhs.point_, shift_ + rhs.shift_);
  }
  if (kind_ == Kind::Symbolic && rhs.kind_ == Kind::Symbolic && name_ == rhs.name_ && order_ == rhs.order_) {
    return symbolic(name_, order_, exponent_ + rhs.exponent_, shift_ + rhs.shift_);
  }
  throw Error(ErrorKind::UnsupportedShape, "cannot combine " + to_string() + " and " + rhs.to_string());
}

LineClass LineClass::pow(std::int64_t e) const {
  switch (kind_) {
    case Kind::Trivial: return trivial(shift_ * e);
    case Kind::Point: return of_point(*point_ * e, shift_ * e);
    case Kind::Symbolic: return symbolic(name_, order_, exponent_ * e, shift_ * e);
  }
  return trivial();
}

LineClass LineClass::degree_zero_part() const {
  LineClass out = *this;
  out.shift_ = 0;
  return out;
}

bool LineClass::operator==(const LineClass& rhs) const {
  if (kind_ != rhs.kind_ || shift_ != rhs.shift_) return false;
  switch (kind_) {
    case Kind::Trivial: return true;
    case Kind::Point: return *point_ == *rhs.point_;
    case Kind::Symbolic: return name_ == rhs.name_ && exponent_ == rhs.exponent_ && order_ == rhs.order_;
  }
  return false;
}

bool LineClass::operator<(const LineClass& rhs) const {
  if (kind_ != rhs.kind_) return kind_ < rhs.kind_;
  if (kind_ == Kind::Point && *point_ != *rhs.point_) return *point_ < *rhs.point_;
  if (kind_ == Kind::Symbolic) {
    if (name_ != rhs.name_) return name_ < rhs.name_;
    if (exponent_ != rhs.exponent_) return exponent_ < rhs.exponent_;
  }
  return shift_ < rhs.shift_;
}

std::string LineClass::to_string() const {
  std::vector<std::string> parts;
  if (kind_ == Kind::Point) parts.push_back("O(P-O)[P=" + point_->to_string() + "]");
  if (kind_ == Kind::Symbolic) {
    std::string s = name_;
    if (exponent_ != 1) s += "^" + std::to_string(exponent_);
    parts.push_back(s);
  }
  if (shift_ != 0) parts.push_back("O(" + std::to_string(shift_) + "O)");
  if (parts.empty()) return "O";
  std::string out = parts[0];
  for (std::size_t i = 1; i < parts.size(); ++i) out += " (x) " + parts[i];
  return out;
}

// ---------------------------------------------------------------- Summand

int Summand::rank() const {
  switch (shape) {
    case Shape::Line: return 1;
    case Shape::Atiyah: return rank_param;
    case Shape::ExtQ: return 2;
  }
  return 0;
}

std::int64_t Summand::degree() const {
  switch (shape) {
    case Shape::Line: return twist.degree();
    case Shape::Atiyah: return static_cast<std::int64_t>(rank_param) * twist.degree();
    case Shape::ExtQ: return 1 + 2 * twist.degree();
  }
  return 0;
}

bool Summand::operator==(const Summand& rhs) const {
  return shape == rhs.shape && rank_param == rhs.rank_param && q == rhs.q && twist == rhs.twist;
}

bool Summand::operator<(const Summand& rhs) const {
  if (shape != rhs.shape) return shape < rhs.shape;
  if (rank_param != rhs.rank_param) return rank_param < rhs.rank_param;
  if (!(q == rhs.q)) return q < rhs.q;
  return twist < rhs.twist;
}

std::string Summand::to_string() const {
  const bool plain = twist == LineClass::trivial();
  switch (shape) {
    case Shape::Line: return twist.to_string();
    case Shape::Atiyah: {
      std::string s = "E_{" + std::to_string(rank_param) + ",0}";
      return plain ? s : s + " (x) " + twist.to_string();
    }
    case Shape::ExtQ: {
      std::string qs;
      switch (q.kind()) {
        case LineClass::Kind::Trivial: qs = "O"; break;
        case LineClass::Kind::Point: qs = q.point()->to_string(); break;
        case LineClass::Kind::Symbolic: qs = q.name(); break;
      }
      std::string s = "E_Q[Q=" + qs + "]";
      return plain ? s : s + " (x) " + twist.to_string();
    }
  }
  return "?";
}

// ---------------------------------------------------------------- BundleExpr

BundleExpr::BundleExpr(std::vector<Summand> summands) : summands_(std::move(summands)) { normalize(); }

void BundleExpr::normalize() { std::sort(summands_.begin(), summands_.end()); }

BundleExpr BundleExpr::line(const LineClass& l) {
  Summand s;
  s.shape = Summand::Shape::Line;
  s.twist = l;
  return BundleExpr({s});
}

BundleExpr BundleExpr::atiyah(int r) {
  if (r < 1) throw Error(ErrorKind::InvalidInput, "Atiyah bundle rank must be >= 1");
  if (r == 1) return structure_sheaf();
  Summand s;
  s.shape = Summand::Shape::Atiyah;
  s.rank_param = r;
  return BundleExpr({s});
}

BundleExpr BundleExpr::ext_q(const LineClass& q) {
  if (q.degree() != 1) throw Error(ErrorKind::InvalidInput, "E_Q needs a degree-1 class O(Q)");
  Summand s;
  s.shape = Summand::Shape::ExtQ;
  s.rank_param = 2;
  s.q = q;
  return BundleExpr({s});
}

BundleExpr BundleExpr::ext_q(const CurvePoint& q) { return ext_q(LineClass::of_point(q, 1)); }

BundleExpr BundleExpr::split(const LineClass& l) { return structure_sheaf() + line(l); }

BundleExpr BundleExpr::operator+(const BundleExpr& rhs) const {
  std::vector<Summand> all = summands_;
  all.insert(all.end(), rhs.summands_.begin(), rhs.summands_.end());
  return BundleExpr(std::move(all));
}

BundleExpr BundleExpr::tensor(const LineClass& l) const {
  std::vector<Summand> out = summands_;
  for (auto& s : out) s.twist = s.twist * l;
  return BundleExpr(std::move(out));
}

BundleExpr BundleExpr::dual() const {
  std::vector<Summand> out = summands_;
  for (auto& s : out) {
    if (s.shape == Summand::Shape::ExtQ) {
      // rank 2: V^dual = V (x) det(V)^-1, det(E_Q (x) M) = O(Q) (x) M^2.
      s.twist = s.q.inverse() * s.twist.inverse();
    } else {
      s.twist = s.twist.inverse();
    }
  }
  return BundleExpr(std::move(out));
}

std::string BundleExpr::to_string() const {
  if (summands_.empty()) return "0";
  std::string out;
  for (std::size_t i = 0; i < summands_.size(); ++i) {
    if (i) out += " + ";
    out += summands_[i].to_string();
  }
  return out;
}

// ---------------------------------------------------------------- numerics

RankDegree rank_deg(const BundleExpr& b) {
  RankDegree rd;
  for (const auto& s : b.summands()) {
    rd.rank += s.rank();
    rd.degree += s.degree();
  }
  return rd;
}

Cohomology cohomology(const BundleExpr& b) {
  Cohomology h;
  for (const auto& s : b.summands()) {
    const std::int64_t d = s.degree();
    if (d > 0) {
      h.h0 += d;
    } else if (d < 0) {
      h.h1 -= d;
    } else if (s.twist.degree_zero_part_trivial()) {
      // O or E_{r,0} with trivial twist.
      h.h0 += 1;
      h.h1 += 1;
    }
  }
  return h;
}

BundleExpr sym_power(const BundleExpr& b, int m, std::uint32_t p) {
  if (m < 0) throw Error(ErrorKind::InvalidInput, "symmetric power exponent must be >= 0");
  const auto& ss = b.summands();
  if (m == 0) return BundleExpr::structure_sheaf();
  const bool all_lines = std::all_of(ss.begin(), ss.end(), [](const Summand& s) { return s.shape == Summand::Shape::Line; });
  if (all_lines && ss.size() == 1) return BundleExpr::line(ss[0].twist.pow(m));
  if (all_lines && ss.size() == 2) {
    std::vector<Summand> out;
    for (int i = 0; i <= m; ++i) {
      Summand s;
      s.twist = ss[0].twist.pow(m - i) * ss[1].twist.pow(i);
      out.push_back(s);
    }
    return BundleExpr(std::move(out));
  }
  if (ss.size() == 1 && ss[0].shape == Summand::Shape::Atiyah && ss[0].rank_param == 2) {
    const LineClass tw = ss[0].twist.pow(m);
    if (p == 0 || static_cast<std::uint32_t>(m) < p) return BundleExpr::atiyah(m + 1).tensor(tw);
    if (static_cast<std::uint32_t>(m) == p) {
      return (BundleExpr::structure_sheaf() + BundleExpr::atiyah(static_cast<int>(p))).tensor(tw);
    }
    throw Error(ErrorKind::UnsupportedExponent,
                "Sym^" + std::to_string(m) + " of E_{2,0} beyond m = p = " + std::to_string(p));
  }
  throw Error(ErrorKind::UnsupportedShape, "symmetric powers are supported for O+L and E_{2,0} only, got " + b.to_string());
}

// ---------------------------------------------------------------- isogenies

namespace {

CurvePoint point_sum(const Curve& c, const std::vector<CurvePoint>& pts) {
  CurvePoint acc = c.infinity();
  for (const auto& p : pts) acc = acc + p;
  return acc;
}

}  // namespace

LineClass pullback_line(const LineClass& l, const Isogeny& phi) {
  const auto deg = static_cast<std::int64_t>(phi.degree());
  const auto insep = static_cast<std::int64_t>(phi.inseparable_degree());
  const Curve& f = phi.domain();
  if (l.kind() == LineClass::Kind::Symbolic) {
    throw Error(ErrorKind::UnsupportedShape, "symbolic line classes have no concrete pullback");
  }
  const CurvePoint ker_sum = point_sum(f, preimages(phi, phi.codomain().infinity()).points);
  CurvePoint d0 = f.infinity();
  if (l.kind() == LineClass::Kind::Point) {
    const CurvePoint pre_sum = point_sum(f, preimages(phi, *l.point()).points);
    d0 = (pre_sum - ker_sum) * insep;
  }
  // O(n O) pulls back to O(n phi^*O) whose degree-0 part is n * insep * (sum of kernel).
  d0 = d0 + ker_sum * (l.degree() * insep);
  return LineClass::of_point(d0, l.degree() * deg);
}

PullbackResult pullback(const BundleExpr& b, const Isogeny& phi) {
  PullbackResult res;
  const std::uint32_t p = phi.domain().characteristic();
  std::vector<Summand> out;
  for (const auto& s : b.summands()) {
    const LineClass tw = pullback_line(s.twist, phi);
    switch (s.shape) {
      case Summand::Shape::Line: {
        Summand n;
        n.twist = tw;
        out.push_back(n);
        res.rules.push_back("line class: divisor pullback by preimages minus kernel");
        break;
      }
      case Summand::Shape::Atiyah: {
        if (s.rank_param != 2 || phi.degree() != p || phi.dual_separable()) {
          throw Error(ErrorKind::RuleHypothesisUnmet,
                      "E_{2,0} pullback needs rank 2, deg phi = p and a purely inseparable dual");
        }
        for (int i = 0; i < 2; ++i) {
          Summand n;
          n.twist = tw;
          out.push_back(n);
        }
        res.rules.push_back("rule (i): degree-p isogeny with purely inseparable dual splits E_{2,0}");
        break;
      }
      case Summand::Shape::ExtQ: {
        if (s.q.kind() == LineClass::Kind::Symbolic) {
          throw Error(ErrorKind::UnsupportedShape, "E_Q with a symbolic point has no concrete pullback");
        }
        const CurvePoint q = s.q.kind() == LineClass::Kind::Point ? *s.q.point() : phi.codomain().infinity();
        if (p == 2 && phi.kind() == IsogenyKind::Frobenius) {
          const CurvePoint q1 = preimages(phi, q).points.at(0);
          Summand n;
          n.shape = Summand::Shape::Atiyah;
          n.rank_param = 2;
          n.twist = LineClass::of_point(q1, 1) * tw;
          out.push_back(n);
          res.rules.push_back("rule (ii): Frobenius in characteristic 2 turns E_Q into E_{2,0}(Q')");
        } else if (phi.separable() && phi.degree() == 2) {
          const auto pre = preimages(phi, q).points;
          if (pre.size() != 2 || point_order(pre[0] - pre[1]) != 2) {
            throw Error(ErrorKind::RuleHypothesisUnmet, "preimages of Q do not differ by a point of order 2");
          }
          for (const auto& qi : pre) {
            Summand n;
            n.twist = LineClass::of_point(qi, 1) * tw;
            out.push_back(n);
          }
          res.rules.push_back("rule (iii): separable degree-2 isogeny splits E_Q into O(Q1) + O(Q2)");
        } else {
          throw Error(ErrorKind::RuleHypothesisUnmet,
                      "E_Q pullback needs Frobenius with p = 2 or a separable isogeny of degree 2");
        }
        break;
      }
    }
  }
  res.bundle = BundleExpr(std::move(out));
  return res;
}

PushforwardResult pushforward_structure(const Isogeny& phi) {
  const std::uint32_t p = phi.domain().characteristic();
  if (phi.degree() == 1) return {BundleExpr::structure_sheaf(), false};
  if (phi.degree() == p && !phi.dual_separable()) return {BundleExpr::atiyah(static_cast<int>(p)), false};
  if (phi.dual_separable()) {
    const Isogeny dual = dual_isogeny(phi);
    const auto& ker = dual.kernel_points();
    if (ker.size() != phi.degree()) {
      throw Error(ErrorKind::UnsupportedDegree, "kernel of the dual is not fully rational");
    }
    std::vector<Summand> out;
    for (const auto& k : ker) {
      Summand s;
      s.twist = LineClass::of_point(k, 0);
      out.push_back(s);
    }
    std::size_t nontrivial_steps = 0;
    for (const auto& s : phi.steps()) nontrivial_steps += s.degree() > 1 ? 1 : 0;
    return {BundleExpr(std::move(out)), nontrivial_steps > 1};
  }
  throw Error(ErrorKind::UnsupportedDegree,
              "pushforward known only for degree p with inseparable dual or a separable dual");
}

Isogeny kill_torsion_line(const Curve& e, const CurvePoint& p) {
  if (p.curve() != e) throw Error(ErrorKind::MixedCurves, "point is not on the curve");
  if (p.is_infinity()) return identity_isogeny(e);
  const Isogeny quotient = velu_quotient(e, p);
  Isogeny phi = dual_isogeny(quotient);
  if (!pullback_line(LineClass::of_point(p), phi).degree_zero_part_trivial()) {
    throw Error(ErrorKind::InvalidInput, "pullback of the torsion line did not trivialize");
  }
  return phi;
}

}  // namespace ruledfib
