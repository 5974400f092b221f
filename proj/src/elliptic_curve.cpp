#include "ruledfib/elliptic_curve.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace ruledfib {

struct Curve::Data {
  FieldPtr field;
  std::array<FieldElement, 5> a;  // a1, a2, a3, a4, a6
  FieldElement b2, b4, b6, b8, disc;
  std::uint64_t count = 0;
  std::int64_t trace = 0;
  bool supersingular = false;
};

namespace {

int count_y(const FieldElement& b, const FieldElement& c) {
  const FieldPtr& f = b.field();
  if (f->p != 2) {
    const FieldElement disc = b * b + c * 4;
    if (disc.is_zero()) return 1;
    return disc.is_square() ? 2 : 0;
  }
  if (b.is_zero()) return 1;
  return (c / (b * b)).absolute_trace() == 0 ? 2 : 0;
}

std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      out.push_back(d);
      while (n % d == 0) n /= d;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

}  // namespace

Curve Curve::make(const FieldPtr& field, const FieldElement& a1, const FieldElement& a2,
                  const FieldElement& a3, const FieldElement& a4, const FieldElement& a6) {
  for (const auto* c : {&a1, &a2, &a3, &a4, &a6}) {
    if (!c->valid() || !c->field()->same_as(*field)) {
      throw Error(ErrorKind::MixedFields, "curve coefficient outside the curve's field");
    }
  }
  auto d = std::make_shared<Data>();
  d->field = field;
  d->a = {a1, a2, a3, a4, a6};
  d->b2 = a1 * a1 + a2 * 4;
  d->b4 = a4 * 2 + a1 * a3;
  d->b6 = a3 * a3 + a6 * 4;
  d->b8 = a1 * a1 * a6 + a2 * a6 * 4 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4;
  d->disc = -(d->b2 * d->b2 * d->b8) - d->b4 * d->b4 * d->b4 * 8 - d->b6 * d->b6 * 27 +
            d->b2 * d->b4 * d->b6 * 9;
  if (d->disc.is_zero()) throw Error(ErrorKind::SingularCurve, "discriminant vanishes");

  std::uint64_t n = 1;  // infinity
  for (std::uint64_t i = 0; i < field->order; ++i) {
    const FieldElement x(field, i);
    const FieldElement b = a1 * x + a3;
    const FieldElement c = ((x + a2) * x + a4) * x + a6;
    n += static_cast<std::uint64_t>(count_y(b, c));
  }
  d->count = n;
  d->trace = static_cast<std::int64_t>(field->order) + 1 - static_cast<std::int64_t>(n);
  d->supersingular = d->trace % static_cast<std::int64_t>(field->p) == 0;
  if (static_cast<__int128>(d->trace) * d->trace > static_cast<__int128>(4) * field->order) {
    throw Error(ErrorKind::InvalidInput, "point count violates the Hasse bound");
  }
  Curve out;
  out.data_ = std::move(d);
  return out;
}

Curve Curve::make(const FieldPtr& field, std::array<std::int64_t, 5> c) {
  return make(field, FieldElement::from_int(field, c[0]), FieldElement::from_int(field, c[1]),
              FieldElement::from_int(field, c[2]), FieldElement::from_int(field, c[3]),
              FieldElement::from_int(field, c[4]));
}

Curve make_curve(const FieldPtr& field, const FieldElement& a1, const FieldElement& a2,
                 const FieldElement& a3, const FieldElement& a4, const FieldElement& a6) {
  return Curve::make(field, a1, a2, a3, a4, a6);
}

const FieldPtr& Curve::field() const { return data_->field; }
const FieldElement& Curve::a1() const { return data_->a[0]; }
const FieldElement& Curve::a2() const { return data_->a[1]; }
const FieldElement& Curve::a3() const { return data_->a[2]; }
const FieldElement& Curve::a4() const { return data_->a[3]; }
const FieldElement& Curve::a6() const { return data_->a[4]; }
std::array<FieldElement, 5> Curve::coefficients() const { return data_->a; }
FieldElement Curve::b2() const { return data_->b2; }
FieldElement Curve::b4() const { return data_->b4; }
FieldElement Curve::b6() const { return data_->b6; }
FieldElement Curve::b8() const { return data_->b8; }
FieldElement Curve::discriminant() const { return data_->disc; }
std::uint64_t Curve::count() const { return data_->count; }
std::int64_t Curve::trace() const { return data_->trace; }
bool Curve::supersingular() const { return data_->supersingular; }

FieldElement Curve::j_invariant() const {
  const FieldElement c4 = data_->b2 * data_->b2 - data_->b4 * 24;
  return c4 * c4 * c4 / data_->disc;
}

std::uint64_t Curve::count_over_extension(int j) const {
  const __int128 q = field()->order;
  const __int128 t = trace();
  __int128 s_prev = 2, s = t, qj = q;
  for (int i = 1; i < j; ++i) {
    const __int128 next = t * s - q * s_prev;
    s_prev = s;
    s = next;
    qj *= q;
  }
  return static_cast<std::uint64_t>(qj + 1 - s);
}

bool Curve::contains(const FieldElement& x, const FieldElement& y) const {
  const FieldElement lhs = (y + a1() * x + a3()) * y;
  const FieldElement rhs = ((x + a2()) * x + a4()) * x + a6();
  return lhs == rhs;
}

CurvePoint Curve::infinity() const { return CurvePoint::at_infinity(*this); }

CurvePoint Curve::point(const FieldElement& x, const FieldElement& y) const {
  return CurvePoint::affine(*this, x, y);
}

CurvePoint Curve::point(std::int64_t x, std::int64_t y) const {
  return point(FieldElement::from_int(field(), x), FieldElement::from_int(field(), y));
}

std::vector<CurvePoint> Curve::points_with_x(const FieldElement& x) const {
  std::vector<CurvePoint> out;
  const FieldElement b = a1() * x + a3();
  const FieldElement c = ((x + a2()) * x + a4()) * x + a6();
  for (const auto& y : solve_quadratic(b, c)) out.push_back(point(x, y));
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<CurvePoint> Curve::points() const {
  std::vector<CurvePoint> out;
  out.reserve(count());
  out.push_back(infinity());
  for (std::uint64_t i = 0; i < field()->order; ++i) {
    auto pts = points_with_x(FieldElement(field(), i));
    out.insert(out.end(), pts.begin(), pts.end());
  }
  return out;
}

Curve Curve::frobenius_twist(int times) const {
  auto a = coefficients();
  for (auto& c : a) {
    for (int i = 0; i < times; ++i) c = c.frobenius();
  }
  return make(field(), a[0], a[1], a[2], a[3], a[4]);
}

Curve Curve::base_change(const FieldEmbedding& emb) const {
  auto a = coefficients();
  for (auto& c : a) c = emb(c);
  return make(emb.target(), a[0], a[1], a[2], a[3], a[4]);
}

std::pair<std::uint64_t, std::uint64_t> Curve::group_structure() const {
  std::uint64_t exponent = 1;
  for (const auto& pt : points()) exponent = std::lcm(exponent, point_order(pt));
  return {count() / exponent, exponent};
}

bool Curve::operator==(const Curve& rhs) const {
  if (data_ == rhs.data_) return true;
  if (!data_ || !rhs.data_) return false;
  return field()->same_as(*rhs.field()) && data_->a == rhs.data_->a;
}

std::string Curve::to_string() const {
  std::ostringstream os;
  os << "[";
  const auto a = coefficients();
  for (std::size_t i = 0; i < a.size(); ++i) os << (i ? "," : "") << a[i].to_string();
  os << "] over F_" << field()->p;
  if (field()->k > 1) os << "^" << field()->k;
  return os.str();
}

CurvePoint CurvePoint::at_infinity(const Curve& curve) {
  CurvePoint p;
  p.curve_ = curve;
  p.infinity_ = true;
  return p;
}

CurvePoint CurvePoint::affine(const Curve& curve, const FieldElement& x, const FieldElement& y) {
  if (!curve.contains(x, y)) {
    throw Error(ErrorKind::InvalidInput, "(" + x.to_string() + ", " + y.to_string() + ") is not on the curve");
  }
  CurvePoint p;
  p.curve_ = curve;
  p.infinity_ = false;
  p.x_ = x;
  p.y_ = y;
  return p;
}

CurvePoint CurvePoint::operator-() const {
  if (infinity_) return *this;
  CurvePoint out = *this;
  out.y_ = -y_ - curve_.a1() * x_ - curve_.a3();
  return out;
}

CurvePoint CurvePoint::operator+(const CurvePoint& rhs) const {
  if (curve_ != rhs.curve_) throw Error(ErrorKind::MixedCurves, "points on different curves");
  if (infinity_) return rhs;
  if (rhs.infinity_) return *this;
  const Curve& e = curve_;
  const FieldElement& x1 = x_;
  const FieldElement& y1 = y_;
  const FieldElement& x2 = rhs.x_;
  const FieldElement& y2 = rhs.y_;
  FieldElement lambda, nu;
  if (x1 == x2) {
    if ((y1 + y2 + e.a1() * x2 + e.a3()).is_zero()) return at_infinity(e);
    const FieldElement den = y1 * 2 + e.a1() * x1 + e.a3();
    lambda = (x1 * x1 * 3 + e.a2() * x1 * 2 + e.a4() - e.a1() * y1) / den;
    nu = (-(x1 * x1 * x1) + e.a4() * x1 + e.a6() * 2 - e.a3() * y1) / den;
  } else {
    const FieldElement den = x2 - x1;
    lambda = (y2 - y1) / den;
    nu = (y1 * x2 - y2 * x1) / den;
  }
  const FieldElement x3 = lambda * lambda + e.a1() * lambda - e.a2() - x1 - x2;
  const FieldElement y3 = -(lambda + e.a1()) * x3 - nu - e.a3();
  CurvePoint out;
  out.curve_ = e;
  out.infinity_ = false;
  out.x_ = x3;
  out.y_ = y3;
  return out;
}

CurvePoint CurvePoint::operator*(std::int64_t n) const {
  CurvePoint base = n < 0 ? -*this : *this;
  std::uint64_t k = n < 0 ? static_cast<std::uint64_t>(-(n + 1)) + 1 : static_cast<std::uint64_t>(n);
  CurvePoint acc = at_infinity(curve_);
  while (k) {
    if (k & 1) acc = acc + base;
    base = base + base;
    k >>= 1;
  }
  return acc;
}

bool CurvePoint::operator==(const CurvePoint& rhs) const {
  if (curve_ != rhs.curve_) return false;
  if (infinity_ || rhs.infinity_) return infinity_ == rhs.infinity_;
  return x_ == rhs.x_ && y_ == rhs.y_;
}

bool CurvePoint::operator<(const CurvePoint& rhs) const {
  if (infinity_ != rhs.infinity_) return infinity_;
  if (infinity_) return false;
  if (x_.index() != rhs.x_.index()) return x_.index() < rhs.x_.index();
  return y_.index() < rhs.y_.index();
}

CurvePoint CurvePoint::base_change(const Curve& target, const FieldEmbedding& emb) const {
  if (infinity_) return at_infinity(target);
  return affine(target, emb(x_), emb(y_));
}

std::string CurvePoint::to_string() const {
  if (infinity_) return "inf";
  return "(" + x_.to_string() + ", " + y_.to_string() + ")";
}

CurvePoint add_points(const CurvePoint& p, const CurvePoint& q) { return p + q; }

std::uint64_t point_order(const CurvePoint& p) {
  std::uint64_t order = p.curve().count();
  for (auto r : prime_factors(order)) {
    while (order % r == 0 && (p * static_cast<std::int64_t>(order / r)).is_infinity()) order /= r;
  }
  return order;
}

std::vector<CurvePoint> torsion_points(const Curve& e, std::uint64_t n) {
  std::vector<CurvePoint> out;
  for (const auto& pt : e.points()) {
    if ((pt * static_cast<std::int64_t>(n)).is_infinity()) out.push_back(pt);
  }
  return out;
}

std::uint64_t geometric_torsion_size(const Curve& e, std::uint64_t n) {
  const std::uint64_t p = e.characteristic();
  std::uint64_t p_part = 1;
  while (n % p == 0) {
    n /= p;
    p_part *= p;
  }
  return n * n * (e.ordinary() ? p_part : 1);
}

CurveExtension extend_curve(const Curve& e, int j) {
  const FieldPtr& f = e.field();
  if (j == 1) {
    return {1, e, std::make_shared<FieldEmbedding>(f, f)};
  }
  FieldPtr big = make_field(f->p, f->k * j);
  auto emb = std::make_shared<FieldEmbedding>(f, big);
  return {j, e.base_change(*emb), emb};
}

std::optional<int> full_torsion_extension_degree(const Curve& e, std::uint64_t n, int bound) {
  const std::uint64_t want = geometric_torsion_size(e, n);
  const std::uint64_t cap = field_size_cap();
  __int128 qj = 1;
  for (int j = 1; j <= bound; ++j) {
    qj *= e.field()->order;
    if (qj > cap) break;
    if (e.count_over_extension(j) % want != 0) continue;
    const CurveExtension ext = extend_curve(e, j);
    if (torsion_points(ext.curve, n).size() == want) return j;
  }
  return std::nullopt;
}

}  // namespace ruledfib
