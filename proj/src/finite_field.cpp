#include "ruledfib/finite_field.hpp"

#include <map>
#include <mutex>

#include <algorithm>
#include <cstdlib>
#include <sstream>

namespace ruledfib {
namespace {

using Poly = std::vector<std::uint32_t>;

std::uint32_t inv_mod_p(std::uint32_t a, std::uint32_t p) {
  // p prime, a != 0
  std::uint64_t result = 1, base = a % p;
  std::uint64_t e = p - 2;
  while (e) {
    if (e & 1) result = result * base % p;
    base = base * base % p;
    e >>= 1;
  }
  return static_cast<std::uint32_t>(result);
}

void trim(Poly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

// Remainder and quotient of a by b over F_p; b must be nonzero.
void divmod(const Poly& a, const Poly& b, std::uint32_t p, Poly& quot, Poly& rem) {
  rem = a;
  trim(rem);
  Poly bb = b;
  trim(bb);
  const std::size_t db = bb.size() - 1;
  quot.assign(rem.size() >= bb.size() ? rem.size() - db : 0, 0);
  const std::uint32_t lead_inv = inv_mod_p(bb.back(), p);
  while (rem.size() >= bb.size()) {
    const std::size_t shift = rem.size() - bb.size();
    const std::uint64_t c = std::uint64_t{rem.back()} * lead_inv % p;
    quot[shift] = static_cast<std::uint32_t>(c);
    for (std::size_t j = 0; j <= db; ++j) {
      const std::uint64_t sub = c * bb[j] % p;
      rem[shift + j] = static_cast<std::uint32_t>((rem[shift + j] + p - sub) % p);
    }
    trim(rem);
  }
}

Poly poly_mul(const Poly& a, const Poly& b, std::uint32_t p) {
  if (a.empty() || b.empty()) return {};
  Poly out(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!a[i]) continue;
    for (std::size_t j = 0; j < b.size(); ++j) {
      out[i + j] = static_cast<std::uint32_t>((out[i + j] + std::uint64_t{a[i]} * b[j]) % p);
    }
  }
  trim(out);
  return out;
}

Poly poly_sub(const Poly& a, const Poly& b, std::uint32_t p) {
  Poly out(std::max(a.size(), b.size()), 0);
  for (std::size_t i = 0; i < out.size(); ++i) {
    const std::uint32_t x = i < a.size() ? a[i] : 0;
    const std::uint32_t y = i < b.size() ? b[i] : 0;
    out[i] = (x + p - y) % p;
  }
  trim(out);
  return out;
}

Poly decode(std::uint64_t index, const FieldDesc& f) {
  Poly d(static_cast<std::size_t>(f.k), 0);
  for (int i = 0; i < f.k; ++i) {
    d[static_cast<std::size_t>(i)] = static_cast<std::uint32_t>(index % f.p);
    index /= f.p;
  }
  return d;
}

std::uint64_t encode(const Poly& d, const FieldDesc& f) {
  std::uint64_t index = 0;
  for (std::size_t i = std::min<std::size_t>(d.size(), static_cast<std::size_t>(f.k)); i-- > 0;) {
    index = index * f.p + d[i];
  }
  return index;
}

// Carry-less multiply and reduce for characteristic 2.
std::uint64_t mul_char2(std::uint64_t a, std::uint64_t b, const FieldDesc& f, std::uint64_t mod_mask) {
  std::uint64_t result = 0;
  const int k = f.k;
  const std::uint64_t top = std::uint64_t{1} << k;
  while (b) {
    if (b & 1) result ^= a;
    b >>= 1;
    a <<= 1;
    if (a & top) a ^= mod_mask;
  }
  return result;
}

std::uint64_t modulus_mask(const FieldDesc& f) {
  std::uint64_t mask = 0;
  for (int i = f.k; i >= 0; --i) mask = (mask << 1) | f.modulus[static_cast<std::size_t>(i)];
  return mask;
}

bool checked_power(std::uint64_t p, int k, std::uint64_t cap, std::uint64_t& out) {
  std::uint64_t q = 1;
  for (int i = 0; i < k; ++i) {
    if (q > cap / p) return false;
    q *= p;
  }
  out = q;
  return q <= cap;
}

}  // namespace

std::uint64_t field_size_cap() {
  if (const char* env = std::getenv("RULEDFIB_MAX_FIELD")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0' && v >= 2) return v;
  }
  return kDefaultFieldCap;
}

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

bool is_irreducible_mod_p(std::span<const std::uint32_t> poly, std::uint32_t p) {
  Poly f(poly.begin(), poly.end());
  trim(f);
  if (f.size() < 2) return false;
  const std::size_t deg = f.size() - 1;
  if (deg == 1) return true;
  Poly quot, rem;
  for (std::size_t j = 1; j <= deg / 2; ++j) {
    std::uint64_t count = 1;
    for (std::size_t i = 0; i < j; ++i) count *= p;
    for (std::uint64_t t = 0; t < count; ++t) {
      Poly g(j + 1, 0);
      std::uint64_t v = t;
      for (std::size_t i = 0; i < j; ++i) {
        g[i] = static_cast<std::uint32_t>(v % p);
        v /= p;
      }
      g[j] = 1;
      divmod(f, g, p, quot, rem);
      if (rem.empty()) return false;
    }
  }
  return true;
}

FieldPtr make_field(std::int64_t p, int k) { return make_field(p, k, field_size_cap()); }

FieldPtr make_field(std::int64_t p, int k, std::uint64_t cap) {
  if (p < 2 || !is_prime(static_cast<std::uint64_t>(p))) {
    throw Error(ErrorKind::NonPrime, std::to_string(p) + " is not prime");
  }
  if (k < 1) throw Error(ErrorKind::DegreeOutOfRange, "extension degree must be >= 1");
  std::uint64_t order = 0;
  if (!checked_power(static_cast<std::uint64_t>(p), k, cap, order)) {
    throw Error(ErrorKind::DegreeOutOfRange,
                std::to_string(p) + "^" + std::to_string(k) + " exceeds the field size cap " +
                    std::to_string(cap));
  }
  static std::mutex cache_mutex;
  static std::map<std::pair<std::int64_t, int>, FieldPtr> cache;
  std::lock_guard<std::mutex> lock(cache_mutex);
  if (auto it = cache.find({p, k}); it != cache.end()) return it->second;
  auto desc = std::make_shared<FieldDesc>();
  desc->p = static_cast<std::uint32_t>(p);
  desc->k = k;
  desc->order = order;
  // Tails are enumerated by integer index, i.e. lexicographically from x^{k-1} down.
  for (std::uint64_t tail = 0; tail < order; ++tail) {
    Poly m(static_cast<std::size_t>(k) + 1, 0);
    std::uint64_t v = tail;
    for (int i = 0; i < k; ++i) {
      m[static_cast<std::size_t>(i)] = static_cast<std::uint32_t>(v % desc->p);
      v /= desc->p;
    }
    m[static_cast<std::size_t>(k)] = 1;
    if (is_irreducible_mod_p(m, desc->p)) {
      desc->modulus = std::move(m);
      cache[{p, k}] = desc;
      return desc;
    }
  }
  throw Error(ErrorKind::DegreeOutOfRange, "no irreducible polynomial found");
}

FieldElement::FieldElement(FieldPtr field, std::uint64_t index) : field_(std::move(field)), index_(index) {
  if (!field_) throw Error(ErrorKind::InvalidInput, "null field");
  if (index_ >= field_->order) throw Error(ErrorKind::InvalidInput, "element index out of range");
}

FieldElement FieldElement::from_int(const FieldPtr& field, std::int64_t value) {
  const std::int64_t p = field->p;
  std::int64_t r = value % p;
  if (r < 0) r += p;
  return {field, static_cast<std::uint64_t>(r)};
}

FieldElement FieldElement::from_coeffs(const FieldPtr& field, std::span<const std::int64_t> coeffs) {
  if (coeffs.size() > static_cast<std::size_t>(field->k)) {
    throw Error(ErrorKind::InvalidInput, "too many coefficients for the field degree");
  }
  Poly d(static_cast<std::size_t>(field->k), 0);
  const std::int64_t p = field->p;
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    std::int64_t r = coeffs[i] % p;
    if (r < 0) r += p;
    d[i] = static_cast<std::uint32_t>(r);
  }
  return {field, encode(d, *field)};
}

std::vector<std::uint32_t> FieldElement::coeffs() const { return decode(index_, *field_); }

void FieldElement::check_same(const FieldElement& rhs) const {
  if (!field_ || !rhs.field_) throw Error(ErrorKind::InvalidInput, "uninitialized field element");
  if (field_ != rhs.field_ && !field_->same_as(*rhs.field_)) {
    throw Error(ErrorKind::MixedFields, "operands live in different fields");
  }
}

FieldElement FieldElement::operator+(const FieldElement& rhs) const {
  check_same(rhs);
  const FieldDesc& f = *field_;
  if (f.p == 2) return {field_, index_ ^ rhs.index_};
  if (f.k == 1) return {field_, (index_ + rhs.index_) % f.p};
  std::uint64_t a = index_, b = rhs.index_, out = 0, place = 1;
  for (int i = 0; i < f.k; ++i) {
    out += ((a % f.p + b % f.p) % f.p) * place;
    a /= f.p;
    b /= f.p;
    place *= f.p;
  }
  return {field_, out};
}

FieldElement FieldElement::operator-() const {
  const FieldDesc& f = *field_;
  if (f.p == 2) return *this;
  std::uint64_t a = index_, out = 0, place = 1;
  for (int i = 0; i < f.k; ++i) {
    out += ((f.p - a % f.p) % f.p) * place;
    a /= f.p;
    place *= f.p;
  }
  return {field_, out};
}

FieldElement FieldElement::operator-(const FieldElement& rhs) const {
  check_same(rhs);
  return *this + (-rhs);
}

FieldElement FieldElement::operator*(const FieldElement& rhs) const {
  check_same(rhs);
  const FieldDesc& f = *field_;
  if (f.k == 1) return {field_, index_ * rhs.index_ % f.p};
  if (f.p == 2) return {field_, mul_char2(index_, rhs.index_, f, modulus_mask(f))};
  Poly prod = poly_mul(decode(index_, f), decode(rhs.index_, f), f.p);
  Poly quot, rem;
  divmod(prod, f.modulus, f.p, quot, rem);
  return {field_, encode(rem, f)};
}

FieldElement FieldElement::operator*(std::int64_t scalar) const {
  return *this * FieldElement::from_int(field_, scalar);
}

FieldElement FieldElement::operator/(const FieldElement& rhs) const {
  check_same(rhs);
  return *this * rhs.inverse();
}

bool FieldElement::operator==(const FieldElement& rhs) const {
  if (!field_ || !rhs.field_) return field_ == rhs.field_ && index_ == rhs.index_;
  return index_ == rhs.index_ && (field_ == rhs.field_ || field_->same_as(*rhs.field_));
}

FieldElement FieldElement::inverse() const {
  if (is_zero()) throw Error(ErrorKind::DivisionByZero, "inverse of zero");
  const FieldDesc& f = *field_;
  if (f.k == 1) return {field_, inv_mod_p(static_cast<std::uint32_t>(index_), f.p)};
  // Extended Euclid: track s with s * a == r (mod modulus).
  Poly r0 = f.modulus, r1 = decode(index_, f);
  trim(r1);
  Poly s0, s1{1};
  Poly quot, rem;
  while (!r1.empty()) {
    divmod(r0, r1, f.p, quot, rem);
    Poly s2 = poly_sub(s0, poly_mul(quot, s1, f.p), f.p);
    r0 = std::move(r1);
    r1 = std::move(rem);
    s0 = std::move(s1);
    s1 = std::move(s2);
  }
  // r0 is a nonzero constant since the modulus is irreducible.
  const std::uint32_t c = inv_mod_p(r0[0], f.p);
  for (auto& x : s0) x = static_cast<std::uint32_t>(std::uint64_t{x} * c % f.p);
  divmod(s0, f.modulus, f.p, quot, rem);
  return {field_, encode(rem, f)};
}

FieldElement FieldElement::pow(std::uint64_t e) const {
  FieldElement result = one(field_);
  FieldElement base = *this;
  while (e) {
    if (e & 1) result = result * base;
    base = base * base;
    e >>= 1;
  }
  return result;
}

bool FieldElement::is_square() const {
  if (is_zero() || field_->p == 2) return true;
  return pow((field_->order - 1) / 2).is_one();
}

std::optional<FieldElement> FieldElement::sqrt() const {
  if (is_zero()) return *this;
  const std::uint64_t q = field_->order;
  if (field_->p == 2) return pow(q / 2);
  if (!is_square()) return std::nullopt;
  // Tonelli-Shanks
  std::uint64_t t = q - 1;
  int s = 0;
  while (t % 2 == 0) {
    t /= 2;
    ++s;
  }
  FieldElement z = one(field_);
  for (std::uint64_t i = 2; i < q; ++i) {
    FieldElement cand(field_, i);
    if (!cand.is_square()) {
      z = cand;
      break;
    }
  }
  FieldElement c = z.pow(t);
  FieldElement x = pow((t + 1) / 2);
  FieldElement b = pow(t);
  int m = s;
  while (!b.is_one()) {
    int i = 0;
    FieldElement b2 = b;
    while (!b2.is_one()) {
      b2 = b2 * b2;
      ++i;
    }
    FieldElement g = c;
    for (int j = 0; j < m - i - 1; ++j) g = g * g;
    x = x * g;
    c = g * g;
    b = b * c;
    m = i;
  }
  return x;
}

std::uint32_t FieldElement::absolute_trace() const {
  FieldElement acc = zero(field_);
  FieldElement term = *this;
  for (int i = 0; i < field_->k; ++i) {
    acc = acc + term;
    term = term.frobenius();
  }
  return static_cast<std::uint32_t>(acc.index());
}

std::string FieldElement::to_string() const {
  if (!field_) return "<invalid>";
  if (field_->k == 1) return std::to_string(index_);
  std::ostringstream os;
  os << '[';
  const auto c = coeffs();
  for (std::size_t i = 0; i < c.size(); ++i) os << (i ? "," : "") << c[i];
  os << ']';
  return os.str();
}

FieldElement arith(const FieldElement& a, const FieldElement& b, ArithOp op) {
  switch (op) {
    case ArithOp::Add: return a + b;
    case ArithOp::Sub: return a - b;
    case ArithOp::Mul: return a * b;
    case ArithOp::Div: return a / b;
  }
  throw Error(ErrorKind::InvalidInput, "unknown arithmetic op");
}

FieldElement frobenius_power(const FieldElement& a) { return a.frobenius(); }

std::vector<FieldElement> solve_quadratic(const FieldElement& b, const FieldElement& c) {
  const FieldPtr& f = b.field();
  std::vector<FieldElement> roots;
  if (f->p != 2) {
    const FieldElement disc = b * b + c * 4;
    const auto s = disc.sqrt();
    if (!s) return roots;
    const FieldElement half = FieldElement::from_int(f, 2).inverse();
    roots.push_back((-b + *s) * half);
    if (!s->is_zero()) roots.push_back((-b - *s) * half);
    return roots;
  }
  if (b.is_zero()) {
    roots.push_back(*c.sqrt());
    return roots;
  }
  // z = b w with w^2 + w = c / b^2, solved as an F_2-linear system.
  const FieldElement target = c / (b * b);
  if (target.absolute_trace() != 0) return roots;
  const int k = f->k;
  std::vector<std::uint64_t> rows(static_cast<std::size_t>(k), 0);  // row i: bit j = coeff i of L(e_j)
  for (int j = 0; j < k; ++j) {
    FieldElement e(f, std::uint64_t{1} << j);
    const std::uint64_t img = (e * e + e).index();
    for (int i = 0; i < k; ++i) {
      if ((img >> i) & 1) rows[static_cast<std::size_t>(i)] |= std::uint64_t{1} << j;
    }
  }
  std::vector<int> rhs(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) rhs[static_cast<std::size_t>(i)] = static_cast<int>((target.index() >> i) & 1);
  std::vector<int> pivot_col(static_cast<std::size_t>(k), -1);
  int row = 0;
  for (int col = 0; col < k && row < k; ++col) {
    int sel = -1;
    for (int r = row; r < k; ++r) {
      if ((rows[static_cast<std::size_t>(r)] >> col) & 1) {
        sel = r;
        break;
      }
    }
    if (sel < 0) continue;
    std::swap(rows[static_cast<std::size_t>(sel)], rows[static_cast<std::size_t>(row)]);
    std::swap(rhs[static_cast<std::size_t>(sel)], rhs[static_cast<std::size_t>(row)]);
    for (int r = 0; r < k; ++r) {
      if (r != row && ((rows[static_cast<std::size_t>(r)] >> col) & 1)) {
        rows[static_cast<std::size_t>(r)] ^= rows[static_cast<std::size_t>(row)];
        rhs[static_cast<std::size_t>(r)] ^= rhs[static_cast<std::size_t>(row)];
      }
    }
    pivot_col[static_cast<std::size_t>(row)] = col;
    ++row;
  }
  std::uint64_t w = 0;
  for (int r = 0; r < row; ++r) {
    if (rhs[static_cast<std::size_t>(r)]) w |= std::uint64_t{1} << pivot_col[static_cast<std::size_t>(r)];
  }
  const FieldElement w0(f, w);
  roots.push_back(b * w0);
  roots.push_back(b * (w0 + FieldElement::one(f)));
  return roots;
}

FieldElement primitive_element(const FieldPtr& field) {
  const std::uint64_t n = field->order - 1;
  std::vector<std::uint64_t> primes;
  std::uint64_t m = n;
  for (std::uint64_t d = 2; d * d <= m; ++d) {
    if (m % d == 0) {
      primes.push_back(d);
      while (m % d == 0) m /= d;
    }
  }
  if (m > 1) primes.push_back(m);
  for (std::uint64_t i = 1; i < field->order; ++i) {
    FieldElement g(field, i);
    bool ok = true;
    for (auto r : primes) {
      if (g.pow(n / r).is_one()) {
        ok = false;
        break;
      }
    }
    if (ok) return g;
  }
  throw Error(ErrorKind::InvalidInput, "no primitive element");
}

std::vector<FieldElement> all_elements(const FieldPtr& field) {
  std::vector<FieldElement> out;
  out.reserve(field->order);
  for (std::uint64_t i = 0; i < field->order; ++i) out.emplace_back(field, i);
  return out;
}

FieldEmbedding::FieldEmbedding(FieldPtr small, FieldPtr big) : small_(std::move(small)), big_(std::move(big)) {
  if (small_->p != big_->p || big_->k % small_->k != 0) {
    throw Error(ErrorKind::MixedFields, "no embedding between these fields");
  }
  // least-index root of the small modulus in the big field
  std::optional<FieldElement> root;
  for (std::uint64_t i = 0; i < big_->order && !root; ++i) {
    FieldElement x(big_, i);
    FieldElement acc = FieldElement::zero(big_);
    for (std::size_t j = small_->modulus.size(); j-- > 0;) {
      acc = acc * x + FieldElement::from_int(big_, small_->modulus[j]);
    }
    if (acc.is_zero()) root = x;
  }
  if (!root) throw Error(ErrorKind::MixedFields, "modulus has no root in the target field");
  FieldElement power = FieldElement::one(big_);
  for (int i = 0; i < small_->k; ++i) {
    powers_.push_back(power);
    power = power * *root;
  }
}

FieldElement FieldEmbedding::operator()(const FieldElement& a) const {
  if (!a.field()->same_as(*small_)) throw Error(ErrorKind::MixedFields, "element not in source field");
  FieldElement out = FieldElement::zero(big_);
  const auto c = a.coeffs();
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (c[i]) out = out + powers_[i] * static_cast<std::int64_t>(c[i]);
  }
  return out;
}

}  // namespace ruledfib
