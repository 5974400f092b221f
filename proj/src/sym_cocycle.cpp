#include "ruledfib/sym_cocycle.hpp"

#include "ruledfib/error.hpp"
#include "ruledfib/finite_field.hpp"

namespace ruledfib {

namespace {

void check_prime(std::uint32_t p) {
  if (!is_prime(p)) throw Error(ErrorKind::NonPrime, std::to_string(p) + " is not prime");
}

void check_mode(Reduction mode) {
  if (mode == Reduction::NotApplicable) throw Error(ErrorKind::InvalidInput, "mode must be ordinary or supersingular");
}

std::int64_t binomial_mod(std::int64_t n, std::int64_t k, std::uint32_t p) {
  // Pascal's rule mod p.
  std::vector<std::int64_t> row(static_cast<std::size_t>(n) + 1, 0);
  row[0] = 1;
  for (std::int64_t i = 1; i <= n; ++i)
    for (std::int64_t j = i; j >= 1; --j) row[j] = (row[j] + row[j - 1]) % p;
  return row[static_cast<std::size_t>(k)];
}

const char* kVarNames[kNumVars] = {"f", "gi", "gj", "lam", "f2"};

}  // namespace

Poly Poly::constant(std::uint32_t p, std::int64_t c) {
  Poly out(p);
  out.add_term(Monomial{}, c);
  return out;
}

Poly Poly::var(std::uint32_t p, Var v, std::uint16_t exponent) {
  Poly out(p);
  Monomial mono{};
  mono[static_cast<std::size_t>(v)] = exponent;
  out.add_term(mono, 1);
  return out;
}

void Poly::add_term(const Monomial& mono, std::int64_t coeff) {
  const std::int64_t p = p_;
  const auto c = static_cast<std::uint32_t>(((coeff % p) + p) % p);
  if (c == 0) return;
  auto it = terms_.find(mono);
  if (it == terms_.end()) {
    terms_.emplace(mono, c);
    return;
  }
  it->second = (it->second + c) % p_;
  if (it->second == 0) terms_.erase(it);
}

int Poly::degree_in(Var v) const {
  int d = -1;
  for (const auto& [mono, c] : terms_) d = std::max<int>(d, mono[static_cast<std::size_t>(v)]);
  return d;
}

Poly Poly::operator+(const Poly& rhs) const {
  Poly out = *this;
  for (const auto& [mono, c] : rhs.terms_) out.add_term(mono, c);
  return out;
}

Poly Poly::operator-(const Poly& rhs) const {
  Poly out = *this;
  for (const auto& [mono, c] : rhs.terms_) out.add_term(mono, -static_cast<std::int64_t>(c));
  return out;
}

Poly Poly::operator*(const Poly& rhs) const {
  if (p_ != rhs.p_) throw Error(ErrorKind::MixedFields, "polynomials over different primes");
  Poly out(p_);
  for (const auto& [ma, ca] : terms_) {
    for (const auto& [mb, cb] : rhs.terms_) {
      Monomial m;
      for (std::size_t i = 0; i < kNumVars; ++i) m[i] = static_cast<std::uint16_t>(ma[i] + mb[i]);
      out.add_term(m, static_cast<std::int64_t>(ca) * cb);
    }
  }
  return out;
}

Poly Poly::pow(unsigned e) const {
  Poly out = constant(p_, 1);
  for (unsigned i = 0; i < e; ++i) out = out * *this;
  return out;
}

std::string Poly::to_string() const {
  if (terms_.empty()) return "0";
  std::string out;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const auto& [mono, c] = *it;
    std::string t;
    for (std::size_t i = 0; i < kNumVars; ++i) {
      if (!mono[i]) continue;
      if (!t.empty()) t += "*";
      t += kVarNames[i];
      if (mono[i] > 1) t += "^" + std::to_string(mono[i]);
    }
    if (t.empty()) {
      t = std::to_string(c);
    } else if (c != 1) {
      t = std::to_string(c) + "*" + t;
    }
    out += (out.empty() ? "" : " + ") + t;
  }
  return out;
}

Poly reduce(const Poly& x, Reduction mode) {
  check_mode(mode);
  const std::uint32_t p = x.characteristic();
  const auto fi = static_cast<std::size_t>(Var::F);
  Poly rel = Poly::var(p, Var::GI) - Poly::var(p, Var::GJ);
  if (mode == Reduction::Ordinary) rel = rel + Poly::var(p, Var::Lam) * Poly::var(p, Var::F);
  Poly cur = x;
  for (;;) {
    Poly done(p), pending(p);
    bool changed = false;
    for (const auto& [mono, c] : cur.terms()) {
      if (mono[fi] < p) {
        done.add_term(mono, c);
        continue;
      }
      changed = true;
      Monomial rest = mono;
      rest[fi] = static_cast<std::uint16_t>(rest[fi] - p);
      Poly t(p);
      t.add_term(rest, c);
      pending = pending + t * rel;
    }
    if (!changed) return done;
    cur = done + pending;
  }
}

PolyMatrix matmul(const PolyMatrix& a, const PolyMatrix& b) {
  const std::size_t n = a.size(), k = b.size(), m = b.empty() ? 0 : b[0].size();
  const std::uint32_t p = a[0][0].characteristic();
  PolyMatrix out(n, std::vector<Poly>(m, Poly(p)));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j)
      for (std::size_t t = 0; t < k; ++t) out[i][j] = out[i][j] + a[i][t] * b[t][j];
  return out;
}

PolyMatrix matsub(const PolyMatrix& a, const PolyMatrix& b) {
  PolyMatrix out = a;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a[i].size(); ++j) out[i][j] = a[i][j] - b[i][j];
  return out;
}

PolyMatrix reduce(const PolyMatrix& a, Reduction mode) {
  PolyMatrix out = a;
  for (auto& row : out)
    for (auto& e : row) e = reduce(e, mode);
  return out;
}

bool is_zero(const PolyMatrix& a) {
  for (const auto& row : a)
    for (const auto& e : row)
      if (!e.is_zero()) return false;
  return true;
}

std::string to_string(const PolyMatrix& a) {
  std::string out;
  for (const auto& row : a) {
    out += "[";
    for (std::size_t j = 0; j < row.size(); ++j) out += (j ? ", " : "") + row[j].to_string();
    out += "]\n";
  }
  return out;
}

PolyMatrix build_sym_matrix(std::uint32_t p, int m) { return build_sym_matrix(p, m, Poly::var(p, Var::F)); }

PolyMatrix build_sym_matrix(std::uint32_t p, int m, const Poly& x) {
  check_prime(p);
  if (m < 0 || static_cast<std::uint32_t>(m) > p) {
    throw Error(ErrorKind::ExponentOutOfRange, "need 0 <= m <= p, got m = " + std::to_string(m));
  }
  const auto n = static_cast<std::size_t>(m) + 1;
  PolyMatrix a(n, std::vector<Poly>(n, Poly(p)));
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = r; c < n; ++c) {
      const auto k = static_cast<std::int64_t>(c - r);
      a[r][c] = Poly::constant(p, binomial_mod(m - static_cast<std::int64_t>(r), k, p)) * x.pow(static_cast<unsigned>(k));
    }
  return a;
}

bool verify_block_structure(std::uint32_t p) {
  const auto a = build_sym_matrix(p, static_cast<int>(p));
  const auto b = build_sym_matrix(p, static_cast<int>(p) - 1);
  for (std::size_t c = 0; c <= p; ++c) {
    Poly want = c == 0 ? Poly::constant(p, 1) : c == p ? Poly::var(p, Var::F, static_cast<std::uint16_t>(p)) : Poly(p);
    if (!(a[0][c] == want)) return false;
  }
  for (std::size_t r = 1; r <= p; ++r) {
    if (!a[r][0].is_zero()) return false;
    for (std::size_t c = 1; c <= p; ++c)
      if (!(a[r][c] == b[r - 1][c - 1])) return false;
  }
  return true;
}

PolyMatrix gauge_matrix(std::uint32_t p, Var g, Reduction mode) {
  check_prime(p);
  check_mode(mode);
  const std::size_t n = p + 1;
  PolyMatrix m(n, std::vector<Poly>(n, Poly(p)));
  for (std::size_t i = 0; i < n; ++i) m[i][i] = Poly::constant(p, 1);
  if (mode == Reduction::Ordinary) m[0][p - 1] = m[0][p - 1] + Poly::var(p, Var::Lam);
  m[0][p] = m[0][p] - Poly::var(p, g);
  return m;
}

PolyMatrix split_matrix(std::uint32_t p) {
  const auto b = build_sym_matrix(p, static_cast<int>(p) - 1);
  const std::size_t n = p + 1;
  PolyMatrix m(n, std::vector<Poly>(n, Poly(p)));
  m[0][0] = Poly::constant(p, 1);
  for (std::size_t r = 1; r < n; ++r)
    for (std::size_t c = 1; c < n; ++c) m[r][c] = b[r - 1][c - 1];
  return m;
}

PolyMatrix conjugation_difference(std::uint32_t p, Reduction mode) {
  const auto a = build_sym_matrix(p, static_cast<int>(p));
  const auto lhs = matmul(a, gauge_matrix(p, Var::GI, mode));
  const auto rhs = matmul(gauge_matrix(p, Var::GJ, mode), split_matrix(p));
  return reduce(matsub(lhs, rhs), mode);
}

bool verify_conjugation(std::uint32_t p, Reduction mode) { return is_zero(conjugation_difference(p, mode)); }

bool verify_cocycle_condition(std::uint32_t p, int m) {
  const Poly fij = Poly::var(p, Var::F), fjk = Poly::var(p, Var::F2);
  const auto lhs = matmul(build_sym_matrix(p, m, fij), build_sym_matrix(p, m, fjk));
  const auto rhs = build_sym_matrix(p, m, fij + fjk);
  return is_zero(matsub(lhs, rhs));
}

}  // namespace ruledfib
