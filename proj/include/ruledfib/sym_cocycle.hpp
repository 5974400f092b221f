#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "ruledfib/reduction.hpp"

namespace ruledfib {

/// Formal generators of the transition-function ring.
enum class Var : std::size_t { F = 0, GI = 1, GJ = 2, Lam = 3, F2 = 4 };
inline constexpr std::size_t kNumVars = 5;

using Monomial = std::array<std::uint16_t, kNumVars>;

/// Polynomial over F_p in the formal generators.
class Poly {
 public:
  explicit Poly(std::uint32_t p = 2) : p_(p) {}
  static Poly constant(std::uint32_t p, std::int64_t c);
  static Poly var(std::uint32_t p, Var v, std::uint16_t exponent = 1);

  std::uint32_t characteristic() const { return p_; }
  const std::map<Monomial, std::uint32_t>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  int degree_in(Var v) const;

  Poly operator+(const Poly& rhs) const;
  Poly operator-(const Poly& rhs) const;
  Poly operator*(const Poly& rhs) const;
  Poly pow(unsigned e) const;
  bool operator==(const Poly& rhs) const { return p_ == rhs.p_ && terms_ == rhs.terms_; }
  std::string to_string() const;

  void add_term(const Monomial& mono, std::int64_t coeff);

 private:
  std::uint32_t p_;
  std::map<Monomial, std::uint32_t> terms_;  // nonzero coefficients only
};

/// Applies f^p -> lam f + gi - gj (lam = 0 for supersingular) until no
/// monomial has f-degree >= p.
Poly reduce(const Poly& x, Reduction mode);

using PolyMatrix = std::vector<std::vector<Poly>>;

PolyMatrix matmul(const PolyMatrix& a, const PolyMatrix& b);
PolyMatrix matsub(const PolyMatrix& a, const PolyMatrix& b);
PolyMatrix reduce(const PolyMatrix& a, Reduction mode);
bool is_zero(const PolyMatrix& a);
std::string to_string(const PolyMatrix& a);

/// (m+1) x (m+1) transition matrix of Sym^m E_{2,0}: entry (r, c) is
/// C(m-r, c-r) x^(c-r) mod p for c >= r, with x = f by default.
PolyMatrix build_sym_matrix(std::uint32_t p, int m);
PolyMatrix build_sym_matrix(std::uint32_t p, int m, const Poly& x);

/// First row (1, 0, ..., 0, f^p) and lower-right block equal to the m = p-1 matrix.
bool verify_block_structure(std::uint32_t p);

/// The gauge matrix P_i (g = gi) or P_j (g = gj): identity plus top row
/// entries lam and -g in the last two columns.
PolyMatrix gauge_matrix(std::uint32_t p, Var g, Reduction mode);
/// 1 (+) A^(p-1), block diagonal.
PolyMatrix split_matrix(std::uint32_t p);
/// A^(p) P_i - P_j split, fully reduced.
PolyMatrix conjugation_difference(std::uint32_t p, Reduction mode);
bool verify_conjugation(std::uint32_t p, Reduction mode);

/// A(f_ij) A(f_jk) = A(f_ij + f_jk).
bool verify_cocycle_condition(std::uint32_t p, int m);

}  // namespace ruledfib
