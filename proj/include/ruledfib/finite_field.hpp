#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ruledfib/error.hpp"

namespace ruledfib {

/// Description of F_{p^k} as F_p[x] / (modulus).
///
/// The modulus is the lexicographically least monic irreducible polynomial of
/// degree k (coefficients compared from x^{k-1} down to x^0), so two
/// descriptors built from the same (p, k) are always interchangeable.
struct FieldDesc {
  std::uint32_t p = 0;
  int k = 0;
  std::vector<std::uint32_t> modulus;  // little-endian, size k + 1, monic
  std::uint64_t order = 0;             // p^k

  bool same_as(const FieldDesc& other) const {
    return p == other.p && k == other.k && modulus == other.modulus;
  }
};

using FieldPtr = std::shared_ptr<const FieldDesc>;

/// Default cap on p^k; RULEDFIB_MAX_FIELD overrides it.
inline constexpr std::uint64_t kDefaultFieldCap = std::uint64_t{1} << 20;
/// Searches that enumerate every point of an extension stop at this size.
inline constexpr std::uint64_t kEnumerationFieldCap = std::uint64_t{1} << 16;
std::uint64_t field_size_cap();

bool is_prime(std::uint64_t n);

FieldPtr make_field(std::int64_t p, int k);
FieldPtr make_field(std::int64_t p, int k, std::uint64_t cap);

/// Exhaustive irreducibility test: no monic factor of degree <= deg/2.
bool is_irreducible_mod_p(std::span<const std::uint32_t> poly, std::uint32_t p);

class FieldElement {
 public:
  FieldElement() = default;
  FieldElement(FieldPtr field, std::uint64_t index);

  static FieldElement zero(const FieldPtr& field) { return {field, 0}; }
  static FieldElement one(const FieldPtr& field) { return {field, 1}; }
  static FieldElement from_int(const FieldPtr& field, std::int64_t value);
  static FieldElement from_coeffs(const FieldPtr& field, std::span<const std::int64_t> coeffs);

  const FieldPtr& field() const { return field_; }
  bool valid() const { return field_ != nullptr; }

  // Base-p digits of the index are the polynomial coefficients, low degree first.
  std::uint64_t index() const { return index_; }
  std::vector<std::uint32_t> coeffs() const;

  bool is_zero() const { return index_ == 0; }
  bool is_one() const { return index_ == 1; }
  bool in_prime_field() const { return index_ < field_->p; }

  FieldElement operator+(const FieldElement& rhs) const;
  FieldElement operator-(const FieldElement& rhs) const;
  FieldElement operator*(const FieldElement& rhs) const;
  FieldElement operator/(const FieldElement& rhs) const;
  FieldElement operator-() const;
  FieldElement& operator+=(const FieldElement& rhs) { return *this = *this + rhs; }
  FieldElement& operator-=(const FieldElement& rhs) { return *this = *this - rhs; }
  FieldElement& operator*=(const FieldElement& rhs) { return *this = *this * rhs; }

  FieldElement operator*(std::int64_t scalar) const;

  bool operator==(const FieldElement& rhs) const;
  bool operator!=(const FieldElement& rhs) const { return !(*this == rhs); }

  /// Extended Euclid on the polynomial residue.
  FieldElement inverse() const;
  FieldElement pow(std::uint64_t e) const;
  FieldElement frobenius() const { return pow(field_->p); }

  bool is_square() const;
  std::optional<FieldElement> sqrt() const;

  /// Absolute trace to F_p, returned as an integer in [0, p).
  std::uint32_t absolute_trace() const;

  std::string to_string() const;

 private:
  void check_same(const FieldElement& rhs) const;

  FieldPtr field_;
  std::uint64_t index_ = 0;
};

enum class ArithOp { Add, Sub, Mul, Div };

FieldElement arith(const FieldElement& a, const FieldElement& b, ArithOp op);
FieldElement frobenius_power(const FieldElement& a);

/// Roots of z^2 + b z = c (any characteristic).
std::vector<FieldElement> solve_quadratic(const FieldElement& b, const FieldElement& c);

/// Least-index element of multiplicative order p^k - 1.
FieldElement primitive_element(const FieldPtr& field);

std::vector<FieldElement> all_elements(const FieldPtr& field);

/// Ring map F_{p^a} -> F_{p^b} (a | b) sending x to the least-index root of
/// the small field's modulus.
class FieldEmbedding {
 public:
  FieldEmbedding(FieldPtr small, FieldPtr big);

  FieldElement operator()(const FieldElement& a) const;
  const FieldPtr& source() const { return small_; }
  const FieldPtr& target() const { return big_; }

 private:
  FieldPtr small_;
  FieldPtr big_;
  std::vector<FieldElement> powers_;  // images of x^0 .. x^{a-1}
};

}  // namespace ruledfib
