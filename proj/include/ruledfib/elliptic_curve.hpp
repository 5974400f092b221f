#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ruledfib/finite_field.hpp"

namespace ruledfib {

class CurvePoint;

/// Long Weierstrass curve y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6.
///
/// Construction counts points naively and caches the trace and the
/// supersingular flag (p | t), so every Curve value is smooth and carries
/// its group order. Copies share the cached data.
class Curve {
 public:
  Curve() = default;

  static Curve make(const FieldPtr& field, const FieldElement& a1, const FieldElement& a2,
                    const FieldElement& a3, const FieldElement& a4, const FieldElement& a6);
  static Curve make(const FieldPtr& field, std::array<std::int64_t, 5> prime_field_coeffs);

  bool valid() const { return data_ != nullptr; }
  const FieldPtr& field() const;
  std::uint32_t characteristic() const { return field()->p; }
  const FieldElement& a1() const;
  const FieldElement& a2() const;
  const FieldElement& a3() const;
  const FieldElement& a4() const;
  const FieldElement& a6() const;
  std::array<FieldElement, 5> coefficients() const;

  FieldElement b2() const;
  FieldElement b4() const;
  FieldElement b6() const;
  FieldElement b8() const;
  FieldElement discriminant() const;
  FieldElement j_invariant() const;

  std::uint64_t count() const;
  std::int64_t trace() const;
  bool supersingular() const;
  bool ordinary() const { return !supersingular(); }

  /// #E(F_{q^j}) from the trace via the Frobenius recurrence.
  std::uint64_t count_over_extension(int j) const;

  bool contains(const FieldElement& x, const FieldElement& y) const;
  CurvePoint infinity() const;
  CurvePoint point(const FieldElement& x, const FieldElement& y) const;
  CurvePoint point(std::int64_t x, std::int64_t y) const;

  /// All rational points, infinity first, then by (x, y) index.
  std::vector<CurvePoint> points() const;
  std::vector<CurvePoint> points_with_x(const FieldElement& x) const;

  /// Curve with every coefficient raised to the p-th power `times` times.
  Curve frobenius_twist(int times = 1) const;
  Curve base_change(const FieldEmbedding& emb) const;

  /// (n1, n2) with E(F_q) = Z/n1 x Z/n2 and n1 | n2.
  std::pair<std::uint64_t, std::uint64_t> group_structure() const;

  bool operator==(const Curve& rhs) const;
  bool operator!=(const Curve& rhs) const { return !(*this == rhs); }

  std::string to_string() const;

 private:
  struct Data;
  std::shared_ptr<const Data> data_;
};

class CurvePoint {
 public:
  CurvePoint() = default;
  static CurvePoint at_infinity(const Curve& curve);
  static CurvePoint affine(const Curve& curve, const FieldElement& x, const FieldElement& y);

  const Curve& curve() const { return curve_; }
  bool is_infinity() const { return infinity_; }
  const FieldElement& x() const { return x_; }
  const FieldElement& y() const { return y_; }

  CurvePoint operator+(const CurvePoint& rhs) const;
  CurvePoint operator-() const;
  CurvePoint operator-(const CurvePoint& rhs) const { return *this + (-rhs); }
  CurvePoint operator*(std::int64_t n) const;

  bool operator==(const CurvePoint& rhs) const;
  bool operator!=(const CurvePoint& rhs) const { return !(*this == rhs); }
  // Deterministic order for sorting: infinity first, then x, then y index.
  bool operator<(const CurvePoint& rhs) const;

  CurvePoint base_change(const Curve& target, const FieldEmbedding& emb) const;

  std::string to_string() const;

 private:
  Curve curve_;
  bool infinity_ = true;
  FieldElement x_, y_;
};

inline CurvePoint operator*(std::int64_t n, const CurvePoint& p) { return p * n; }

Curve make_curve(const FieldPtr& field, const FieldElement& a1, const FieldElement& a2,
                 const FieldElement& a3, const FieldElement& a4, const FieldElement& a6);
CurvePoint add_points(const CurvePoint& p, const CurvePoint& q);
std::uint64_t point_order(const CurvePoint& p);

/// Rational points P with nP = infinity.
std::vector<CurvePoint> torsion_points(const Curve& e, std::uint64_t n);

/// |E[n]| over an algebraic closure: n'^2 * p^a if ordinary, n'^2 if
/// supersingular, where n = p^a n'.
std::uint64_t geometric_torsion_size(const Curve& e, std::uint64_t n);

inline constexpr int kDefaultExtensionBound = 12;

/// A curve viewed over F_{q^j} together with the embedding that got it there.
struct CurveExtension {
  int degree = 1;
  Curve curve;
  std::shared_ptr<const FieldEmbedding> embedding;

  CurvePoint lift(const CurvePoint& p) const { return p.base_change(curve, *embedding); }
};

CurveExtension extend_curve(const Curve& e, int j);

/// Smallest j <= bound such that E(F_{q^j}) contains all of E[n]; nullopt if
/// none exists within the bound or the field cap.
std::optional<int> full_torsion_extension_degree(const Curve& e, std::uint64_t n,
                                                 int bound = kDefaultExtensionBound);

}  // namespace ruledfib
