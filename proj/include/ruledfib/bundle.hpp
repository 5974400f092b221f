#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ruledfib/isogeny.hpp"
#include "ruledfib/reduction.hpp"

namespace ruledfib {

/// Order of a symbolic degree-0 line bundle.
struct LineOrder {
  enum class Kind { Finite, Infinite, Unknown };
  Kind kind = Kind::Unknown;
  std::uint64_t value = 0;

  static LineOrder finite(std::uint64_t n) { return {Kind::Finite, n}; }
  static LineOrder infinite() { return {Kind::Infinite, 0}; }
  static LineOrder unknown() { return {Kind::Unknown, 0}; }
  bool operator==(const LineOrder&) const = default;
  std::string to_string() const;
};

/// Stand-in for a curve over an algebraically closed field: only the
/// characteristic, the ordinary/supersingular flag and optionally the order
/// of one designated line bundle are known.
struct SymbolicCurve {
  std::uint32_t p = 0;
  Reduction reduction = Reduction::NotApplicable;
  std::optional<LineOrder> designated_order;

  void validate() const;
};

/// O(P - O) (x) O(n O). The degree-0 part is either a rational point or a
/// named symbolic class L^exponent.
class LineClass {
 public:
  enum class Kind { Trivial, Point, Symbolic };

  LineClass() = default;
  static LineClass trivial(std::int64_t shift = 0);
  static LineClass of_point(const CurvePoint& p, std::int64_t shift = 0);
  static LineClass symbolic(std::string name, LineOrder order, std::int64_t exponent = 1, std::int64_t shift = 0);

  Kind kind() const { return kind_; }
  std::int64_t degree() const { return shift_; }
  const std::optional<CurvePoint>& point() const { return point_; }
  const std::string& name() const { return name_; }
  std::int64_t exponent() const { return exponent_; }
  const LineOrder& order() const { return order_; }

  /// Degree-0 part is trivial. Throws UnknownOrder for symbolic classes
  /// whose order is not known.
  bool degree_zero_part_trivial() const;
  /// Order of the degree-0 part (Finite 1 when trivial).
  LineOrder degree_zero_order() const;

  LineClass operator*(const LineClass& rhs) const;  // tensor product
  LineClass pow(std::int64_t e) const;
  LineClass inverse() const { return pow(-1); }
  LineClass degree_zero_part() const;

  bool operator==(const LineClass& rhs) const;
  bool operator<(const LineClass& rhs) const;
  std::string to_string() const;

 private:
  void normalize();

  Kind kind_ = Kind::Trivial;
  std::optional<CurvePoint> point_;
  std::string name_;
  std::int64_t exponent_ = 0;
  LineOrder order_ = LineOrder::finite(1);
  std::int64_t shift_ = 0;
};

/// One indecomposable summand: Line, E_{r,0} or E_Q, twisted by a line class.
struct Summand {
  enum class Shape { Line, Atiyah, ExtQ };
  Shape shape = Shape::Line;
  int rank_param = 1;  // r for Atiyah
  LineClass q;         // O(Q) for ExtQ (degree 1)
  LineClass twist;

  int rank() const;
  std::int64_t degree() const;
  bool operator==(const Summand& rhs) const;
  bool operator<(const Summand& rhs) const;
  std::string to_string() const;
};

class BundleExpr {
 public:
  BundleExpr() = default;
  explicit BundleExpr(std::vector<Summand> summands);

  static BundleExpr structure_sheaf() { return line(LineClass::trivial()); }
  static BundleExpr line(const LineClass& l);
  static BundleExpr atiyah(int r);
  static BundleExpr ext_q(const LineClass& q);
  static BundleExpr ext_q(const CurvePoint& q);
  /// O (+) L.
  static BundleExpr split(const LineClass& l);

  const std::vector<Summand>& summands() const { return summands_; }
  BundleExpr operator+(const BundleExpr& rhs) const;  // direct sum
  BundleExpr tensor(const LineClass& l) const;
  BundleExpr dual() const;

  bool operator==(const BundleExpr& rhs) const { return summands_ == rhs.summands_; }
  std::string to_string() const;

 private:
  void normalize();
  std::vector<Summand> summands_;
};

struct RankDegree {
  int rank = 0;
  std::int64_t degree = 0;
  bool operator==(const RankDegree&) const = default;
};

struct Cohomology {
  std::int64_t h0 = 0;
  std::int64_t h1 = 0;
  bool operator==(const Cohomology&) const = default;
};

RankDegree rank_deg(const BundleExpr& b);
Cohomology cohomology(const BundleExpr& b);

/// Sym^m for O (+) L shapes (any two line summands) and line twists of E_{2,0}.
/// `p` is the characteristic (0 allowed).
BundleExpr sym_power(const BundleExpr& b, int m, std::uint32_t p);

/// Which clause of the pullback rules fired for each summand.
struct PullbackResult {
  BundleExpr bundle;
  std::vector<std::string> rules;
};

/// phi^* B for B on phi.codomain().
PullbackResult pullback(const BundleExpr& b, const Isogeny& phi);
/// phi^* of a single line class, by divisor arithmetic.
LineClass pullback_line(const LineClass& l, const Isogeny& phi);

struct PushforwardResult {
  BundleExpr bundle;
  bool extrapolated = false;  // composite separable-dual case
};

PushforwardResult pushforward_structure(const Isogeny& phi);

/// Isogeny phi: F -> E of degree ord(P) with phi^* O(P - O) trivial.
Isogeny kill_torsion_line(const Curve& e, const CurvePoint& p);

}  // namespace ruledfib
