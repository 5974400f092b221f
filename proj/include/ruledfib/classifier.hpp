#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ruledfib/bundle.hpp"
#include "ruledfib/error.hpp"
#include "ruledfib/fiber_arithmetic.hpp"

namespace ruledfib {

/// Normalized rank-2 shapes: O (+) L (e = 0), E_{2,0} (e = 0), E_Q (e = -1).
enum class BundleShape { Decomposable, Atiyah, ExtQ };
std::string_view shape_name(BundleShape s);

struct ClassificationInput {
  BundleShape shape = BundleShape::Decomposable;
  std::optional<Curve> curve;        // concrete mode
  SymbolicCurve symbolic;            // used when curve is empty
  std::optional<CurvePoint> point;   // P with L = O(P - O), or Q
  std::optional<LineOrder> order;    // ord L when no point is given
  int max_extension = kDefaultExtensionBound;

  std::uint32_t p() const;
  Reduction reduction() const;
  int e() const { return shape == BundleShape::ExtQ ? -1 : 0; }
  /// Throws InvalidInput / CharZero / MixedCurves on inconsistent data.
  void validate() const;
};

struct TraceStep {
  std::string rule;
  std::string detail;
};

struct ClassificationResult {
  bool has_fibration = false;
  std::string row_id;
  int e = 0;
  int d = 0;
  std::vector<MultipleFiber> fibers;  // sorted
  std::vector<TraceStep> trace;
  bool symbolic_mode = false;
  /// Set to UnreachableOverField when the answer is the symbolic one because
  /// the requested data is not realizable over the given field.
  std::optional<ErrorKind> status;

  bool strange_type() const;
  /// has_fibration, row and fibers (a, m, wild) agree.
  bool same_answer(const ClassificationResult& o) const;
};

ClassificationResult classify(const ClassificationInput& in);
ClassificationResult table_lookup(const ClassificationInput& in);
bool cross_check(const ClassificationInput& in);

/// Point of exact order m on some extension of degree <= bound with at most
/// kEnumerationFieldCap elements, if any.
struct OrderedPoint {
  CurveExtension extension;
  CurvePoint point;
};
std::optional<OrderedPoint> find_point_of_order(const Curve& e, std::uint64_t m, int bound);

}  // namespace ruledfib
