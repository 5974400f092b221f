#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ruledfib/elliptic_curve.hpp"

namespace ruledfib {

enum class IsogenyKind { Frobenius, Velu, Composite, Isomorphism };

std::string_view kind_name(IsogenyKind kind);

/// Change of coordinates x = u^2 x' + r, y = u^3 y' + s u^2 x' + t.
struct WeierstrassChange {
  FieldElement u, r, s, t;
};

class Isogeny {
 public:
  Isogeny() = default;

  const Curve& domain() const;
  const Curve& codomain() const;
  std::uint64_t degree() const;
  IsogenyKind kind() const;
  /// Rational points of the kernel, infinity included, sorted.
  const std::vector<CurvePoint>& kernel_points() const;
  bool separable() const;
  bool dual_separable() const;
  /// Power of p dividing the degree that comes from inseparability.
  std::uint64_t inseparable_degree() const;
  std::uint64_t separable_degree() const { return degree() / inseparable_degree(); }

  /// Steps in application order (a single-element list for non-composites).
  std::vector<Isogeny> steps() const;
  /// For Isomorphism kind.
  const WeierstrassChange& change() const;

  CurvePoint operator()(const CurvePoint& p) const;

  /// The same map over F_{q^j}.
  Isogeny base_change(const CurveExtension& domain_ext) const;

  std::string describe() const;

  struct Data;
  explicit Isogeny(std::shared_ptr<const Data> d) : data_(std::move(d)) {}

 private:
  std::shared_ptr<const Data> data_;
};

/// Fr: E -> E^(p), (x, y) -> (x^p, y^p).
Isogeny frobenius_isogeny(const Curve& e);

/// Frobenius whose codomain is exactly E: domain E^(p^{k-1}) over F_{p^k}.
Isogeny frobenius_onto(const Curve& e);

/// Separable quotient by <K>. K must be a rational point of E.
Isogeny velu_quotient(const Curve& e, const CurvePoint& generator);
/// Separable quotient by an explicit finite subgroup.
Isogeny velu_quotient_subgroup(const Curve& e, std::vector<CurvePoint> kernel);

Isogeny isomorphism(const Curve& e, const WeierstrassChange& c);
Isogeny identity_isogeny(const Curve& e);
/// Every isomorphism E -> E' defined over the common field.
std::vector<Isogeny> find_isomorphisms(const Curve& from, const Curve& to);

/// second o first.
Isogeny compose(const Isogeny& first, const Isogeny& second);

/// psi: codomain -> domain with psi o phi = [deg phi], built from Frobenius
/// steps, a Velu quotient and an isomorphism, then verified on enough points
/// to force equality. Throws NeedsExtension when the dual's kernel is not
/// rational over the current field.
Isogeny dual_isogeny(const Isogeny& phi, int bound = kDefaultExtensionBound);

struct Preimages {
  std::vector<CurvePoint> points;
  std::uint64_t multiplicity = 1;  // inseparable degree
};

/// All P with phi(P) = Q. Throws NeedsExtension with the least degree j at
/// which the full fiber becomes rational.
Preimages preimages(const Isogeny& phi, const CurvePoint& q, int bound = kDefaultExtensionBound);

/// Does psi o phi equal [n] on the domain of phi? Checked on rational points
/// of an extension with more than 4 n^2 points, which pins the isogeny down.
bool equals_multiplication(const Isogeny& phi, const Isogeny& psi, std::uint64_t n);

}  // namespace ruledfib
