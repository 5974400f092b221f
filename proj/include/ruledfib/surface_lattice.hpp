#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace ruledfib {

/// Numerical class c0*C0 + f*F on a ruled surface over an elliptic curve with
/// invariant e, where C0^2 = -e, C0.F = 1, F^2 = 0.
struct SurfaceClass {
  std::int64_t c0 = 0;
  std::int64_t f = 0;
  int e = 0;

  static SurfaceClass section(int e) { return {1, 0, e}; }
  static SurfaceClass ruling_fiber(int e) { return {0, 1, e}; }
  /// K_S = -2 C0 - e F.
  static SurfaceClass canonical(int e) { return {-2, -e, e}; }

  SurfaceClass operator+(const SurfaceClass& rhs) const;
  SurfaceClass operator-(const SurfaceClass& rhs) const;
  SurfaceClass operator*(std::int64_t k) const { return {c0 * k, f * k, e}; }
  bool operator==(const SurfaceClass&) const = default;
  std::string to_string() const;
};

std::int64_t intersect(const SurfaceClass& x, const SurfaceClass& y);

bool minus_K_nef(int e);

struct MenuEntry {
  std::string name;         // "O+L", "E20", "EQ"
  std::string description;
};

/// Normalized rank-2 bundles with the given e (only e = 0, -1).
std::vector<MenuEntry> normalized_bundle_menu(int e, std::uint32_t p);

/// Reduced multiple-fiber class D of an elliptic fibration on the surface,
/// numerically K_S / c with c the canonical coefficient (-2 for e = 0, -1 for e = -1).
SurfaceClass reduced_fiber_class(int e);

/// Pullback along the degree-n base change S' -> S induced by an isogeny
/// onto the base, where S' has invariant e_upper. F pulls back to n F';
/// the section C0 pulls back to a section C0' + b F' with
/// -n e = -e_upper + 2 b.
SurfaceClass base_change_pullback(const SurfaceClass& x, std::int64_t n, int e_upper);

}  // namespace ruledfib
