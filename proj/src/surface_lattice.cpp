#include "ruledfib/surface_lattice.hpp"

#include "ruledfib/error.hpp"

namespace ruledfib {

namespace {

void same_surface(const SurfaceClass& x, const SurfaceClass& y) {
  if (x.e != y.e) {
    throw Error(ErrorKind::MixedSurfaces,
                "classes live on surfaces with e = " + std::to_string(x.e) + " and e = " + std::to_string(y.e));
  }
}

void check_scope(int e) {
  if (e != 0 && e != -1) throw Error(ErrorKind::OutOfScope, "only e = 0 and e = -1 are modeled, got " + std::to_string(e));
}

}  // namespace

SurfaceClass SurfaceClass::operator+(const SurfaceClass& rhs) const {
  same_surface(*this, rhs);
  return {c0 + rhs.c0, f + rhs.f, e};
}

SurfaceClass SurfaceClass::operator-(const SurfaceClass& rhs) const {
  same_surface(*this, rhs);
  return {c0 - rhs.c0, f - rhs.f, e};
}

std::string SurfaceClass::to_string() const {
  return std::to_string(c0) + " C0 + " + std::to_string(f) + " F (e = " + std::to_string(e) + ")";
}

std::int64_t intersect(const SurfaceClass& x, const SurfaceClass& y) {
  same_surface(x, y);
  return -static_cast<std::int64_t>(x.e) * x.c0 * y.c0 + x.c0 * y.f + x.f * y.c0;
}

bool minus_K_nef(int e) { return e == 0 || e == -1; }

std::vector<MenuEntry> normalized_bundle_menu(int e, std::uint32_t p) {
  check_scope(e);
  (void)p;
  if (e == 0) {
    return {{"O+L", "O + L with L of degree 0"}, {"E20", "the nonsplit self-extension E_{2,0} of O"}};
  }
  return {{"EQ", "the nonsplit extension E_Q of O(Q) by O"}};
}

SurfaceClass reduced_fiber_class(int e) {
  check_scope(e);
  return e == 0 ? SurfaceClass{1, 0, 0} : SurfaceClass{2, -1, -1};
}

SurfaceClass base_change_pullback(const SurfaceClass& x, std::int64_t n, int e_upper) {
  if (n < 1) throw Error(ErrorKind::InvalidInput, "base change degree must be >= 1");
  const std::int64_t twice_b = e_upper - n * x.e;
  if (twice_b % 2 != 0) {
    throw Error(ErrorKind::InvalidInput, "no section class with self-intersection " + std::to_string(-n * x.e) +
                                             " on a surface with e = " + std::to_string(e_upper));
  }
  return {x.c0, x.c0 * (twice_b / 2) + n * x.f, e_upper};
}

}  // namespace ruledfib
