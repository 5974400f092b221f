#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ruledfib/bundle.hpp"
#include "ruledfib/fiber_arithmetic.hpp"

namespace ruledfib {

/// Fiber m'D' of the upper fibration over a preimage Q' of a base point.
struct UpperFiber {
  int e = 1;                    // ramification index of psi at Q'
  int m = 1;                    // multiplicity m'
  bool wild = false;
  int restriction_degree = 1;   // deg of q restricted to D' -> D
  bool restriction_separable = true;
};

/// Fiber mD of the lower fibration over a base point Q, and what lies above it.
struct BaseFiber {
  std::string label;
  int m = 1;
  int a = 0;
  bool wild = false;
  std::vector<UpperFiber> above;
};

struct BranchPoint {
  std::string label;
  int e = 1;
  int contribution = 0;  // length of the ramification divisor at the point
};

/// The finite map psi between the bases.
struct PsiData {
  int degree = 1;
  bool separable = true;
  std::uint32_t p = 0;
  std::vector<BranchPoint> branch;
};

/// One commutative square: F -> E (phi), S' -> S (q), P^1 -> P^1 (psi).
struct CoverStage {
  std::string lower_surface;
  std::string upper_surface;
  int e_lower = 0;
  int e_upper = 0;
  std::string phi;  // description of the concrete isogeny
  int deg_phi = 1;
  bool phi_separable = true;
  int deg_q = 1;
  PsiData psi;
  std::vector<BaseFiber> fibers;
  std::string pulled_back_bundle;  // computed phi^* of the lower bundle
  std::vector<std::string> notes;
};

/// A tower of squares; the last stage's upper surface is F x P^1.
struct CoverDiagram {
  std::string case_id;
  std::uint32_t p = 0;
  Reduction reduction = Reduction::NotApplicable;
  int extension_degree = 1;  // field extension used for the concrete data
  std::vector<CoverStage> stages;
};

/// Multiplicity accounting across one square; empty when consistent.
std::vector<Violation> check_accounting(const CoverStage& s);

enum class Wildness { Tame, Wild, Undetermined };
std::string_view wildness_name(Wildness w);

/// Conclusion of the degree-2 transfer rules at one base point.
Wildness wildness_transfer(const CoverStage& s, std::size_t base_index);

/// Hurwitz count for a separable psi: P^1 -> P^1 of degree n: total
/// contribution 2n - 2, tame points contribute e - 1, wild points
/// (p | e) at least e. Degree 2 reduces to: two tame points when p != 2,
/// one point of contribution 2 when p = 2.
bool hurwitz_check(const PsiData& psi);

/// The surface pullback D -> q^* D carries the reduced fiber class of an
/// e = -1 surface to twice the reduced fiber class upstairs.
bool two_dd_holds(const CoverStage& s);

struct CaseData {
  Curve curve;
  std::optional<CurvePoint> point;  // L = O(P - O) for i-2, Q for ii-*
};

/// Resolution tower for rows i-2, i-5, ii-1, ii-2, ii-3. Points that are
/// not rational are searched for over extensions of degree <= max_extension
/// (the degree used is recorded); with the default 1 NeedsExtension propagates.
CoverDiagram build_resolution(const std::string& case_id, const CaseData& data, int max_extension = 1);

struct DiagramCheck {
  std::string name;
  bool pass = false;
  std::string detail;
};

/// Every check on a built diagram: accounting per stage, Hurwitz where
/// psi is separable, wildness consistency, 2DD for e = -1 stages, product top.
std::vector<DiagramCheck> verify_diagram(const CoverDiagram& d);

}  // namespace ruledfib
