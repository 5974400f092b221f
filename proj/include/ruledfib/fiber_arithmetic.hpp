#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ruledfib/reduction.hpp"

namespace ruledfib {

/// A multiple fiber mD: multiplicity m, canonical-formula coefficient a,
/// nu = order of the normal bundle O_D(D), and the wild flag.
struct MultipleFiber {
  std::int64_t m = 2;
  std::int64_t a = 1;
  std::int64_t nu = 2;
  bool wild = false;

  static MultipleFiber tame(std::int64_t m) { return {m, m - 1, m, false}; }
  bool strange_type() const { return wild && a == m - 1; }

  auto operator<=>(const MultipleFiber&) const = default;
  bool operator==(const MultipleFiber&) const = default;
  /// "a/m", with a trailing '*' when wild.
  std::string to_string() const;
};

/// Multiple-fiber data of an elliptic fibration S -> P^1 with chi(O_S) = 0.
struct FiberConfig {
  int d = 0;                       // deg of the line-bundle part of R^1 pi_* O_S
  std::uint32_t p = 0;
  std::vector<MultipleFiber> fibers;
  std::optional<Reduction> reduction;  // of the fibers' elliptic curve, when known

  /// h^0 of the torsion part: -d - chi with chi = 0.
  int h0_torsion() const { return -d; }
  std::size_t lambda() const { return fibers.size(); }
  /// Sorts fibers by (m, a, nu, wild).
  void normalize();
  std::string to_string() const;
  bool operator==(const FiberConfig&) const = default;
};

struct Violation {
  std::string name;
  std::string detail;
};

/// Every constraint checked; an empty result means the configuration is valid.
std::vector<Violation> validate_config(const FiberConfig& c);

struct KuIndexResult {
  bool feasible = false;
  std::vector<std::int64_t> witness;  // residues n_j mod m_j
};

struct KuResult {
  bool feasible = false;  // every distinguished index feasible
  std::vector<KuIndexResult> per_index;
};

/// For each i: do residues n_j mod m_j exist with n_i = 1 mod nu_i and
/// sum n_j / m_j integral? Input pairs are (m, nu).
KuResult ku_feasible(const std::vector<std::pair<std::int64_t, std::int64_t>>& types);

struct Family {
  std::string id;  // "I" ... "VI", or "unclassified"
  std::vector<FiberConfig> members;
};

struct Enumeration {
  int d = 0;
  std::uint32_t p = 0;
  std::int64_t max_m = 0;
  std::vector<Family> families;  // in order I..VI, then unclassified
};

/// Family label of a valid configuration, or "unclassified".
std::string family_of(const FiberConfig& c);

/// All valid, feasible configurations with multiplicities <= max_m, grouped by family.
Enumeration enumerate_configs(int d, std::uint32_t p, std::int64_t max_m);

/// (-2 - d) m + sum a_i, all fibers sharing m (m = 1 when there are none).
std::int64_t kodaira_coefficient(const FiberConfig& c);

}  // namespace ruledfib
