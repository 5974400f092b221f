#include "ruledfib/fiber_arithmetic.hpp"

#include <algorithm>
#include <functional>
#include <numeric>

#include "ruledfib/error.hpp"
#include "ruledfib/finite_field.hpp"

namespace ruledfib {

std::string MultipleFiber::to_string() const {
  return std::to_string(a) + "/" + std::to_string(m) + (wild ? "*" : "");
}

void FiberConfig::normalize() { std::sort(fibers.begin(), fibers.end()); }

std::string FiberConfig::to_string() const {
  std::string out = "d=" + std::to_string(d) + " (";
  for (std::size_t i = 0; i < fibers.size(); ++i) out += (i ? ", " : "") + fibers[i].to_string();
  return out + ")";
}

namespace {

bool power_of(std::int64_t q, std::uint32_t p) {
  if (q < 1) return false;
  if (p == 0) return q == 1;
  while (q % p == 0) q /= p;
  return q == 1;
}

void fiber_violations(const MultipleFiber& f, std::uint32_t p, const std::optional<Reduction>& red,
                      std::vector<Violation>& out) {
  const std::string who = "fiber " + f.to_string();
  if (f.m < 2) out.push_back({"multiplicity-at-least-two", who});
  if (f.a < 0 || f.a > f.m - 1) out.push_back({"coefficient-range", who + ": need 0 <= a <= m-1"});
  if (!f.wild && f.a != f.m - 1) out.push_back({"tame-coefficient", who + ": tame fibers have a = m-1"});
  if (f.nu < 1 || f.m % f.nu != 0 || !power_of(f.m / f.nu, p)) {
    out.push_back({"multiplicity-factorization", who + ": m must be p^alpha * nu"});
  }
  if ((f.nu == f.m) == f.wild) out.push_back({"tame-iff-nu-equals-m", who});
  if (red == Reduction::Supersingular && p > 0 && f.wild == (f.m % p != 0)) {
    out.push_back({"supersingular-tameness", who + ": on a supersingular fiber, tame iff p does not divide m"});
  }
  if (f.a + 1 != f.m && f.a + f.nu + 1 != f.m) {
    out.push_back({"coefficient-relation", who + ": need a+1 = m or a+nu+1 = m"});
  }
}

// Exact comparison sum a_i/m_i < bound.
bool sum_below(const std::vector<MultipleFiber>& fs, std::int64_t bound) {
  std::int64_t num = 0, den = 1;
  for (const auto& f : fs) {
    if (f.m <= 0) return false;
    const std::int64_t l = std::lcm(den, f.m);
    num = num * (l / den) + f.a * (l / f.m);
    den = l;
    const std::int64_t g = std::gcd(num, den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
  }
  return num < bound * den;
}

}  // namespace

std::vector<Violation> validate_config(const FiberConfig& c) {
  std::vector<Violation> out;
  if (c.d != 0 && c.d != -1) out.push_back({"degree-range", "d must be 0 or -1"});
  if (c.p != 0 && !is_prime(c.p)) out.push_back({"characteristic", std::to_string(c.p) + " is not prime"});
  if (c.p == 0 && c.reduction && *c.reduction != Reduction::NotApplicable) {
    out.push_back({"characteristic", "reduction type given in characteristic 0"});
  }
  for (const auto& f : c.fibers) fiber_violations(f, c.p, c.reduction, out);
  if (!sum_below(c.fibers, 2 + c.d)) out.push_back({"canonical-sum-bound", "need sum a_i/m_i < 2 + d"});
  const auto wild = std::count_if(c.fibers.begin(), c.fibers.end(), [](const auto& f) { return f.wild; });
  if (wild != c.h0_torsion()) {
    out.push_back({"wild-count", std::to_string(wild) + " wild fibers but h0 of the torsion part is " +
                                     std::to_string(c.h0_torsion())});
  }
  return out;
}

KuResult ku_feasible(const std::vector<std::pair<std::int64_t, std::int64_t>>& types) {
  if (types.empty()) throw Error(ErrorKind::EmptyInput, "no fiber types given");
  std::int64_t l = 1;
  for (const auto& [m, nu] : types) {
    if (m < 1 || nu < 1 || nu > m) {
      throw Error(ErrorKind::InvalidInput, "need 1 <= nu <= m, got (" + std::to_string(m) + ", " + std::to_string(nu) + ")");
    }
    l = std::lcm(l, m);
    if (l > 10'000'000) throw Error(ErrorKind::InvalidInput, "lcm of multiplicities too large");
  }
  const std::size_t n = types.size();
  KuResult res;
  res.feasible = true;
  for (std::size_t i = 0; i < n; ++i) {
    // choice[j][s]: residue n_j used to reach state s after step j, or -1.
    std::vector<std::vector<std::int32_t>> choice(n, std::vector<std::int32_t>(static_cast<std::size_t>(l), -1));
    std::vector<char> cur(static_cast<std::size_t>(l), 0);
    cur[0] = 1;
    for (std::size_t j = 0; j < n; ++j) {
      const auto [m, nu] = types[j];
      const std::int64_t step = l / m;
      std::vector<char> next(static_cast<std::size_t>(l), 0);
      for (std::int64_t s = 0; s < l; ++s) {
        if (!cur[s]) continue;
        for (std::int64_t r = 0; r < m; ++r) {
          if (j == i && r % nu != 1 % nu) continue;
          const std::int64_t t = (s + r * step) % l;
          if (!next[t]) {
            next[t] = 1;
            choice[j][t] = static_cast<std::int32_t>(r);
          }
        }
      }
      cur.swap(next);
    }
    KuIndexResult ir;
    ir.feasible = cur[0] != 0;
    if (ir.feasible) {
      ir.witness.assign(n, 0);
      std::int64_t s = 0;
      for (std::size_t j = n; j-- > 0;) {
        const std::int64_t r = choice[j][s];
        ir.witness[j] = r;
        s = ((s - r * (l / types[j].first)) % l + l) % l;
      }
    }
    res.feasible = res.feasible && ir.feasible;
    res.per_index.push_back(std::move(ir));
  }
  return res;
}

std::string family_of(const FiberConfig& c) {
  const auto& fs = c.fibers;
  auto all_tame = std::none_of(fs.begin(), fs.end(), [](const auto& f) { return f.wild; });
  if (c.d == 0 && all_tame) {
    if (fs.empty()) return "I";
    if (fs.size() == 2 && fs[0].m == fs[1].m) return "II";
    if (fs.size() == 3 && std::all_of(fs.begin(), fs.end(), [](const auto& f) { return f.m == 2; })) return "III";
  }
  if (c.d == -1) {
    if (fs.size() == 1 && fs[0].wild && fs[0].nu == 1 && power_of(fs[0].m, c.p) && c.p > 0) {
      if (fs[0].a == fs[0].m - 1) return "IV";
      if (fs[0].a == fs[0].m - 2) return "V";
    }
    if (fs.size() == 2 && c.p == 2) {
      FiberConfig s = c;
      s.normalize();
      if (s.fibers[0] == MultipleFiber{2, 0, 1, true} && s.fibers[1] == MultipleFiber::tame(2)) return "VI";
    }
  }
  return "unclassified";
}

Enumeration enumerate_configs(int d, std::uint32_t p, std::int64_t max_m) {
  if (d != 0 && d != -1) throw Error(ErrorKind::OutOfScope, "only d = 0 and d = -1 are enumerated");
  if (max_m < 2) throw Error(ErrorKind::InvalidInput, "max multiplicity must be >= 2");
  if (p != 0 && !is_prime(p)) throw Error(ErrorKind::NonPrime, std::to_string(p) + " is not prime");

  // Single fibers that pass every per-fiber constraint.
  std::vector<MultipleFiber> tame, wild;
  for (std::int64_t m = 2; m <= max_m; ++m) {
    for (std::int64_t nu = 1; nu <= m; ++nu) {
      if (m % nu) continue;
      for (std::int64_t a = 0; a < m; ++a) {
        MultipleFiber f{m, a, nu, nu != m};
        std::vector<Violation> v;
        fiber_violations(f, p, std::nullopt, v);
        if (!v.empty()) continue;
        (f.wild ? wild : tame).push_back(f);
      }
    }
  }

  const int wild_needed = -d;
  const std::int64_t bound = 2 + d;
  std::vector<FiberConfig> found;
  std::vector<MultipleFiber> chosen;

  auto emit = [&] {
    FiberConfig c{d, p, chosen, std::nullopt};
    c.normalize();
    if (!validate_config(c).empty()) return;
    if (!c.fibers.empty()) {
      std::vector<std::pair<std::int64_t, std::int64_t>> types;
      for (const auto& f : c.fibers) types.emplace_back(f.m, f.nu);
      if (!ku_feasible(types).feasible) return;
    }
    found.push_back(c);
  };

  // Tame fibers in nondecreasing order; each contributes at least 1/2 to the sum.
  std::function<void(std::size_t)> add_tame = [&](std::size_t start) {
    emit();
    for (std::size_t k = start; k < tame.size(); ++k) {
      chosen.push_back(tame[k]);
      if (sum_below(chosen, bound)) add_tame(k);
      chosen.pop_back();
    }
  };

  if (wild_needed == 0) {
    add_tame(0);
  } else {
    for (const auto& w : wild) {
      chosen = {w};
      if (sum_below(chosen, bound)) add_tame(0);
    }
  }

  static const std::vector<std::string> order = {"I", "II", "III", "IV", "V", "VI", "unclassified"};
  Enumeration out{d, p, max_m, {}};
  for (const auto& id : order) {
    Family fam{id, {}};
    for (const auto& c : found)
      if (family_of(c) == id) fam.members.push_back(c);
    if (!fam.members.empty()) out.families.push_back(std::move(fam));
  }
  return out;
}

std::int64_t kodaira_coefficient(const FiberConfig& c) {
  std::int64_t m = 1, sum_a = 0;
  if (!c.fibers.empty()) m = c.fibers[0].m;
  for (const auto& f : c.fibers) {
    if (f.m != m) throw Error(ErrorKind::MixedMultiplicities, "fibers do not share one multiplicity");
    sum_a += f.a;
  }
  return (-2 - c.d) * m + sum_a;
}

}  // namespace ruledfib
