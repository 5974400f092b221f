#pragma once

#include <string>
#include <vector>

namespace ruledfib {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0;
};

/// Runs acceptance criteria 1-8 (or the listed subset) with their own oracles.
std::vector<CriterionResult> run_acceptance(const std::vector<int>& which = {});
/// "criterion N: PASS|FAIL  name  (detail)  [t s]"
std::string format_criterion(const CriterionResult& r);

}  // namespace ruledfib
