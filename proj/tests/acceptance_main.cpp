#include <iostream>

#include "ruledfib/acceptance.hpp"

int main() {
  bool ok = true;
  for (const auto& r : ruledfib::run_acceptance()) {
    std::cout << ruledfib::format_criterion(r) << std::endl;
    ok &= r.pass;
  }
  return ok ? 0 : 1;
}
