#pragma once

#include <string_view>

namespace ruledfib {

enum class Reduction { Ordinary, Supersingular, NotApplicable };

inline std::string_view reduction_name(Reduction r) {
  switch (r) {
    case Reduction::Ordinary: return "ordinary";
    case Reduction::Supersingular: return "supersingular";
    case Reduction::NotApplicable: return "n/a";
  }
  return "n/a";
}

}  // namespace ruledfib
