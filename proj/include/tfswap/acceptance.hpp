#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "tfswap/config.hpp"
#include "tfswap/errors.hpp"

namespace tfswap {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
};

// Runs the numbered acceptance criteria (all when `only` is empty), printing
// one PASS/FAIL line per criterion as it completes.
std::vector<CriterionResult> run_acceptance(const SimConfig& c, const std::vector<int>& only, std::ostream& out);
bool all_passed(const std::vector<CriterionResult>& r);

}  // namespace tfswap
