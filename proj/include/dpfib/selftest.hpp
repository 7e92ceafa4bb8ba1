#pragma once

#include <string>
#include <vector>

namespace dpfib {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  double seconds = 0.0;
  std::string detail;
};

// The acceptance suite: each criterion prints one line through the
// caller.  `heavy` enables the long pipeline batches (criterion 8).
std::vector<CriterionResult> run_acceptance(bool heavy = true);

int print_acceptance(const std::vector<CriterionResult>& results);  // returns #failures

}  // namespace dpfib
