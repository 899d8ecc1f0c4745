#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace uscsim {

struct CheckResult {
  std::string name;
  double value;
  double threshold;
  bool passed;
  std::string detail;
};

struct ValidationOptions {
  /// Swap in a copy of the literal interaction-picture Hamiltonian with one sign flipped;
  /// the conjugation check must then fail.
  bool mutate_interaction_picture = false;
};

std::vector<CheckResult> run_validation(const ValidationOptions& options = {});

void print_report(const std::vector<CheckResult>& results, std::ostream& out);

}  // namespace uscsim
