// Acceptance suite: one [PASS]/[FAIL] line per criterion, exit 0 iff all
// pass.  Criteria run single-worker; the final criterion reruns everything
// at 8 workers and compares result digests bitwise.

#include <iostream>
#include <vector>

#include "wsp/acceptance.hpp"

int main() {
  int failures = 0;
  std::vector<wsp::CriterionOutcome> base;
  for (int k = 1; k <= wsp::acceptance_criteria_count(); ++k) {
    const wsp::CriterionOutcome o = wsp::run_criterion(k, 1);
    std::cout << (o.pass ? "[PASS] " : "[FAIL] ") << o.index << " " << o.name << " ("
              << o.detail << ")\n"
              << std::flush;
    if (!o.pass) ++failures;
    base.push_back(o);
  }
  const wsp::CriterionOutcome det = wsp::run_determinism(base, 8);
  std::cout << (det.pass ? "[PASS] " : "[FAIL] ") << det.index << " " << det.name << " ("
            << det.detail << ")\n";
  if (!det.pass) ++failures;

  if (failures != 0) {
    std::cout << failures << " criteria failed\n";
    return 1;
  }
  std::cout << "all 13 criteria passed\n";
  return 0;
}
