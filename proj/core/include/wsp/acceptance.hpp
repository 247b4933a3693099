#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace wsp {

struct CriterionOutcome {
  int index = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  std::uint64_t digest = 0;  ///< FNV-1a over the run's decisive doubles
};

/// Number of directly runnable criteria (the determinism check is extra).
int acceptance_criteria_count();

/// Runs criterion `index` (1-based) at the given worker count.  Exceptions
/// are captured into a failing outcome rather than thrown.
CriterionOutcome run_criterion(int index, int workers);

/// The determinism criterion: reruns every criterion at `workers` and
/// compares digests bitwise against `base` (the outcomes of a prior sweep).
CriterionOutcome run_determinism(const std::vector<CriterionOutcome>& base, int workers);

/// Full suite: criteria 1..12 at `workers`, then determinism at
/// `check_workers`.  Returns 13 outcomes in order.
std::vector<CriterionOutcome> run_acceptance(int workers = 1, int check_workers = 8);

}  // namespace wsp
