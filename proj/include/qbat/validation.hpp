// Invariant checks run by `qbat validate`.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qbat/scenarios.hpp"

namespace qbat {

struct CheckOutcome {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct ValidationOptions {
  std::uint64_t seed = 20251018;
  std::size_t random_states = 10000;
  /// Horizon for the trace-drift and positivity check, in units of 1/g.
  double drift_horizon = 50.0;
};

/// State-level identities on random states plus dynamics invariants over the
/// given scenarios (sweep presets are skipped).
std::vector<CheckOutcome> run_invariant_suite(const std::vector<ScenarioSpec>& scenarios,
                                              const ValidationOptions& options);

}  // namespace qbat
