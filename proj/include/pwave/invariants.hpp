#pragma once

#include <string>
#include <vector>

#include "pwave/config.hpp"

namespace pwave {

struct InvariantResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Checks every structural property of the tables and pipeline on the
/// configured laser. With `inject_fault = monotone` the Y3 samples are
/// corrupted before the monotonicity check, which must then fail.
std::vector<InvariantResult> run_invariant_suite(const RunConfig& config);

}  // namespace pwave
