#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace stiefel::cli {

struct SuiteResult {
  std::string name;
  bool passed;
  double worst;      // largest observed error
  double tolerance;  // after tol_scale
  double seconds;
};

/// Runs every invariant suite; each tolerance is multiplied by tol_scale.
std::vector<SuiteResult> run_verify(std::uint64_t seed, double tol_scale = 1.0);

/// One PASS/FAIL line per suite; returns true if all passed.
bool report(const std::vector<SuiteResult> &results, std::ostream &os);

}  // namespace stiefel::cli
