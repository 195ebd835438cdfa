#pragma once

// Seeded self-check of the library's invariants, reported as JSON.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "exparc/spectral.hpp"

namespace exparc {

struct RunConfig {
  std::uint64_t seed = 42;
  /// Replaces the tolerance of every residual check. Threshold checks
  /// (convergence order, distinctness counts) keep their own limits.
  std::optional<double> tolerance;
  SupportPolicy policy;
  /// State files checked for schema validity.
  std::vector<std::string> fixtures;
};

struct CheckResult {
  std::string name;
  bool passed = false;
  double worstResidual = 0.0;
  double tolerance = 0.0;
  int samples = 0;
  /// Set when the check failed for a reason other than its residual.
  std::string detail;
};

struct VerifyReport {
  std::uint64_t seed = 0;
  std::vector<CheckResult> checks;

  bool passed() const;
  /// Deterministic body: no timing, fixed key order, shortest round-trip
  /// numbers.
  std::string to_json() const;
};

VerifyReport cmd_verify(const RunConfig& config);

}  // namespace exparc
