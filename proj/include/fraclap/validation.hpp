#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

// Cross-module identity checks behind `fraclap validate`.

namespace fraclap {

enum class ValidationLevel { quick, full };

/// Throws ParseError unless name is "quick" or "full".
ValidationLevel parse_validation_level(std::string_view name);

inline constexpr std::string_view kPowerZeroConvention =
    "(-Delta)^0 = identity (composition convention)";

struct CheckResult {
  std::string name;
  bool passed = false;
  double deviation = 0.0;  // largest observed deviation
  double tolerance = 0.0;
  std::string detail;
};

struct ValidationReport {
  ValidationLevel level = ValidationLevel::quick;
  std::vector<CheckResult> checks;

  bool all_passed() const noexcept;
};

struct ValidationOptions {
  ValidationLevel level = ValidationLevel::quick;
  /// Gamma used by the partial-sum check; empty means special::gamma.
  std::function<double(double)> gamma_fn;
};

ValidationReport run_validation(const ValidationOptions& options);

/// Fixed-width pass/fail table, convention line first.
void write_validation_report(std::ostream& out, const ValidationReport& report);

}  // namespace fraclap
