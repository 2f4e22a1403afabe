#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace rdt::checks {

/// Deliberate defects used to confirm that the suite detects them.
enum class Fault {
  none,
  phi_support,  // outer edge of the dyadic profile pushed out by 1/0.9
  rate_sign,    // dynamics run with the linear-response rate against the affinity equilibrium
};

Fault parse_fault(const std::string& name);

struct CheckResult {
  std::string module;
  std::string name;
  bool pass = false;
  double measured = 0.0;
  double bound = 0.0;
  std::string detail;
};

struct CheckOptions {
  /// Empty runs every module.
  std::vector<std::string> modules;
  Fault fault = Fault::none;
};

inline const std::vector<std::string>& module_names() {
  static const std::vector<std::string> names{"spectral-core", "littlewood-paley", "thermo",
                                              "dynamics", "wellposedness-harness"};
  return names;
}

/// Throws Error(input) for an unknown module name.
std::vector<CheckResult> run_checks(const CheckOptions& options);

/// "PASS|FAIL module/name measured=... bound=... [detail]"
void print_result(std::ostream& os, const CheckResult& r);

}  // namespace rdt::checks
