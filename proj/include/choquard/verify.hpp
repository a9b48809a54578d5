#pragma once

// Identity battery on a stored ground state.

#include <string>
#include <vector>

#include "choquard/io.hpp"

namespace choquard {

struct CheckResult {
  std::string group;  ///< selection name: residual, mass, pohozaev, decay, ift, rearrangement
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;
  /// value <= tolerance, or value >= tolerance for lower bounds (e.g. r^2)
  bool lower_bound = false;
  bool pass = false;
  std::string note;
};

/// Selectable groups in run order.
const std::vector<std::string>& check_groups();

/// Throws DomainError on an unknown group name. Empty selection runs every group.
/// The ift group runs its operator identities only at p = 2; the dilation identity runs at every p.
std::vector<CheckResult> run_checks(const GroundState& gs, const std::vector<std::string>& groups,
                                    const LabConfig& cfg);

bool all_pass(const std::vector<CheckResult>& checks);

Json to_json(const std::vector<CheckResult>& checks);

/// One line per check: PASS/FAIL, name, value, tolerance.
std::string format_checks(const std::vector<CheckResult>& checks);

}  // namespace choquard
