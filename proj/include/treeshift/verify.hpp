#ifndef TREESHIFT_VERIFY_HPP
#define TREESHIFT_VERIFY_HPP

#include <string>
#include <vector>

#include "treeshift/shift.hpp"

namespace treeshift {

// One internal-consistency check: the measured defect, the tolerance it was
// held to, and whether it passed. Checks that do not apply to the given
// weight system (for example identities requiring unit child sums) pass
// with a "skipped" note rather than failing.
struct CheckResult {
  std::string name;
  bool passed = false;
  double measure = 0.0;
  double tol = 0.0;
  std::string note;
};

struct VerifyReport {
  std::vector<CheckResult> checks;
  bool all_passed() const {
    for (const auto& c : checks) {
      if (!c.passed) return false;
    }
    return true;
  }
};

// Runs the full battery of structural and operator identities against one
// shift: tree invariants, adjoint pairing, norm submultiplicativity and the
// dense cross-check, evaluation identities, multiplier algebra, the
// renormalization round trip, and serialization. Exceptions inside a check
// fail that check with the message in its note.
VerifyReport run_verification(const ShiftOperator& S, const ExecPolicy& exec = {});

}  // namespace treeshift

#endif
