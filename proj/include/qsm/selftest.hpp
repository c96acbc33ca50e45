#pragma once
// Built-in verification suite: reproduces the pinned worked-example oracles,
// runs the structural property checks (squared differentials, algebraic
// identities, oracle equivalences, sign-convention guard, parser round-trip,
// deterministic serialization), and reports one line per check.

#include <string>
#include <vector>

namespace qsm {

struct SelftestOutcome {
  std::vector<std::string> lines;  // "ok   name — detail" / "FAIL ..." / "SKIP ..."
  int failures = 0;
  int skipped = 0;
  bool ok() const { return failures == 0; }
};

// cap_override = 0 runs every check at its default truncation; a positive
// value replaces the default, and checks whose minimum truncation exceeds the
// override are skipped with a warning line instead of failing.
SelftestOutcome run_selftest(int cap_override = 0);

}  // namespace qsm
