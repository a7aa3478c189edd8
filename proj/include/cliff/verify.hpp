#pragma once

#include <string>
#include <vector>

namespace cliff {

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct VerifyReport {
    std::vector<CheckResult> checks;
    std::vector<std::string> artifacts;  // paths written
    bool all_pass() const;
    std::string text() const;  // one "PASS|FAIL name: detail" line per check
};

// Invariant suite on the (2,3,1,6) reference config plus a coarse doubled-surface mesh; `full` adds the
// configuration sweep, the three-point solve and finer meshes. Artifacts are written to output_dir.
VerifyReport run_verify(bool full, const std::string& output_dir);

}  // namespace cliff
