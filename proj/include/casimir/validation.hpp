#pragma once

#include <string>
#include <vector>

namespace casimir::validation {

struct CheckResult {
    std::string name;
    bool passed = false;
    double observed = 0.0;   // measured residual / quantity
    double threshold = 0.0;  // bound it is held against
    std::string detail;
};

/// Full acceptance suite; one entry per criterion, in order.
std::vector<CheckResult> run_acceptance();

/// Fast subset used by the `validate` CLI command.
std::vector<CheckResult> run_quick();

/// Pretty one-line-per-check report; returns the number of failures.
int report(const std::vector<CheckResult>& results, std::ostream& out);

}  // namespace casimir::validation
