#pragma once

// The acceptance suite: fourteen numbered checks, shared by the `verify`
// subcommand and the acceptance test binary.

#include <functional>
#include <string>
#include <vector>

namespace uqr {

struct CriterionResult {
    int id = 0;
    std::string title;
    bool passed = false;
    std::string detail;
    double seconds = 0.0;
};

/// Runs every criterion in order; `on_result` (if set) is called as each one
/// finishes. Exceptions inside a criterion are reported as failures.
std::vector<CriterionResult> run_acceptance(const std::function<void(const CriterionResult&)>& on_result = {});

/// "[PASS] 7 moran solver (0.01 s): detail"
std::string format_result(const CriterionResult& r);

}  // namespace uqr
