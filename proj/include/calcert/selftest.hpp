#pragma once

// Acceptance checks shared by the acceptance test binary and the
// `selftest` command. Each check has a pinned runtime budget; a check
// passes only when its numerical conditions hold and it finishes in time.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "calcert/criteria.hpp"

namespace calcert {

struct SelftestOptions {
    /// Subsampled run (100 seeds for the soundness sweep).
    bool quick = false;
    std::uint64_t seed = 20240611;
    CriteriaOptions criteria;
};

struct CheckResult {
    std::string id;
    std::string title;
    bool passed = false;
    std::string detail;
    double seconds = 0.0;
    double budget_seconds = 0.0;
};

struct AcceptanceCheck {
    std::string id;
    std::string title;
    double budget_seconds;
    /// Returns pass/fail of the numerical conditions and a detail string.
    std::function<bool(const SelftestOptions &, std::string &detail)> body;
};

const std::vector<AcceptanceCheck> &acceptance_checks();

/// Runs one check, timing it and folding the budget into `passed`.
CheckResult run_check(const AcceptanceCheck &check, const SelftestOptions &opts);

std::vector<CheckResult> run_all_checks(const SelftestOptions &opts);

/// "AC3 PASS  <title>  [1.234 s / 60 s]  <detail>"
std::string format_check_line(const CheckResult &r);

}  // namespace calcert
