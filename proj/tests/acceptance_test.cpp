// Runs every acceptance check at full size and prints one line per check.
// Exit status is nonzero when any check fails or exceeds its budget.

#include <iostream>

#include "calcert/selftest.hpp"

int main() {
    const calcert::SelftestOptions opts;
    int failures = 0;
    for (const auto &check : calcert::acceptance_checks()) {
        const calcert::CheckResult r = calcert::run_check(check, opts);
        std::cout << calcert::format_check_line(r) << std::endl;
        if (!r.passed) {
            ++failures;
        }
    }
    std::cout << (calcert::acceptance_checks().size() - static_cast<std::size_t>(failures)) << '/'
              << calcert::acceptance_checks().size() << " acceptance checks passed" << std::endl;
    return failures == 0 ? 0 : 1;
}
