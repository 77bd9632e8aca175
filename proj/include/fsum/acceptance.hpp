#pragma once

#include <string>
#include <vector>

namespace fsum {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;
    double seconds = 0.0;
};

/// Runs the built-in validation suite. threads = 0 selects the hardware
/// concurrency; the numeric results are identical for any thread count.
std::vector<CriterionResult> run_acceptance(int threads = 0);

bool all_passed(const std::vector<CriterionResult>& results);

} // namespace fsum
