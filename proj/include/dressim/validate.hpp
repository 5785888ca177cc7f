// validate.hpp — self-check suite: runs every module invariant against the
// configured model and ensemble and reports machine-readable pass/fail lines.

#pragma once

#include <string>
#include <vector>

#include "dressim/config.hpp"

namespace dressim {

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

// Executes the invariant checks at the configured sizes. Failures are results,
// not exceptions; only malformed configs throw.
std::vector<CheckResult> run_validation_suite(const ExperimentConfig& cfg, int threads = 1);

bool all_passed(const std::vector<CheckResult>& results);

} // namespace dressim
