// runner.hpp — task orchestration: runs one configured experiment and writes
// its CSV/JSON outputs plus the run manifest.

#pragma once

#include <string>

#include "dressim/config.hpp"

namespace dressim {

struct RunRequest {
    ExperimentConfig cfg;      // overrides (seed, output_dir, task) already applied
    std::string config_text;   // raw file content, hashed into the manifest
    int threads = 1;
};

// Returns 0 on success, 1 when the validate task reports a failed check.
// Config/capacity/numerical problems surface as exceptions.
int run_experiment(const RunRequest& request);

} // namespace dressim
