// Batch execution of experiment configs. The parallel path fans the
// (config, replication) grid out with OpenMP; the serial path is the
// reference it is checked and benchmarked against. Rows come back in
// deterministic grid order either way.
#pragma once

#include <vector>

#include "d2dsim/experiment.hpp"

namespace d2d {

std::vector<RowRecord> run_batch_serial(
    const std::vector<ExperimentConfig>& configs);

// threads = 0 picks the OpenMP default; threads = 1 runs the serial path.
std::vector<RowRecord> run_batch(const std::vector<ExperimentConfig>& configs,
                                 int threads = 0);

}  // namespace d2d
