#include "d2dsim/runner.hpp"

#include <stdexcept>

namespace d2d {

namespace {

struct Task {
    int config_index = 0;
    int replication = 0;
};

std::vector<Task> expand(const std::vector<ExperimentConfig>& configs) {
    std::vector<Task> tasks;
    for (size_t c = 0; c < configs.size(); ++c) {
        validate_config(configs[c]);
        for (int r = 0; r < configs[c].replications; ++r) {
            tasks.push_back({static_cast<int>(c), r});
        }
    }
    return tasks;
}

}  // namespace

std::vector<RowRecord> run_batch_serial(
    const std::vector<ExperimentConfig>& configs) {
    std::vector<Task> tasks = expand(configs);
    std::vector<RowRecord> rows(tasks.size());
    for (size_t t = 0; t < tasks.size(); ++t) {
        rows[t] = run_replication(
            configs[static_cast<size_t>(tasks[t].config_index)],
            tasks[t].replication);
    }
    return rows;
}

std::vector<RowRecord> run_batch(const std::vector<ExperimentConfig>& configs,
                                 int threads) {
    if (threads < 0) throw std::invalid_argument("thread count must be >= 0");
    if (threads == 1) return run_batch_serial(configs);

    std::vector<Task> tasks = expand(configs);
    std::vector<RowRecord> rows(tasks.size());
    const int n = static_cast<int>(tasks.size());
    // Tasks are independent seeded runs; each writes only its own row, so
    // the schedule cannot change the output.
    if (threads == 0) {
#pragma omp parallel for schedule(dynamic)
        for (int t = 0; t < n; ++t) {
            rows[static_cast<size_t>(t)] = run_replication(
                configs[static_cast<size_t>(tasks[static_cast<size_t>(t)]
                                                .config_index)],
                tasks[static_cast<size_t>(t)].replication);
        }
    } else {
#pragma omp parallel for schedule(dynamic) num_threads(threads)
        for (int t = 0; t < n; ++t) {
            rows[static_cast<size_t>(t)] = run_replication(
                configs[static_cast<size_t>(tasks[static_cast<size_t>(t)]
                                                .config_index)],
                tasks[static_cast<size_t>(t)].replication);
        }
    }
    return rows;
}

}  // namespace d2d
