// Serial vs OpenMP batch execution on a fixed densification workload.
#include <chrono>
#include <cstdio>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "d2dsim/runner.hpp"

int main() {
    namespace chrono = std::chrono;
    using d2d::ExperimentConfig;

    ExperimentConfig base;
    base.snapshots = 40;
    base.replications = 2;
    base.seed = 7;
    std::vector<ExperimentConfig> configs =
        d2d::preset_densification_sweep(108, base);

    auto t0 = chrono::steady_clock::now();
    auto serial_rows = d2d::run_batch_serial(configs);
    auto t1 = chrono::steady_clock::now();
    auto parallel_rows = d2d::run_batch(configs, 0);
    auto t2 = chrono::steady_clock::now();

    for (size_t i = 0; i < serial_rows.size(); ++i) {
        if (d2d::csv_line(serial_rows[i]) != d2d::csv_line(parallel_rows[i])) {
            std::fprintf(stderr, "row %zu differs between serial and parallel\n",
                         i);
            return 1;
        }
    }

    double serial_ms =
        chrono::duration_cast<chrono::microseconds>(t1 - t0).count() / 1000.0;
    double parallel_ms =
        chrono::duration_cast<chrono::microseconds>(t2 - t1).count() / 1000.0;
    int threads = 1;
#ifdef _OPENMP
    threads = omp_get_max_threads();
#endif
    std::printf("rows            %zu\n", serial_rows.size());
    std::printf("serial          %.1f ms\n", serial_ms);
    std::printf("openmp (%d thr)  %.1f ms\n", threads, parallel_ms);
    std::printf("speedup         %.2fx\n", serial_ms / parallel_ms);
    std::printf("outputs identical\n");
    return 0;
}
