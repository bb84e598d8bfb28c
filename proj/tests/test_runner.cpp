#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "d2dsim/runner.hpp"

using namespace d2d;

namespace {

std::vector<ExperimentConfig> small_grid() {
    ExperimentConfig base;
    base.n_cues = 5;
    base.n_pairs = 4;
    base.snapshots = 10;
    base.replications = 2;
    base.seed = 21;
    base.calibration_samples = 200;

    std::vector<ExperimentConfig> configs;
    for (int type : {1, 3}) {
        for (SharingScheme scheme : {SharingScheme::Overlay,
                                     SharingScheme::Underlay1}) {
            ExperimentConfig c = base;
            c.cell_type = type;
            c.scheme = scheme;
            configs.push_back(c);
        }
    }
    return configs;
}

}  // namespace

TEST_CASE("parallel batch matches the serial reference bit for bit") {
    auto configs = small_grid();
    auto serial = run_batch_serial(configs);
    auto parallel = run_batch(configs, 0);
    auto two_threads = run_batch(configs, 2);

    REQUIRE(serial.size() == 8);  // 4 configs x 2 replications
    REQUIRE(parallel.size() == serial.size());
    REQUIRE(two_threads.size() == serial.size());
    for (size_t i = 0; i < serial.size(); ++i) {
        CHECK(csv_line(parallel[i]) == csv_line(serial[i]));
        CHECK(csv_line(two_threads[i]) == csv_line(serial[i]));
    }
}

TEST_CASE("threads=1 routes through the serial path") {
    auto configs = small_grid();
    configs.resize(1);
    auto a = run_batch(configs, 1);
    auto b = run_batch_serial(configs);
    REQUIRE(a.size() == b.size());
    for (size_t i = 0; i < a.size(); ++i) {
        CHECK(csv_line(a[i]) == csv_line(b[i]));
    }
}

TEST_CASE("rows come back in grid order with per-replication seeds") {
    ExperimentConfig config;
    config.n_cues = 3;
    config.n_pairs = 2;
    config.snapshots = 5;
    config.replications = 3;
    config.seed = 100;
    config.cell_type = 2;
    config.calibration_samples = 200;

    auto rows = run_batch({config}, 0);
    REQUIRE(rows.size() == 3);
    CHECK(rows[0].seed == 100);
    CHECK(rows[1].seed == 101);
    CHECK(rows[2].seed == 102);
}

TEST_CASE("invalid configs are rejected before any run starts") {
    ExperimentConfig config;
    config.replications = 0;
    CHECK_THROWS_AS(run_batch({config}, 0), std::invalid_argument);
    CHECK_THROWS_AS(run_batch({ExperimentConfig{}}, -1), std::invalid_argument);
}
