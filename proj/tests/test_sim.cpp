#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>

#include "d2dsim/sim.hpp"

using namespace d2d;

namespace {

bool same_result(const RunResult& a, const RunResult& b) {
    return a.avg_total_ul_bps == b.avg_total_ul_bps &&
           a.avg_pair_bps == b.avg_pair_bps &&
           a.avg_cue_dl_bps == b.avg_cue_dl_bps &&
           a.ledger.ul_bits == b.ledger.ul_bits &&
           a.ledger.cue_dl_bits == b.ledger.cue_dl_bits &&
           a.ledger.times_scheduled == b.ledger.times_scheduled &&
           a.ledger.dl_grants == b.ledger.dl_grants;
}

// Single cell, one CUE at (150, 0) and one pair collapsed onto (-150, 0).
// With a mirror-symmetric geometry the CUE utility and the pair's
// cellular-mode utility are bit-identical, and a steep path-loss exponent
// rounds lagged interference away entirely, so the disabled baseline
// alternates CUE/pair exactly.
struct AlternationScenario {
    RunConfig config;
    CellLayout layout = build_layout(cell_type_by_id(1));
    UePopulation pop;

    AlternationScenario(SharingScheme scheme, int snapshots) {
        config.scheme = scheme;
        config.cell_type = 1;
        config.n_cues = 1;
        config.n_pairs = 1;
        config.snapshots = snapshots;
        config.seed = 5;
        config.radio.pathloss_exponent = 12.0;

        Ue cue{0, {150.0, 0.0}, UeRole::LegacyCue, 0};
        Ue tx{1, {-150.0, 0.0}, UeRole::DueTx, 0};
        Ue rx{2, {-150.0, 0.0}, UeRole::DueRx, 0};
        pop.cues = {cue};
        pop.due_txs = {tx};
        pop.due_rxs = {rx};
        pop.pairs = {{0, 1, 2, 0, 0, 0.0, false}};
    }

    Simulation make(bool force_cm) const {
        RunConfig c = config;
        c.force_cm = force_cm;
        return Simulation(c, layout, pop, EmpiricalCdf({0.0}));
    }
};

}  // namespace

TEST_CASE("one CUE, one snapshot: the average equals its utility") {
    RunConfig config;
    config.cell_type = 1;
    config.n_cues = 1;
    config.n_pairs = 0;
    config.snapshots = 1;

    CellLayout layout = build_layout(cell_type_by_id(1));
    UePopulation pop;
    pop.cues = {{0, {100.0, 0.0}, UeRole::LegacyCue, 0}};
    Simulation sim(config, layout, pop, EmpiricalCdf({0.0}));
    sim.run_snapshot();
    CHECK(sim.ledger().times_scheduled[0] == 1);
    double u_leg = sim.last_utilities().u_leg[0];
    CHECK(u_leg > 0.0);
    CHECK(sim.ledger().ul_bits[0] == u_leg);
}

TEST_CASE("no pairs, one CUE per cell: scheduled every snapshot in UL and DL") {
    RunConfig config;
    config.cell_type = 2;
    config.n_cues = 2;
    config.n_pairs = 0;
    config.snapshots = 12;

    CellLayout layout = build_layout(cell_type_by_id(2));
    UePopulation pop;
    pop.cues = {{0, layout.cells[0].center, UeRole::LegacyCue, 0},
                {1, layout.cells[1].center, UeRole::LegacyCue, 1}};
    Simulation sim(config, layout, pop, EmpiricalCdf({0.0}));
    sim.run();
    for (int i = 0; i < 2; ++i) {
        CHECK(sim.ledger().times_scheduled[static_cast<size_t>(i)] == 12);
        CHECK(sim.ledger().dl_grants[static_cast<size_t>(i)] == 12);
        CHECK(sim.ledger().cue_dl_bits[static_cast<size_t>(i)] > 0.0);
    }
}

TEST_CASE("identical seeds give bit-identical runs") {
    RunConfig config;
    config.cell_type = 3;
    config.n_cues = 6;
    config.n_pairs = 6;
    config.snapshots = 20;
    config.seed = 42;
    config.calibration_samples = 200;
    RunResult a = run_simulation(config);
    RunResult b = run_simulation(config);
    CHECK(same_result(a, b));

    config.seed = 43;
    RunResult c = run_simulation(config);
    CHECK_FALSE(same_result(a, c));
}

TEST_CASE("static single-entity scenario: averages independent of length") {
    RunConfig config;
    config.cell_type = 1;
    config.n_cues = 1;
    config.n_pairs = 0;

    CellLayout layout = build_layout(cell_type_by_id(1));
    UePopulation pop;
    pop.cues = {{0, {80.0, 40.0}, UeRole::LegacyCue, 0}};

    config.snapshots = 100;
    Simulation s1(config, layout, pop, EmpiricalCdf({0.0}));
    RunResult r1 = s1.run();
    config.snapshots = 200;
    Simulation s2(config, layout, pop, EmpiricalCdf({0.0}));
    RunResult r2 = s2.run();
    CHECK(std::abs(r1.avg_total_ul_bps - r2.avg_total_ul_bps) <
          1e-9 * r1.avg_total_ul_bps);
    CHECK(std::abs(r1.avg_cue_dl_bps - r2.avg_cue_dl_bps) <
          1e-9 * r1.avg_cue_dl_bps);
}

TEST_CASE("forced-CM baselines coincide for overlay and underlay1") {
    RunConfig config;
    config.cell_type = 4;
    config.n_cues = 8;
    config.n_pairs = 8;
    config.snapshots = 25;
    config.seed = 9;
    config.calibration_samples = 200;

    config.scheme = SharingScheme::Overlay;
    RunResult overlay = run_disabled_baseline(config);
    config.scheme = SharingScheme::Underlay1;
    RunResult u1 = run_disabled_baseline(config);
    CHECK(same_result(overlay, u1));
}

TEST_CASE("without pairs the baseline equals the enabled run") {
    RunConfig config;
    config.cell_type = 2;
    config.n_cues = 5;
    config.n_pairs = 0;
    config.snapshots = 15;
    config.seed = 77;
    config.calibration_samples = 200;
    RunResult enabled = run_simulation(config);
    RunResult disabled = run_disabled_baseline(config);
    CHECK(same_result(enabled, disabled));
}

TEST_CASE("per-cell credit conservation under every scheme") {
    for (SharingScheme scheme : {SharingScheme::Overlay,
                                 SharingScheme::Underlay1,
                                 SharingScheme::Underlay2}) {
        RunConfig config;
        config.scheme = scheme;
        config.cell_type = 3;
        config.n_cues = 10;
        config.n_pairs = 10;
        config.snapshots = 1;
        config.seed = 31;
        config.calibration_samples = 200;
        Simulation sim(config);
        const int cap = scheme == SharingScheme::Overlay ? 1 : 2;

        std::vector<uint64_t> prev_dl(10, 0);
        for (int s = 0; s < 15; ++s) {
            const Decision& d = sim.run_snapshot();
            std::vector<int> ul_per_cell(4, 0);
            for (int i = 0; i < 10; ++i) {
                if (d.scheduled[static_cast<size_t>(i)]) {
                    ul_per_cell[static_cast<size_t>(
                        sim.population().cues[static_cast<size_t>(i)]
                            .serving_cell)] += 1;
                }
            }
            for (int j = 0; j < 10; ++j) {
                if (d.scheduled[static_cast<size_t>(10 + j)]) {
                    ul_per_cell[static_cast<size_t>(
                        sim.population().pairs[static_cast<size_t>(j)]
                            .tx_cell)] += 1;
                }
            }
            for (int c = 0; c < 4; ++c) {
                CHECK(ul_per_cell[static_cast<size_t>(c)] <= cap);
            }
            // At most one offloaded DL grant per cell per snapshot.
            std::vector<int> dl_per_cell(4, 0);
            for (int i = 0; i < 10; ++i) {
                uint64_t grants =
                    sim.ledger().dl_grants[static_cast<size_t>(i)];
                if (grants > prev_dl[static_cast<size_t>(i)]) {
                    CHECK(grants == prev_dl[static_cast<size_t>(i)] + 1);
                    dl_per_cell[static_cast<size_t>(
                        sim.population().cues[static_cast<size_t>(i)]
                            .serving_cell)] += 1;
                }
                prev_dl[static_cast<size_t>(i)] = grants;
            }
            for (int j = 0; j < 10; ++j) {
                if (d.scheduled[static_cast<size_t>(10 + j)] &&
                    !d.dm_mode[static_cast<size_t>(j)]) {
                    dl_per_cell[static_cast<size_t>(
                        sim.population().pairs[static_cast<size_t>(j)]
                            .rx_cell)] += 1;
                }
            }
            for (int c = 0; c < 4; ++c) {
                CHECK(dl_per_cell[static_cast<size_t>(c)] <= 1);
            }
        }
    }
}

TEST_CASE("disabled baseline alternates and the offload gain is 100%") {
    AlternationScenario scenario(SharingScheme::Overlay, 40);

    Simulation disabled = scenario.make(true);
    RunResult base = disabled.run();
    // Exact alternation: the pair wins ties lexicographically, the CUE
    // follows, so each is scheduled in 20 of 40 snapshots.
    CHECK(base.ledger.times_scheduled[0] == 20);
    CHECK(base.ledger.times_scheduled[1] == 20);
    CHECK(base.ledger.dl_grants[0] == 20);

    Simulation enabled = scenario.make(false);
    RunResult run = enabled.run();
    // The pair's direct-mode utility dwarfs everything: it is scheduled in
    // DM every snapshot and every DL slot is offloaded to the CUE.
    CHECK(run.ledger.times_scheduled[1] == 40);
    CHECK(run.ledger.dl_grants[0] == 40);

    double g_off = offload_gain(run, base);
    CHECK(g_off == doctest::Approx(100.0).epsilon(1e-9));

    // Baseline pair throughput uses only cellular-mode utilities.
    double u_cm = disabled.last_utilities().u_cm[0];
    CHECK(base.avg_pair_bps == doctest::Approx(20.0 * u_cm / 40.0));
}

TEST_CASE("gain arithmetic") {
    RunResult enabled;
    RunResult disabled;
    enabled.avg_pair_bps = 12e6;
    disabled.avg_pair_bps = 10e6;
    CHECK(direct_gain(enabled, disabled) == doctest::Approx(20.0));

    enabled.avg_pair_bps = disabled.avg_pair_bps = 8e6;
    CHECK(direct_gain(enabled, disabled) == 0.0);

    disabled.avg_pair_bps = 0.0;
    CHECK(std::isnan(direct_gain(enabled, disabled)));

    enabled.avg_cue_dl_bps = disabled.avg_cue_dl_bps = 4e6;
    CHECK(offload_gain(enabled, disabled) == 0.0);
    disabled.avg_cue_dl_bps = 0.0;
    CHECK(std::isnan(offload_gain(enabled, disabled)));

    CHECK(total_gain(20.0, 10.0, 0.5, 0.5) == 15.0);
    CHECK(total_gain(7.0, 7.0, 0.5, 0.5) == 7.0);
    CHECK(total_gain(0.0, 0.0, 0.3, 0.7) == 0.0);
}

TEST_CASE("gain report identity holds bit-exactly") {
    RunResult enabled;
    RunResult disabled;
    enabled.avg_pair_bps = 13.37e6;
    disabled.avg_pair_bps = 11.1e6;
    enabled.avg_cue_dl_bps = 5.5e6;
    disabled.avg_cue_dl_bps = 4.4e6;
    GainReport report = make_gain_report(enabled, disabled, 0.5, 0.5);
    CHECK(report.g_tot_pct == 0.5 * report.g_dir_pct + 0.5 * report.g_off_pct);
}

TEST_CASE("EVM to SNR") {
    CHECK(evm_to_snr_db(0.1) == doctest::Approx(20.0));
    CHECK(evm_to_snr_db(1.0) == doctest::Approx(0.0));
    CHECK(evm_to_snr_db(0.01) == doctest::Approx(40.0));
    CHECK_THROWS_AS(evm_to_snr_db(0.0), std::invalid_argument);
    CHECK_THROWS_AS(evm_to_snr_db(-0.5), std::invalid_argument);
    CHECK_THROWS_AS(evm_to_snr_db(1.5), std::invalid_argument);
}

TEST_CASE("config validation") {
    RunConfig config;
    config.snapshots = 0;
    CHECK_THROWS_AS(run_simulation(config), std::invalid_argument);
    config.snapshots = 1;
    config.n_cues = 0;
    config.n_pairs = 0;
    CHECK_THROWS_AS(run_simulation(config), std::invalid_argument);
    config.cell_type = 9;
    config.n_cues = 1;
    CHECK_THROWS_AS(run_simulation(config), std::invalid_argument);
}
