// Per-snapshot scheduling loop, UL/DL throughput accounting and the D2D
// gain metrics.
#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "d2dsim/channel.hpp"
#include "d2dsim/rrm.hpp"
#include "d2dsim/topology.hpp"

namespace d2d {

struct RunConfig {
    SharingScheme scheme = SharingScheme::Overlay;
    int cell_type = 1;
    int n_cues = 36;
    int n_pairs = 36;
    int snapshots = 200;
    uint64_t seed = 1;
    SchedulerPolicy policy = SchedulerPolicy::RoundRobin;
    double a1 = 0.5;
    double a2 = 0.5;
    int calibration_samples = 2000;
    bool force_cm = false;  // D2D-disabled baseline
    RadioParams radio;
};

struct ThroughputLedger {
    std::vector<double> ul_bits;          // per entity (CUEs then pairs)
    std::vector<double> cue_dl_bits;      // per CUE
    std::vector<uint64_t> times_scheduled;// per entity
    std::vector<uint64_t> dl_grants;      // per CUE, offloaded DL slots won
    uint64_t snapshots = 0;
};

// Averages are per-snapshot network sums: the UL throughput summed over
// all entities (or over pairs / CUE DL), divided by the snapshot count.
struct RunResult {
    double avg_total_ul_bps = 0.0;
    double avg_pair_bps = 0.0;
    double avg_cue_dl_bps = 0.0;
    ThroughputLedger ledger;
    RunConfig config;
};

struct GainReport {
    double g_dir_pct = 0.0;
    double g_off_pct = 0.0;
    double g_tot_pct = 0.0;
    double a1 = 0.5;
    double a2 = 0.5;
};

// One run over a fixed population: utilities from the lagged interference
// estimate, the scheme's binary program, exact solve, UL/DL crediting.
class Simulation {
  public:
    explicit Simulation(const RunConfig& config);
    // Injection constructor for tests and cached calibrations.
    Simulation(const RunConfig& config, CellLayout layout, UePopulation pop,
               EmpiricalCdf boundary_cdf);

    const Decision& run_snapshot();
    RunResult run();

    const CellLayout& layout() const { return layout_; }
    const UePopulation& population() const { return population_; }
    const ThroughputLedger& ledger() const { return ledger_; }
    const EmpiricalCdf& boundary_cdf() const { return boundary_cdf_; }
    const EntityUtilities& last_utilities() const { return utilities_; }
    const Decision& last_decision() const { return decision_; }

  private:
    struct TxRecord {
        Vec2 position;
        double power_dbm = 0.0;
        double gain_dbi = 0.0;
        int entity = -1;  // CUE index, or n_cues + pair index
    };

    InterferenceEstimate estimate_interference();
    RunResult make_result() const;

    RunConfig config_;
    CellLayout layout_;
    UePopulation population_;
    EmpiricalCdf boundary_cdf_;
    std::mt19937_64 snapshot_rng_;
    std::vector<int> missing_neighbors_;

    std::vector<TxRecord> prev_ul_txs_;
    std::vector<uint8_t> prev_dl_active_;  // per cell
    ThroughputLedger ledger_;
    EntityUtilities utilities_;
    std::vector<double> cue_dl_capacity_;
    Decision decision_;
};

RunResult run_simulation(const RunConfig& config);
// Same pipeline with every pair's mode variable fixed to cellular mode.
RunResult run_disabled_baseline(RunConfig config);

// Percentage gains of the D2D-enabled run over the disabled baseline.
// A zero-throughput baseline makes the gain undefined (NaN).
double direct_gain(const RunResult& enabled, const RunResult& disabled);
double offload_gain(const RunResult& enabled, const RunResult& disabled);
double total_gain(double g_dir, double g_off, double a1, double a2);
GainReport make_gain_report(const RunResult& enabled,
                            const RunResult& disabled, double a1, double a2);

// SNR_dB ~= 10*log10(1/EVM^2), for EVM in (0, 1].
double evm_to_snr_db(double evm);

}  // namespace d2d
