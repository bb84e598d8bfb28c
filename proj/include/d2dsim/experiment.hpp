// Experiment configuration, sweep presets and CSV emission.
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "d2dsim/sim.hpp"

namespace d2d {

struct ExperimentConfig {
    SharingScheme scheme = SharingScheme::Overlay;
    int cell_type = 1;
    int n_cues = 36;
    int n_pairs = 36;
    int snapshots = 200;
    int replications = 1;
    uint64_t seed = 1;
    SchedulerPolicy policy = SchedulerPolicy::RoundRobin;
    std::string out_path = "-";
    double a1 = 0.5;
    double a2 = 0.5;
    int calibration_samples = 2000;

    RunConfig to_run_config(int replication) const;
};

// key=value lines, '#' comments; unknown keys and malformed values are
// rejected with a diagnostic naming the key.
ExperimentConfig parse_config(std::istream& is);
ExperimentConfig parse_config_file(const std::string& path);
void apply_override(ExperimentConfig& config, const std::string& key,
                    const std::string& value);
void validate_config(const ExperimentConfig& config);

std::string config_to_string(const ExperimentConfig& config);

SharingScheme parse_scheme(const std::string& text);
SchedulerPolicy parse_policy(const std::string& text);
std::string to_string(SchedulerPolicy policy);

// One CSV row: a (config, replication) cell with the paired
// enabled/disabled results and the gain metrics.
struct RowRecord {
    SharingScheme scheme = SharingScheme::Overlay;
    int cell_type = 1;
    double enb_density = 0.0;
    int n_cues = 0;
    int n_pairs = 0;
    uint64_t seed = 0;
    double avg_total_ul_bps = 0.0;
    double avg_pair_bps = 0.0;
    double avg_cue_dl_bps = 0.0;
    double g_dir_pct = 0.0;
    double g_off_pct = 0.0;
    double g_tot_pct = 0.0;
};

extern const char* const kCsvHeader;

std::string csv_line(const RowRecord& row);
void emit_csv(const std::vector<RowRecord>& rows, std::ostream& os);
void emit_csv_file(const std::vector<RowRecord>& rows,
                   const std::string& path);

// Matched-seed enabled + disabled runs for one replication.
RowRecord run_replication(const ExperimentConfig& config, int replication);

// Five cell types x three schemes at a fixed population; total_ues must
// split as total/3 CUEs + total/3 pairs (K = cues + 2*pairs).
std::vector<ExperimentConfig> preset_densification_sweep(
    int total_ues, const ExperimentConfig& base = {});

// Overlay-only grid: 36 CUEs, pair counts {12, 24, 36, 48}, five cell
// types.
std::vector<ExperimentConfig> preset_ue_density_sweep(
    const ExperimentConfig& base = {});

}  // namespace d2d
