#include "d2dsim/cli.hpp"

#include <CLI11.hpp>
#include <iostream>
#include <string>
#include <vector>

#include "d2dsim/runner.hpp"

namespace d2d {

namespace {

struct CliOptions {
    std::string config_file;
    std::string scheme;
    std::string scheduler;
    int cell_type = 0;
    int cues = -1;
    int pairs = -1;
    int snapshots = 0;
    int reps = 0;
    long long seed = -1;
    std::string out;
    double a1 = -1.0;
    double a2 = -1.0;
    int threads = 0;
    int total_ues = 108;
};

void add_common_flags(CLI::App* cmd, CliOptions& opt) {
    cmd->add_option("--config", opt.config_file, "key=value config file");
    cmd->add_option("--scheme", opt.scheme,
                    "overlay|underlay1|underlay2 (overrides config)");
    cmd->add_option("--cell-type", opt.cell_type, "cell type 1..5");
    cmd->add_option("--cues", opt.cues, "number of legacy CUEs");
    cmd->add_option("--pairs", opt.pairs, "number of potential D2D pairs");
    cmd->add_option("--snapshots", opt.snapshots, "snapshots per run");
    cmd->add_option("--reps", opt.reps, "replications per config");
    cmd->add_option("--seed", opt.seed, "base seed (per-rep seeds are seed+rep)");
    cmd->add_option("--out", opt.out, "output CSV path ('-' for stdout)");
    cmd->add_option("--scheduler", opt.scheduler,
                    "round_robin|proportional_fair");
    cmd->add_option("--a1", opt.a1, "direct-gain weight");
    cmd->add_option("--a2", opt.a2, "offload-gain weight");
    cmd->add_option("--threads", opt.threads,
                    "worker threads (0 = default, 1 = serial)");
}

ExperimentConfig base_config(const CliOptions& opt) {
    ExperimentConfig config;
    if (!opt.config_file.empty()) config = parse_config_file(opt.config_file);
    if (!opt.scheme.empty()) apply_override(config, "scheme", opt.scheme);
    if (opt.cell_type > 0)
        apply_override(config, "cell_type", std::to_string(opt.cell_type));
    if (opt.cues >= 0) apply_override(config, "cues", std::to_string(opt.cues));
    if (opt.pairs >= 0)
        apply_override(config, "pairs", std::to_string(opt.pairs));
    if (opt.snapshots > 0)
        apply_override(config, "snapshots", std::to_string(opt.snapshots));
    if (opt.reps > 0)
        apply_override(config, "replications", std::to_string(opt.reps));
    if (opt.seed >= 0) apply_override(config, "seed", std::to_string(opt.seed));
    if (!opt.scheduler.empty())
        apply_override(config, "scheduler", opt.scheduler);
    if (!opt.out.empty()) config.out_path = opt.out;
    if (opt.a1 >= 0.0) config.a1 = opt.a1;
    if (opt.a2 >= 0.0) config.a2 = opt.a2;
    validate_config(config);
    return config;
}

int emit_rows(const std::vector<RowRecord>& rows, const std::string& out_path) {
    for (const RowRecord& row : rows) {
        if (std::isnan(row.g_dir_pct) || std::isnan(row.g_off_pct)) {
            std::cerr << "warning: undefined gain (zero baseline throughput) "
                         "for scheme="
                      << to_string(row.scheme)
                      << " cell_type=" << row.cell_type
                      << " seed=" << row.seed << "\n";
        }
    }
    if (out_path == "-") {
        emit_csv(rows, std::cout);
    } else {
        emit_csv_file(rows, out_path);
    }
    return 0;
}

}  // namespace

int cli_main(int argc, const char* const* argv) {
    CLI::App app{
        "Multi-cell D2D system-level simulator: joint mode selection and "
        "scheduling under overlay/underlay spectrum sharing"};
    app.require_subcommand(1);

    CliOptions opt;
    CLI::App* run_cmd =
        app.add_subcommand("run", "run one experiment configuration");
    CLI::App* dens_cmd = app.add_subcommand(
        "sweep-densification",
        "five cell types x three schemes at a fixed UE total");
    dens_cmd->add_option("--ues", opt.total_ues,
                         "total UE count (cues = pairs = total/3)");
    CLI::App* ues_cmd = app.add_subcommand(
        "sweep-ues", "overlay pair-count sweep at 36 CUEs, five cell types");
    for (CLI::App* cmd : {run_cmd, dens_cmd, ues_cmd}) {
        add_common_flags(cmd, opt);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        ExperimentConfig base = base_config(opt);
        std::vector<ExperimentConfig> configs;
        if (run_cmd->parsed()) {
            configs = {base};
        } else if (dens_cmd->parsed()) {
            configs = preset_densification_sweep(opt.total_ues, base);
        } else {
            configs = preset_ue_density_sweep(base);
        }
        std::vector<RowRecord> rows = run_batch(configs, opt.threads);
        return emit_rows(rows, base.out_path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace d2d
