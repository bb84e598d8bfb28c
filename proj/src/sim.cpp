#include "d2dsim/sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace d2d {

namespace {

std::mt19937_64 seeded_engine(uint64_t seed, uint64_t stream) {
    std::seed_seq seq{seed & 0xffffffffu, seed >> 32, stream};
    return std::mt19937_64(seq);
}

void validate(const RunConfig& config) {
    if (config.n_cues < 0 || config.n_pairs < 0 ||
        config.n_cues + config.n_pairs < 1) {
        throw std::invalid_argument(
            "run config needs n_cues >= 0, n_pairs >= 0 and at least one entity");
    }
    if (config.snapshots < 1) {
        throw std::invalid_argument("run config needs snapshots >= 1");
    }
    if (config.a1 < 0.0 || config.a2 < 0.0) {
        throw std::invalid_argument("gain weights must be nonnegative");
    }
    cell_type_by_id(config.cell_type);
}

}  // namespace

Simulation::Simulation(const RunConfig& config)
    : config_(config), layout_(build_layout(cell_type_by_id(config.cell_type))) {
    validate(config_);
    // Independent streams so calibration, drops and snapshot draws do not
    // shift each other when sample counts change.
    auto calib_rng = seeded_engine(config_.seed, 0xca11b);
    auto drop_rng = seeded_engine(config_.seed, 0xd809);
    snapshot_rng_ = seeded_engine(config_.seed, 0x50a9);
    boundary_cdf_ = calibrate_edge_cdf(layout_, config_.radio, calib_rng,
                                       config_.calibration_samples);
    population_ = drop_ues(layout_, config_.n_cues, config_.n_pairs, drop_rng);

    const int n_entities = config_.n_cues + config_.n_pairs;
    ledger_.ul_bits.assign(static_cast<size_t>(n_entities), 0.0);
    ledger_.cue_dl_bits.assign(static_cast<size_t>(config_.n_cues), 0.0);
    ledger_.times_scheduled.assign(static_cast<size_t>(n_entities), 0);
    ledger_.dl_grants.assign(static_cast<size_t>(config_.n_cues), 0);
    prev_dl_active_.assign(layout_.cells.size(), 0);
    missing_neighbors_.resize(layout_.cells.size());
    for (const Cell& c : layout_.cells) {
        missing_neighbors_[static_cast<size_t>(c.cell_id)] =
            layout_.missing_neighbors(c.cell_id);
    }
}

Simulation::Simulation(const RunConfig& config, CellLayout layout,
                       UePopulation pop, EmpiricalCdf boundary_cdf)
    : config_(config),
      layout_(std::move(layout)),
      population_(std::move(pop)),
      boundary_cdf_(std::move(boundary_cdf)) {
    validate(config_);
    snapshot_rng_ = seeded_engine(config_.seed, 0x50a9);
    const int n_cues = static_cast<int>(population_.cues.size());
    const int n_pairs = static_cast<int>(population_.pairs.size());
    ledger_.ul_bits.assign(static_cast<size_t>(n_cues + n_pairs), 0.0);
    ledger_.cue_dl_bits.assign(static_cast<size_t>(n_cues), 0.0);
    ledger_.times_scheduled.assign(static_cast<size_t>(n_cues + n_pairs), 0);
    ledger_.dl_grants.assign(static_cast<size_t>(n_cues), 0);
    prev_dl_active_.assign(layout_.cells.size(), 0);
    missing_neighbors_.resize(layout_.cells.size());
    for (const Cell& c : layout_.cells) {
        missing_neighbors_[static_cast<size_t>(c.cell_id)] =
            layout_.missing_neighbors(c.cell_id);
    }
}

InterferenceEstimate Simulation::estimate_interference() {
    const int n_cues = static_cast<int>(population_.cues.size());
    const int n_pairs = static_cast<int>(population_.pairs.size());
    const RadioParams& radio = config_.radio;
    const CellType& type = layout_.cell_type;
    InterferenceEstimate est = InterferenceEstimate::zeros(n_cues, n_pairs);

    // Fresh exterior-network draws, one realization per receiver per phase.
    // The draw counts depend only on the layout and population, which keeps
    // matched-seed runs consuming identical random streams.
    std::vector<double> exterior_ul_enb(layout_.cells.size());
    for (size_t l = 0; l < layout_.cells.size(); ++l) {
        exterior_ul_enb[l] = sample_boundary_interference(
            boundary_cdf_, missing_neighbors_[l], snapshot_rng_);
    }
    std::vector<double> exterior_ul_rx(static_cast<size_t>(n_pairs));
    for (int j = 0; j < n_pairs; ++j) {
        exterior_ul_rx[static_cast<size_t>(j)] = sample_boundary_interference(
            boundary_cdf_,
            missing_neighbors_[static_cast<size_t>(
                population_.pairs[static_cast<size_t>(j)].rx_cell)],
            snapshot_rng_);
    }
    std::vector<double> exterior_dl_rx(static_cast<size_t>(n_pairs));
    for (int j = 0; j < n_pairs; ++j) {
        exterior_dl_rx[static_cast<size_t>(j)] = sample_boundary_interference(
            boundary_cdf_,
            missing_neighbors_[static_cast<size_t>(
                population_.pairs[static_cast<size_t>(j)].rx_cell)],
            snapshot_rng_);
    }
    std::vector<double> exterior_dl_cue(static_cast<size_t>(n_cues));
    for (int i = 0; i < n_cues; ++i) {
        exterior_dl_cue[static_cast<size_t>(i)] = sample_boundary_interference(
            boundary_cdf_,
            missing_neighbors_[static_cast<size_t>(
                population_.cues[static_cast<size_t>(i)].serving_cell)],
            snapshot_rng_);
    }

    // Lagged co-channel UL interference, excluding the entity's own
    // transmitter.
    auto ul_sum_at = [&](const Vec2& pos, double rx_gain, int exclude_entity) {
        double total = 0.0;
        for (const TxRecord& tx : prev_ul_txs_) {
            if (tx.entity == exclude_entity) continue;
            LinkSample link{tx.power_dbm, tx.gain_dbi, rx_gain,
                            distance_m(tx.position, pos)};
            total += rx_power_mw(link, radio);
        }
        return total;
    };
    // Lagged co-channel DL interference from the other cells' active eNBs.
    auto dl_sum_at = [&](const Vec2& pos, double rx_gain, int serving_cell) {
        double total = 0.0;
        for (const Cell& c : layout_.cells) {
            if (c.cell_id == serving_cell) continue;
            if (!prev_dl_active_[static_cast<size_t>(c.cell_id)]) continue;
            LinkSample link{c.enb_max_power_dbm, c.enb_antenna_gain_dbi,
                            rx_gain, distance_m(c.center, pos)};
            total += rx_power_mw(link, radio);
        }
        return total;
    };

    for (int i = 0; i < n_cues; ++i) {
        const Ue& cue = population_.cues[static_cast<size_t>(i)];
        const Cell& cell = layout_.cells[static_cast<size_t>(cue.serving_cell)];
        est.cue_ul_mw[static_cast<size_t>(i)] =
            ul_sum_at(cell.center, cell.enb_antenna_gain_dbi, i) +
            exterior_ul_enb[static_cast<size_t>(cue.serving_cell)];
        est.cue_dl_mw[static_cast<size_t>(i)] =
            dl_sum_at(cue.position, type.ue_antenna_gain_dbi,
                      cue.serving_cell) +
            exterior_dl_cue[static_cast<size_t>(i)];
    }
    for (int j = 0; j < n_pairs; ++j) {
        const PairRecord& pair = population_.pairs[static_cast<size_t>(j)];
        const Ue& rx = population_.due_rxs[static_cast<size_t>(j)];
        const Cell& tx_cell = layout_.cells[static_cast<size_t>(pair.tx_cell)];
        const int entity = n_cues + j;
        est.pair_ul_enb_mw[static_cast<size_t>(j)] =
            ul_sum_at(tx_cell.center, tx_cell.enb_antenna_gain_dbi, entity) +
            exterior_ul_enb[static_cast<size_t>(pair.tx_cell)];
        est.pair_dm_mw[static_cast<size_t>(j)] =
            ul_sum_at(rx.position, type.ue_antenna_gain_dbi, entity) +
            exterior_ul_rx[static_cast<size_t>(j)];
        est.pair_dl_mw[static_cast<size_t>(j)] =
            dl_sum_at(rx.position, type.ue_antenna_gain_dbi, pair.rx_cell) +
            exterior_dl_rx[static_cast<size_t>(j)];
    }
    return est;
}

const Decision& Simulation::run_snapshot() {
    const int n_cues = static_cast<int>(population_.cues.size());
    const int n_pairs = static_cast<int>(population_.pairs.size());
    const RadioParams& radio = config_.radio;
    const CellType& type = layout_.cell_type;

    InterferenceEstimate est = estimate_interference();
    utilities_ = compute_utilities(population_, layout_, radio, est);
    utilities_.weights = update_weights(ledger_.times_scheduled,
                                        ledger_.ul_bits, ledger_.snapshots,
                                        config_.policy);

    // DL capacity each CUE would get from an offloaded slot this snapshot.
    cue_dl_capacity_.assign(static_cast<size_t>(n_cues), 0.0);
    for (int i = 0; i < n_cues; ++i) {
        const Ue& cue = population_.cues[static_cast<size_t>(i)];
        const Cell& cell = layout_.cells[static_cast<size_t>(cue.serving_cell)];
        LinkSample dl{cell.enb_max_power_dbm, cell.enb_antenna_gain_dbi,
                      type.ue_antenna_gain_dbi,
                      distance_m(cell.center, cue.position)};
        double sinr = sinr_linear(rx_power_dbm(dl, radio),
                                  est.cue_dl_mw[static_cast<size_t>(i)], radio);
        cue_dl_capacity_[static_cast<size_t>(i)] =
            capacity_bps(sinr, radio.bandwidth_hz);
    }

    SnapshotProblem problem;
    problem.scheme = config_.scheme;
    problem.utilities = utilities_;
    problem.cue_cell.resize(static_cast<size_t>(n_cues));
    for (int i = 0; i < n_cues; ++i) {
        problem.cue_cell[static_cast<size_t>(i)] =
            population_.cues[static_cast<size_t>(i)].serving_cell;
    }
    problem.pair_tx_cell.resize(static_cast<size_t>(n_pairs));
    problem.pair_rx_cell.resize(static_cast<size_t>(n_pairs));
    problem.pair_distance_m.resize(static_cast<size_t>(n_pairs));
    for (int j = 0; j < n_pairs; ++j) {
        const PairRecord& p = population_.pairs[static_cast<size_t>(j)];
        problem.pair_tx_cell[static_cast<size_t>(j)] = p.tx_cell;
        problem.pair_rx_cell[static_cast<size_t>(j)] = p.rx_cell;
        problem.pair_distance_m[static_cast<size_t>(j)] = p.distance_m;
    }
    problem.d_max_m = layout_.cell_type.radius_m;
    problem.num_cells = static_cast<int>(layout_.cells.size());

    BinaryProgram program = build_program(problem, config_.force_cm);
    Solution solution = solve_exact(program);
    if (!satisfies(program, solution.values)) {
        throw std::logic_error("solver returned an infeasible decision");
    }
    decision_ = decode_decision(problem, std::move(solution));

    // UL credits.
    std::vector<TxRecord> next_ul;
    for (int i = 0; i < n_cues; ++i) {
        if (!decision_.scheduled[static_cast<size_t>(i)]) continue;
        ledger_.ul_bits[static_cast<size_t>(i)] +=
            utilities_.u_leg[static_cast<size_t>(i)];
        ledger_.times_scheduled[static_cast<size_t>(i)] += 1;
        next_ul.push_back({population_.cues[static_cast<size_t>(i)].position,
                           type.ue_max_power_dbm, type.ue_antenna_gain_dbi, i});
    }
    for (int j = 0; j < n_pairs; ++j) {
        const int entity = n_cues + j;
        if (!decision_.scheduled[static_cast<size_t>(entity)]) continue;
        bool dm = decision_.dm_mode[static_cast<size_t>(j)] != 0;
        ledger_.ul_bits[static_cast<size_t>(entity)] +=
            dm ? utilities_.u_dm[static_cast<size_t>(j)]
               : utilities_.u_cm[static_cast<size_t>(j)];
        ledger_.times_scheduled[static_cast<size_t>(entity)] += 1;
        next_ul.push_back(
            {population_.due_txs[static_cast<size_t>(j)].position,
             type.ue_max_power_dbm, type.ue_antenna_gain_dbi, entity});
    }

    // DL phase: a scheduled CM pair claims its receiver cell's slot;
    // otherwise the slot is offloaded round-robin to one legacy CUE.
    std::vector<uint8_t> next_dl(layout_.cells.size(), 0);
    std::vector<int> cm_claim(layout_.cells.size(), -1);
    for (int j = 0; j < n_pairs; ++j) {
        const int entity = n_cues + j;
        if (decision_.scheduled[static_cast<size_t>(entity)] &&
            !decision_.dm_mode[static_cast<size_t>(j)]) {
            int m = population_.pairs[static_cast<size_t>(j)].rx_cell;
            if (cm_claim[static_cast<size_t>(m)] != -1) {
                throw std::logic_error("C2 violated: two CM pairs in one cell");
            }
            cm_claim[static_cast<size_t>(m)] = j;
        }
    }
    for (const Cell& cell : layout_.cells) {
        size_t m = static_cast<size_t>(cell.cell_id);
        if (cm_claim[m] != -1) {
            next_dl[m] = 1;  // eNB serves the CM pair's DL hop
            continue;
        }
        int chosen = -1;
        uint64_t fewest = std::numeric_limits<uint64_t>::max();
        for (int i = 0; i < n_cues; ++i) {
            if (population_.cues[static_cast<size_t>(i)].serving_cell !=
                cell.cell_id) {
                continue;
            }
            if (ledger_.dl_grants[static_cast<size_t>(i)] < fewest) {
                fewest = ledger_.dl_grants[static_cast<size_t>(i)];
                chosen = i;
            }
        }
        if (chosen >= 0) {
            ledger_.cue_dl_bits[static_cast<size_t>(chosen)] +=
                cue_dl_capacity_[static_cast<size_t>(chosen)];
            ledger_.dl_grants[static_cast<size_t>(chosen)] += 1;
            next_dl[m] = 1;
        }
    }

    prev_ul_txs_ = std::move(next_ul);
    prev_dl_active_ = std::move(next_dl);
    ledger_.snapshots += 1;
    return decision_;
}

RunResult Simulation::make_result() const {
    const int n_cues = static_cast<int>(population_.cues.size());
    RunResult result;
    result.config = config_;
    result.ledger = ledger_;
    double snaps = static_cast<double>(ledger_.snapshots);
    double total_ul = 0.0;
    for (double b : ledger_.ul_bits) total_ul += b;
    double pair_ul = 0.0;
    for (size_t e = static_cast<size_t>(n_cues); e < ledger_.ul_bits.size();
         ++e) {
        pair_ul += ledger_.ul_bits[e];
    }
    double cue_dl = 0.0;
    for (double b : ledger_.cue_dl_bits) cue_dl += b;
    result.avg_total_ul_bps = total_ul / snaps;
    result.avg_pair_bps = pair_ul / snaps;
    result.avg_cue_dl_bps = cue_dl / snaps;
    return result;
}

RunResult Simulation::run() {
    for (int s = 0; s < config_.snapshots; ++s) run_snapshot();
    return make_result();
}

RunResult run_simulation(const RunConfig& config) {
    Simulation sim(config);
    return sim.run();
}

RunResult run_disabled_baseline(RunConfig config) {
    config.force_cm = true;
    Simulation sim(config);
    return sim.run();
}

namespace {

double percent_gain(double enabled, double disabled) {
    if (disabled == 0.0) return std::numeric_limits<double>::quiet_NaN();
    return 100.0 * (enabled - disabled) / disabled;
}

}  // namespace

double direct_gain(const RunResult& enabled, const RunResult& disabled) {
    return percent_gain(enabled.avg_pair_bps, disabled.avg_pair_bps);
}

double offload_gain(const RunResult& enabled, const RunResult& disabled) {
    return percent_gain(enabled.avg_cue_dl_bps, disabled.avg_cue_dl_bps);
}

double total_gain(double g_dir, double g_off, double a1, double a2) {
    return a1 * g_dir + a2 * g_off;
}

GainReport make_gain_report(const RunResult& enabled,
                            const RunResult& disabled, double a1, double a2) {
    GainReport report;
    report.a1 = a1;
    report.a2 = a2;
    report.g_dir_pct = direct_gain(enabled, disabled);
    report.g_off_pct = offload_gain(enabled, disabled);
    report.g_tot_pct = total_gain(report.g_dir_pct, report.g_off_pct, a1, a2);
    return report;
}

double evm_to_snr_db(double evm) {
    if (!(evm > 0.0) || evm > 1.0) {
        throw std::invalid_argument("EVM must lie in (0, 1]");
    }
    return -20.0 * std::log10(evm);
}

}  // namespace d2d
