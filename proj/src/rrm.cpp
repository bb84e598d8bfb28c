#include "d2dsim/rrm.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <stdexcept>

namespace d2d {

std::string to_string(SharingScheme scheme) {
    switch (scheme) {
        case SharingScheme::Overlay: return "overlay";
        case SharingScheme::Underlay1: return "underlay1";
        case SharingScheme::Underlay2: return "underlay2";
    }
    return "?";
}

InterferenceEstimate InterferenceEstimate::zeros(int n_cues, int n_pairs) {
    InterferenceEstimate est;
    est.cue_ul_mw.assign(static_cast<size_t>(n_cues), 0.0);
    est.cue_dl_mw.assign(static_cast<size_t>(n_cues), 0.0);
    est.pair_ul_enb_mw.assign(static_cast<size_t>(n_pairs), 0.0);
    est.pair_dm_mw.assign(static_cast<size_t>(n_pairs), 0.0);
    est.pair_dl_mw.assign(static_cast<size_t>(n_pairs), 0.0);
    return est;
}

TermGroup single_term(int var, int coeff) {
    return {{{var, coeff}}, std::min(0, coeff), std::max(0, coeff)};
}

std::vector<LinearTerm> LinearConstraint::flat_terms() const {
    std::vector<LinearTerm> out;
    for (const TermGroup& g : groups) {
        out.insert(out.end(), g.terms.begin(), g.terms.end());
    }
    return out;
}

int cue_y_var(int cue_index) { return cue_index; }
int pair_y_var(int n_cues, int pair_index) { return n_cues + 3 * pair_index; }
int pair_x_var(int n_cues, int pair_index) {
    return n_cues + 3 * pair_index + 1;
}
int pair_w_var(int n_cues, int pair_index) {
    return n_cues + 3 * pair_index + 2;
}

EntityUtilities compute_utilities(const UePopulation& pop,
                                  const CellLayout& layout,
                                  const RadioParams& params,
                                  const InterferenceEstimate& est) {
    const int n_cues = static_cast<int>(pop.cues.size());
    const int n_pairs = static_cast<int>(pop.pairs.size());
    const CellType& type = layout.cell_type;

    EntityUtilities u;
    u.u_leg.resize(static_cast<size_t>(n_cues));
    u.u_dm.resize(static_cast<size_t>(n_pairs));
    u.u_cm.resize(static_cast<size_t>(n_pairs));
    u.weights.assign(static_cast<size_t>(n_cues + n_pairs), 1.0);

#pragma omp parallel for schedule(static)
    for (int i = 0; i < n_cues; ++i) {
        const Ue& cue = pop.cues[static_cast<size_t>(i)];
        const Cell& cell = layout.cells[static_cast<size_t>(cue.serving_cell)];
        LinkSample ul{type.ue_max_power_dbm, type.ue_antenna_gain_dbi,
                      cell.enb_antenna_gain_dbi,
                      distance_m(cue.position, cell.center)};
        double sinr = sinr_linear(rx_power_dbm(ul, params),
                                  est.cue_ul_mw[static_cast<size_t>(i)], params);
        u.u_leg[static_cast<size_t>(i)] = capacity_bps(sinr, params.bandwidth_hz);
    }

#pragma omp parallel for schedule(static)
    for (int j = 0; j < n_pairs; ++j) {
        const Ue& tx = pop.due_txs[static_cast<size_t>(j)];
        const Ue& rx = pop.due_rxs[static_cast<size_t>(j)];
        const Cell& tx_cell = layout.cells[static_cast<size_t>(tx.serving_cell)];
        const Cell& rx_cell = layout.cells[static_cast<size_t>(rx.serving_cell)];

        LinkSample direct{type.ue_max_power_dbm, type.ue_antenna_gain_dbi,
                          type.ue_antenna_gain_dbi,
                          distance_m(tx.position, rx.position)};
        double dm_sinr =
            sinr_linear(rx_power_dbm(direct, params),
                        est.pair_dm_mw[static_cast<size_t>(j)], params);
        u.u_dm[static_cast<size_t>(j)] =
            capacity_bps(dm_sinr, params.bandwidth_hz);

        LinkSample ul_hop{type.ue_max_power_dbm, type.ue_antenna_gain_dbi,
                          tx_cell.enb_antenna_gain_dbi,
                          distance_m(tx.position, tx_cell.center)};
        double ul_sinr =
            sinr_linear(rx_power_dbm(ul_hop, params),
                        est.pair_ul_enb_mw[static_cast<size_t>(j)], params);
        double ul_cap = capacity_bps(ul_sinr, params.bandwidth_hz);

        LinkSample dl_hop{rx_cell.enb_max_power_dbm,
                          rx_cell.enb_antenna_gain_dbi,
                          type.ue_antenna_gain_dbi,
                          distance_m(rx_cell.center, rx.position)};
        double dl_sinr =
            sinr_linear(rx_power_dbm(dl_hop, params),
                        est.pair_dl_mw[static_cast<size_t>(j)], params);
        double dl_cap = capacity_bps(dl_sinr, params.bandwidth_hz);

        // CM runs over two hops; the worst one limits the pair rate.
        u.u_cm[static_cast<size_t>(j)] = std::min(ul_cap, dl_cap);
    }
    return u;
}

BinaryProgram build_program(const SnapshotProblem& problem, bool force_cm) {
    const int n_cues = problem.n_cues();
    const int n_pairs = problem.n_pairs();
    const EntityUtilities& u = problem.utilities;

    BinaryProgram prog;
    prog.var_names.reserve(static_cast<size_t>(n_cues + 3 * n_pairs));
    prog.objective.assign(static_cast<size_t>(n_cues + 3 * n_pairs), 0.0);

    for (int i = 0; i < n_cues; ++i) {
        prog.var_names.push_back("y_c" + std::to_string(i));
        prog.objective[static_cast<size_t>(cue_y_var(i))] =
            u.weights[static_cast<size_t>(i)] * u.u_leg[static_cast<size_t>(i)];
    }
    for (int j = 0; j < n_pairs; ++j) {
        prog.var_names.push_back("y_p" + std::to_string(j));
        prog.var_names.push_back("x_p" + std::to_string(j));
        prog.var_names.push_back("w_p" + std::to_string(j));
        double beta = u.weights[static_cast<size_t>(n_cues + j)];
        // beta * [u_dm * w + u_cm * (y - w)] = beta*u_cm * y +
        // beta*(u_dm - u_cm) * w
        prog.objective[static_cast<size_t>(pair_y_var(n_cues, j))] =
            beta * u.u_cm[static_cast<size_t>(j)];
        prog.objective[static_cast<size_t>(pair_w_var(n_cues, j))] =
            beta * (u.u_dm[static_cast<size_t>(j)] -
                    u.u_cm[static_cast<size_t>(j)]);
    }

    auto add_row = [&prog](std::vector<LinearTerm> terms,
                           LinearConstraint::Sense sense, int rhs,
                           std::string label) {
        if (terms.empty()) return;
        LinearConstraint row;
        for (const LinearTerm& t : terms) row.groups.push_back(single_term(t.var, t.coeff));
        row.sense = sense;
        row.rhs = rhs;
        row.label = std::move(label);
        prog.rows.push_back(std::move(row));
    };
    // y_j - w_j is the pair-scheduled-in-CM indicator; the linearization
    // rows pin it to [0, 1], which the grouped row records.
    auto cm_group = [&](int j) {
        TermGroup g;
        g.terms = {{pair_y_var(n_cues, j), 1}, {pair_w_var(n_cues, j), -1}};
        g.lo = 0;
        g.hi = 1;
        return g;
    };

    // Linearization of w = x*y, and C3 x <= y.
    for (int j = 0; j < n_pairs; ++j) {
        int y = pair_y_var(n_cues, j);
        int x = pair_x_var(n_cues, j);
        int w = pair_w_var(n_cues, j);
        add_row({{w, 1}, {x, -1}}, LinearConstraint::Sense::LessEq, 0,
                "lin_wx_p" + std::to_string(j));
        add_row({{w, 1}, {y, -1}}, LinearConstraint::Sense::LessEq, 0,
                "lin_wy_p" + std::to_string(j));
        add_row({{x, 1}, {y, 1}, {w, -1}}, LinearConstraint::Sense::LessEq, 1,
                "lin_xyw_p" + std::to_string(j));
        add_row({{x, 1}, {y, -1}}, LinearConstraint::Sense::LessEq, 0,
                "c3_p" + std::to_string(j));
    }

    // C4: pairs beyond the distance limit cannot use direct mode.
    for (int j = 0; j < n_pairs; ++j) {
        if (problem.pair_distance_m[static_cast<size_t>(j)] > problem.d_max_m) {
            add_row({{pair_x_var(n_cues, j), 1}}, LinearConstraint::Sense::Eq,
                    0, "c4_p" + std::to_string(j));
        }
    }
    if (force_cm) {
        for (int j = 0; j < n_pairs; ++j) {
            add_row({{pair_x_var(n_cues, j), 1}}, LinearConstraint::Sense::Eq,
                    0, "cm_only_p" + std::to_string(j));
        }
    }

    // C1 family per cell, depending on the sharing scheme.
    for (int l = 0; l < problem.num_cells; ++l) {
        std::vector<LinearTerm> cue_terms;
        for (int i = 0; i < n_cues; ++i) {
            if (problem.cue_cell[static_cast<size_t>(i)] == l) {
                cue_terms.push_back({cue_y_var(i), 1});
            }
        }
        std::vector<int> tx_pairs;
        for (int j = 0; j < n_pairs; ++j) {
            if (problem.pair_tx_cell[static_cast<size_t>(j)] == l) {
                tx_pairs.push_back(j);
            }
        }

        switch (problem.scheme) {
            case SharingScheme::Overlay: {
                // One CUE or one DUE regardless of mode.
                std::vector<LinearTerm> terms = cue_terms;
                for (int j : tx_pairs) terms.push_back({pair_y_var(n_cues, j), 1});
                add_row(std::move(terms), LinearConstraint::Sense::LessEq, 1,
                        "c1_cell" + std::to_string(l));
                break;
            }
            case SharingScheme::Underlay1: {
                // One CUE or one CM DUE, plus one DM DUE.
                LinearConstraint cm_row;
                for (const LinearTerm& t : cue_terms) {
                    cm_row.groups.push_back(single_term(t.var, t.coeff));
                }
                std::vector<LinearTerm> dm_terms;
                for (int j : tx_pairs) {
                    cm_row.groups.push_back(cm_group(j));
                    dm_terms.push_back({pair_w_var(n_cues, j), 1});
                }
                if (!cm_row.groups.empty()) {
                    cm_row.sense = LinearConstraint::Sense::LessEq;
                    cm_row.rhs = 1;
                    cm_row.label = "c1cm_cell" + std::to_string(l);
                    prog.rows.push_back(std::move(cm_row));
                }
                add_row(std::move(dm_terms), LinearConstraint::Sense::LessEq, 1,
                        "c1dm_cell" + std::to_string(l));
                break;
            }
            case SharingScheme::Underlay2: {
                // One CUE and one DUE regardless of mode.
                std::vector<LinearTerm> due_terms;
                for (int j : tx_pairs) due_terms.push_back({pair_y_var(n_cues, j), 1});
                add_row(std::move(cue_terms), LinearConstraint::Sense::LessEq,
                        1, "c1cue_cell" + std::to_string(l));
                add_row(std::move(due_terms), LinearConstraint::Sense::LessEq,
                        1, "c1due_cell" + std::to_string(l));
                break;
            }
        }
    }

    // C2 per cell: at most one CM pair may occupy a cell's DL resource.
    for (int m = 0; m < problem.num_cells; ++m) {
        LinearConstraint row;
        for (int j = 0; j < n_pairs; ++j) {
            if (problem.pair_rx_cell[static_cast<size_t>(j)] == m) {
                row.groups.push_back(cm_group(j));
            }
        }
        if (row.groups.empty()) continue;
        row.sense = LinearConstraint::Sense::LessEq;
        row.rhs = 1;
        row.label = "c2_cell" + std::to_string(m);
        prog.rows.push_back(std::move(row));
    }

    // Bounding slots: one per cell. The primary list is the cellular
    // scheduling slot, the secondary the extra underlay slot; at most one
    // candidate of each, on distinct entities, can be active at once.
    auto cue_candidate = [&](int i) {
        return BoundCandidate{{{cue_y_var(i), 1}},
                              prog.objective[static_cast<size_t>(cue_y_var(i))],
                              i};
    };
    auto cm_candidate = [&](int j) {
        return BoundCandidate{{{pair_y_var(n_cues, j), 1},
                               {pair_x_var(n_cues, j), 0},
                               {pair_w_var(n_cues, j), 0}},
                              prog.objective[static_cast<size_t>(
                                  pair_y_var(n_cues, j))],
                              n_cues + j};
    };
    auto dm_candidate = [&](int j) {
        return BoundCandidate{
            {{pair_y_var(n_cues, j), 1},
             {pair_x_var(n_cues, j), 1},
             {pair_w_var(n_cues, j), 1}},
            prog.objective[static_cast<size_t>(pair_y_var(n_cues, j))] +
                prog.objective[static_cast<size_t>(pair_w_var(n_cues, j))],
            n_cues + j};
    };
    for (int l = 0; l < problem.num_cells; ++l) {
        BoundSlot slot;
        for (int i = 0; i < n_cues; ++i) {
            if (problem.cue_cell[static_cast<size_t>(i)] == l) {
                slot.primary.push_back(cue_candidate(i));
            }
        }
        for (int j = 0; j < n_pairs; ++j) {
            if (problem.pair_tx_cell[static_cast<size_t>(j)] != l) continue;
            switch (problem.scheme) {
                case SharingScheme::Overlay:
                    slot.primary.push_back(cm_candidate(j));
                    slot.primary.push_back(dm_candidate(j));
                    break;
                case SharingScheme::Underlay1:
                    slot.primary.push_back(cm_candidate(j));
                    slot.secondary.push_back(dm_candidate(j));
                    break;
                case SharingScheme::Underlay2:
                    slot.secondary.push_back(cm_candidate(j));
                    slot.secondary.push_back(dm_candidate(j));
                    break;
            }
        }
        if (!slot.primary.empty() || !slot.secondary.empty()) {
            prog.bound_slots.push_back(std::move(slot));
        }
    }
    return prog;
}

Decision decode_decision(const SnapshotProblem& problem, Solution solution) {
    const int n_cues = problem.n_cues();
    const int n_pairs = problem.n_pairs();
    Decision d;
    d.scheduled.resize(static_cast<size_t>(n_cues + n_pairs));
    d.dm_mode.resize(static_cast<size_t>(n_pairs));
    for (int i = 0; i < n_cues; ++i) {
        d.scheduled[static_cast<size_t>(i)] =
            solution.values[static_cast<size_t>(cue_y_var(i))];
    }
    for (int j = 0; j < n_pairs; ++j) {
        d.scheduled[static_cast<size_t>(n_cues + j)] =
            solution.values[static_cast<size_t>(pair_y_var(n_cues, j))];
        d.dm_mode[static_cast<size_t>(j)] =
            solution.values[static_cast<size_t>(pair_x_var(n_cues, j))];
    }
    d.objective_value = solution.objective;
    d.solution = std::move(solution);
    return d;
}

std::vector<double> update_weights(const std::vector<uint64_t>& times_scheduled,
                                   const std::vector<double>& cumulative_bits,
                                   uint64_t snapshots, SchedulerPolicy policy) {
    if (times_scheduled.size() != cumulative_bits.size()) {
        throw std::invalid_argument("weight ledger vectors differ in size");
    }
    std::vector<double> beta(times_scheduled.size(), 1.0);
    constexpr double kEpsilonBps = 1.0;
    for (size_t e = 0; e < beta.size(); ++e) {
        if (policy == SchedulerPolicy::RoundRobin) {
            beta[e] = 1.0 / (1.0 + static_cast<double>(times_scheduled[e]));
        } else {
            double avg = snapshots > 0
                             ? cumulative_bits[e] / static_cast<double>(snapshots)
                             : 0.0;
            beta[e] = 1.0 / std::max(avg, kEpsilonBps);
        }
    }
    return beta;
}

std::string BinaryProgram::to_lp_text() const {
    auto fmt = [](double v) {
        char buf[64];
        auto res = std::to_chars(buf, buf + sizeof(buf), v);
        return std::string(buf, res.ptr);
    };
    std::string out = "max:";
    bool first = true;
    for (int v = 0; v < num_vars(); ++v) {
        double c = objective[static_cast<size_t>(v)];
        if (c == 0.0) continue;
        out += first ? " " : " + ";
        out += fmt(c) + " " + var_names[static_cast<size_t>(v)];
        first = false;
    }
    if (first) out += " 0";
    out += '\n';
    for (const LinearConstraint& row : rows) {
        out += row.label + ":";
        std::vector<LinearTerm> terms = row.flat_terms();
        for (size_t t = 0; t < terms.size(); ++t) {
            const LinearTerm& term = terms[t];
            if (t == 0) {
                out += term.coeff < 0 ? " -" : " ";
            } else {
                out += term.coeff < 0 ? " - " : " + ";
            }
            int mag = std::abs(term.coeff);
            if (mag != 1) out += std::to_string(mag) + " ";
            out += var_names[static_cast<size_t>(term.var)];
        }
        out += row.sense == LinearConstraint::Sense::LessEq ? " <= " : " = ";
        out += std::to_string(row.rhs);
        out += '\n';
    }
    out += "bin:";
    for (const std::string& name : var_names) out += " " + name;
    out += '\n';
    return out;
}

}  // namespace d2d
