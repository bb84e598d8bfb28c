// Shared helpers for the test suites: random snapshot problems and small
// random generic programs for solver cross-checks.
#pragma once

#include <random>

#include "d2dsim/rrm.hpp"

namespace d2d::testutil {

// Random SnapshotProblem with at most `max_entities` schedulable entities
// spread over a small multi-cell layout. Some pair distances exceed d_max
// so the C4 fixing path is exercised.
inline SnapshotProblem random_problem(std::mt19937_64& rng, int max_entities,
                                      SharingScheme scheme) {
    std::uniform_int_distribution<int> cells_dist(1, 3);
    std::uniform_int_distribution<int> entity_dist(1, max_entities);
    std::uniform_real_distribution<double> util(0.0, 1e7);
    std::uniform_real_distribution<double> weight(0.1, 2.0);
    std::uniform_real_distribution<double> dist01(0.0, 1.0);

    SnapshotProblem p;
    p.scheme = scheme;
    p.num_cells = cells_dist(rng);
    p.d_max_m = 100.0;
    int entities = entity_dist(rng);
    std::uniform_int_distribution<int> cell(0, p.num_cells - 1);
    std::uniform_int_distribution<int> coin(0, 1);
    for (int e = 0; e < entities; ++e) {
        if (coin(rng)) {
            p.cue_cell.push_back(cell(rng));
        } else {
            p.pair_tx_cell.push_back(cell(rng));
            p.pair_rx_cell.push_back(cell(rng));
            // One pair in five lands beyond the distance limit.
            double d = dist01(rng) < 0.2 ? 150.0 : 100.0 * dist01(rng);
            p.pair_distance_m.push_back(d);
        }
    }
    p.utilities.u_leg.resize(p.cue_cell.size());
    for (double& u : p.utilities.u_leg) u = util(rng);
    p.utilities.u_dm.resize(p.pair_tx_cell.size());
    p.utilities.u_cm.resize(p.pair_tx_cell.size());
    for (size_t j = 0; j < p.pair_tx_cell.size(); ++j) {
        p.utilities.u_dm[j] = util(rng);
        p.utilities.u_cm[j] = util(rng);
    }
    p.utilities.weights.resize(p.cue_cell.size() + p.pair_tx_cell.size());
    for (double& w : p.utilities.weights) w = weight(rng);
    return p;
}

// Random generic program (no bound-slot hints): +-1/+-2 coefficients,
// mixed senses, occasionally negative objective coefficients. All-zero is
// kept feasible so every instance is solvable.
inline BinaryProgram random_generic_program(std::mt19937_64& rng, int max_vars) {
    std::uniform_int_distribution<int> nvars_dist(1, max_vars);
    std::uniform_real_distribution<double> obj(-5.0, 10.0);
    std::uniform_int_distribution<int> coeff_dist(0, 3);
    std::uniform_int_distribution<int> coin(0, 1);

    BinaryProgram p;
    int n = nvars_dist(rng);
    for (int v = 0; v < n; ++v) {
        p.var_names.push_back("v" + std::to_string(v));
        p.objective.push_back(obj(rng));
    }
    std::uniform_int_distribution<int> nrows_dist(0, 2 * n);
    std::uniform_int_distribution<int> var_dist(0, n - 1);
    int rows = nrows_dist(rng);
    for (int r = 0; r < rows; ++r) {
        LinearConstraint row;
        int terms = 1 + var_dist(rng) % 4;
        for (int t = 0; t < terms; ++t) {
            int c = coeff_dist(rng) - 1;  // -1, 0, 1, 2
            if (c == 0) c = 1;
            row.groups.push_back(single_term(var_dist(rng), c));
        }
        row.sense = LinearConstraint::Sense::LessEq;
        row.rhs = coin(rng) ? 1 : 0;
        // Keep the all-zero assignment feasible: rhs >= 0 for LessEq.
        row.label = "r" + std::to_string(r);
        p.rows.push_back(row);
    }
    // Occasionally pin a variable to zero through an equality row.
    if (n > 1 && coin(rng)) {
        p.rows.push_back({{single_term(var_dist(rng), 1)},
                          LinearConstraint::Sense::Eq,
                          0,
                          "fix"});
    }
    return p;
}

}  // namespace d2d::testutil
