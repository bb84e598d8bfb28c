// Joint mode-selection + UE-scheduling binary program for one snapshot:
// utilities, the 0-1 linearized formulation per sharing scheme, and exact
// solvers (branch-and-bound plus an exhaustive verification oracle).
#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "d2dsim/channel.hpp"
#include "d2dsim/topology.hpp"

namespace d2d {

enum class SharingScheme : uint8_t {
    Overlay,    // CM/DM overlay
    Underlay1,  // CM overlay / DM underlay
    Underlay2,  // CM/DM underlay
};

enum class SchedulerPolicy : uint8_t { RoundRobin, ProportionalFairness };

std::string to_string(SharingScheme scheme);

// Per-entity utilities for one snapshot. Entities are indexed CUEs first
// (0..n_cues-1) then pairs (n_cues..n_cues+n_pairs-1); `weights` follows
// that order.
struct EntityUtilities {
    std::vector<double> u_leg;   // per CUE, UL bits/s
    std::vector<double> u_dm;    // per pair, direct-mode bits/s
    std::vector<double> u_cm;    // per pair, min(UL hop, DL hop) bits/s
    std::vector<double> weights; // scheduler weight per entity

    int n_cues() const { return static_cast<int>(u_leg.size()); }
    int n_pairs() const { return static_cast<int>(u_dm.size()); }
};

// Aggregate co-channel interference (mW) seen by each potential receiver,
// taken from the previous snapshot's transmitter set plus boundary draws.
// Every value already excludes the entity's own transmission (UL) or its
// serving eNB (DL).
struct InterferenceEstimate {
    std::vector<double> cue_ul_mw;      // at the serving eNB, per CUE
    std::vector<double> cue_dl_mw;      // at the CUE position, per CUE
    std::vector<double> pair_ul_enb_mw; // at the tx-cell eNB, per pair
    std::vector<double> pair_dm_mw;     // at the DUE receiver (UL phase)
    std::vector<double> pair_dl_mw;     // at the DUE receiver (DL phase)

    static InterferenceEstimate zeros(int n_cues, int n_pairs);
};

struct SnapshotProblem {
    SharingScheme scheme = SharingScheme::Overlay;
    EntityUtilities utilities;
    std::vector<int> cue_cell;
    std::vector<int> pair_tx_cell;
    std::vector<int> pair_rx_cell;
    std::vector<double> pair_distance_m;
    double d_max_m = 0.0;
    int num_cells = 0;

    int n_cues() const { return static_cast<int>(cue_cell.size()); }
    int n_pairs() const { return static_cast<int>(pair_tx_cell.size()); }
};

struct LinearTerm {
    int var = 0;
    int coeff = 0;
};

// Terms of a row, bundled with an interval the bundle's value is known to
// stay in on the feasible set (implied by other rows). The solver's
// propagation clamps to it; the row's linear meaning is unchanged. Mixed-
// sign bundles like y - w, which the linearization keeps in [0, 1], would
// otherwise hide infeasibility from per-variable bounds.
struct TermGroup {
    std::vector<LinearTerm> terms;
    int lo = 0;
    int hi = 0;
};

TermGroup single_term(int var, int coeff);

struct LinearConstraint {
    enum class Sense : uint8_t { LessEq, Eq };
    std::vector<TermGroup> groups;
    Sense sense = Sense::LessEq;
    int rhs = 0;
    std::string label;

    std::vector<LinearTerm> flat_terms() const;
};

// Optional solver hint, one per cell: any feasible assignment activates at
// most one primary and one secondary candidate pattern, on distinct
// entities, so the per-slot maximum of admissible combinations bounds the
// cell's objective contribution. Without slots the solver falls back to
// the sum of positive coefficients of unfixed variables.
struct PatternFix {
    int var = 0;
    uint8_t value = 0;
};

struct BoundCandidate {
    std::vector<PatternFix> pattern;
    double value = 0.0;
    int entity = -1;
};

struct BoundSlot {
    std::vector<BoundCandidate> primary;
    std::vector<BoundCandidate> secondary;
};

struct BinaryProgram {
    std::vector<std::string> var_names;
    std::vector<double> objective;
    std::vector<LinearConstraint> rows;
    std::vector<BoundSlot> bound_slots;

    int num_vars() const { return static_cast<int>(var_names.size()); }
    // Plain-text LP-style listing (objective, rows, binary declarations).
    std::string to_lp_text() const;
};

struct Solution {
    std::vector<uint8_t> values;
    double objective = 0.0;
};

struct Decision {
    std::vector<uint8_t> scheduled;  // per entity (CUEs then pairs)
    std::vector<uint8_t> dm_mode;    // per pair
    double objective_value = 0.0;
    Solution solution;               // raw variable assignment
};

// Variable layout used by build_program: y for each CUE, then (y, x, w)
// per pair, where w linearizes x*y.
int cue_y_var(int cue_index);
int pair_y_var(int n_cues, int pair_index);
int pair_x_var(int n_cues, int pair_index);
int pair_w_var(int n_cues, int pair_index);

EntityUtilities compute_utilities(const UePopulation& pop,
                                  const CellLayout& layout,
                                  const RadioParams& params,
                                  const InterferenceEstimate& est);

// The linearized 0-1 program for the active scheme. With force_cm every
// pair's mode variable is fixed to 0 (the D2D-disabled baseline).
BinaryProgram build_program(const SnapshotProblem& problem,
                            bool force_cm = false);

// Globally optimal solution by depth-first branch-and-bound with
// constraint propagation; among optima the lexicographically smallest
// variable vector is returned. Throws if the program is infeasible.
Solution solve_exact(const BinaryProgram& program);

// Exhaustive oracle for programs with at most 24 variables.
Solution solve_bruteforce(const BinaryProgram& program);

bool satisfies(const BinaryProgram& program, std::span<const uint8_t> values);
double objective_value(const BinaryProgram& program,
                       std::span<const uint8_t> values);

Decision decode_decision(const SnapshotProblem& problem, Solution solution);

// Scheduler weight factors: round robin uses 1/(1 + times scheduled),
// proportional fairness the reciprocal of average capacity floored at
// 1 bit/s.
std::vector<double> update_weights(const std::vector<uint64_t>& times_scheduled,
                                   const std::vector<double>& cumulative_bits,
                                   uint64_t snapshots, SchedulerPolicy policy);

}  // namespace d2d
