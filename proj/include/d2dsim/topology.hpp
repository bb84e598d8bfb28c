// Hexagonal multi-cell layouts, user drops and densification metrics.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <random>
#include <string>
#include <vector>

namespace d2d {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

double distance_m(const Vec2& a, const Vec2& b);

// One row of the five-type cell catalogue. Radii, cell counts, densities,
// powers and gains are fixed per type; eNB and UE rows share power/gain.
struct CellType {
    int id = 1;                  // 1..5
    double radius_m = 300.0;     // hexagon circumradius
    int num_cells = 1;
    double enb_density_per_km2 = 4.3;
    double enb_max_power_dbm = 23.0;
    double enb_antenna_gain_dbi = 3.0;
    double ue_max_power_dbm = 23.0;
    double ue_antenna_gain_dbi = 3.0;
};

// The catalogue itself (five entries, id 1..5).
const std::vector<CellType>& cell_type_catalogue();
const CellType& cell_type_by_id(int id);

// Regular flat-topped hexagon, circumradius `radius`.
struct Hexagon {
    Vec2 center;
    double radius = 0.0;

    bool contains(const Vec2& p) const;
    double area_m2() const;
    Vec2 sample_uniform(std::mt19937_64& rng) const;
};

struct Cell {
    int cell_id = 0;  // 0-based, unique
    Vec2 center;
    double radius_m = 0.0;
    double enb_max_power_dbm = 0.0;
    double enb_antenna_gain_dbi = 0.0;

    Hexagon hexagon() const { return Hexagon{center, radius_m}; }
};

struct CellLayout {
    CellType cell_type;
    std::vector<Cell> cells;
    double total_area_km2 = 0.0;  // nominal coverage area, 0.234 km^2

    // Sum of the hexagon areas actually laid out (km^2).
    double hexagon_area_sum_km2() const;
    // Cells whose hexagons share an edge with `cell_id`.
    std::vector<int> adjacent_cells(int cell_id) const;
    // 6 minus the number of physical neighbours (exterior edges).
    int missing_neighbors(int cell_id) const;
    // Containment lookup; ties on shared edges go to the lowest cell_id.
    // Returns -1 when the point is outside every hexagon.
    int cell_containing(const Vec2& p) const;
};

enum class UeRole : uint8_t { LegacyCue, DueTx, DueRx };

struct Ue {
    int ue_id = 0;
    Vec2 position;
    UeRole role = UeRole::LegacyCue;
    int serving_cell = 0;
};

struct PairRecord {
    int pair_id = 0;
    int tx_ue = 0;
    int rx_ue = 0;
    int tx_cell = 0;
    int rx_cell = 0;
    double distance_m = 0.0;
    bool cross_cell = false;
};

struct UePopulation {
    std::vector<Ue> cues;       // size K^leg
    std::vector<Ue> due_txs;    // size K^pD2D
    std::vector<Ue> due_rxs;    // size K^pD2D
    std::vector<PairRecord> pairs;

    int total_ues() const;  // K = K^leg + 2*K^pD2D
};

// Compact centered packing over the fixed 0.234 km^2 coverage area:
// 1 cell single, 2 side-by-side, 4/6/9 as centered hex-grid rows.
CellLayout build_layout(const CellType& cell_type);

// Uniform drops over the union of hexagons; pair receivers are sampled
// uniformly inside the disc of radius d_max (= cell radius) around their
// transmitter, clipped to the coverage area.
UePopulation drop_ues(const CellLayout& layout, int n_cues, int n_pairs,
                      std::mt19937_64& rng);

// (eNBs per area) / (UEs per area) = num_cells / K.
double densification_ratio(const CellLayout& layout, const UePopulation& pop);

// Line-oriented text format (cell/ue/pair records) for reproducibility and
// golden-file tests.
void write_population(std::ostream& os, const CellLayout& layout,
                      const UePopulation& pop);
std::string population_to_string(const CellLayout& layout,
                                 const UePopulation& pop);

}  // namespace d2d
