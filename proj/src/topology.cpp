#include "d2dsim/topology.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace d2d {

namespace {

constexpr double kSqrt3 = 1.7320508075688772;
constexpr double kNominalAreaKm2 = 0.234;

void append_double(std::string& out, double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    out.append(buf, res.ptr);
}

}  // namespace

double distance_m(const Vec2& a, const Vec2& b) {
    return std::hypot(a.x - b.x, a.y - b.y);
}

const std::vector<CellType>& cell_type_catalogue() {
    static const std::vector<CellType> catalogue = {
        {1, 300.0, 1, 4.3, 23.0, 3.0, 23.0, 3.0},
        {2, 212.0, 2, 8.5, 21.0, 1.8, 21.0, 1.8},
        {3, 150.0, 4, 17.1, 20.0, 0.0, 20.0, 0.0},
        {4, 123.0, 6, 25.6, 17.4, 0.0, 17.4, 0.0},
        {5, 100.0, 9, 38.5, 14.7, 0.0, 14.7, 0.0},
    };
    return catalogue;
}

const CellType& cell_type_by_id(int id) {
    if (id < 1 || id > 5) {
        throw std::invalid_argument("cell type id must be in 1..5, got " +
                                    std::to_string(id));
    }
    return cell_type_catalogue()[static_cast<size_t>(id - 1)];
}

bool Hexagon::contains(const Vec2& p) const {
    // Flat-topped hexagon: half-plane tests against the top edge and the
    // upper-right edge, folded into the first quadrant.
    const double tol = 1e-9 * radius;
    const double dx = std::abs(p.x - center.x);
    const double dy = std::abs(p.y - center.y);
    if (dy > kSqrt3 * radius / 2.0 + tol) return false;
    return kSqrt3 * dx + dy <= kSqrt3 * radius + tol;
}

double Hexagon::area_m2() const {
    return 3.0 * kSqrt3 / 2.0 * radius * radius;
}

Vec2 Hexagon::sample_uniform(std::mt19937_64& rng) const {
    std::uniform_real_distribution<double> ux(-radius, radius);
    std::uniform_real_distribution<double> uy(-kSqrt3 * radius / 2.0,
                                              kSqrt3 * radius / 2.0);
    for (int attempt = 0; attempt < 10000; ++attempt) {
        Vec2 p{center.x + ux(rng), center.y + uy(rng)};
        if (contains(p)) return p;
    }
    throw std::runtime_error("hexagon rejection sampling exhausted its budget");
}

double CellLayout::hexagon_area_sum_km2() const {
    double sum = 0.0;
    for (const Cell& c : cells) sum += c.hexagon().area_m2();
    return sum * 1e-6;
}

std::vector<int> CellLayout::adjacent_cells(int cell_id) const {
    // Edge-sharing neighbours sit at center distance sqrt(3)*R.
    const double limit = kSqrt3 * cell_type.radius_m * 1.01;
    std::vector<int> out;
    for (const Cell& c : cells) {
        if (c.cell_id == cell_id) continue;
        if (distance_m(c.center, cells[static_cast<size_t>(cell_id)].center) <=
            limit) {
            out.push_back(c.cell_id);
        }
    }
    return out;
}

int CellLayout::missing_neighbors(int cell_id) const {
    int present = static_cast<int>(adjacent_cells(cell_id).size());
    return std::max(0, 6 - present);
}

int CellLayout::cell_containing(const Vec2& p) const {
    for (const Cell& c : cells) {
        if (c.hexagon().contains(p)) return c.cell_id;
    }
    return -1;
}

CellLayout build_layout(const CellType& cell_type) {
    const double r = cell_type.radius_m;
    const double col_dx = 1.5 * r;
    const double row_dy = kSqrt3 * r;

    // Offset coordinates (col, row) on a flat-topped grid; odd columns are
    // shifted half a row upward.
    std::vector<std::pair<int, int>> grid;
    switch (cell_type.num_cells) {
        case 1:
            grid = {{0, 0}};
            break;
        case 2:
            grid = {{0, 0}, {1, 0}};
            break;
        case 4:
            grid = {{0, 0}, {0, 1}, {1, 0}, {1, 1}};
            break;
        case 6:
            grid = {{0, 0}, {0, 1}, {1, 0}, {1, 1}, {2, 0}, {2, 1}};
            break;
        case 9:
            grid = {{0, 0}, {0, 1}, {0, 2}, {1, 0}, {1, 1},
                    {1, 2}, {2, 0}, {2, 1}, {2, 2}};
            break;
        default:
            throw std::invalid_argument("unsupported cell count " +
                                        std::to_string(cell_type.num_cells));
    }

    std::vector<Vec2> centers;
    centers.reserve(grid.size());
    for (auto [col, row] : grid) {
        double x = col * col_dx;
        double y = row * row_dy + (col % 2 != 0 ? row_dy / 2.0 : 0.0);
        centers.push_back({x, y});
    }
    Vec2 centroid{0.0, 0.0};
    for (const Vec2& c : centers) {
        centroid.x += c.x;
        centroid.y += c.y;
    }
    centroid.x /= static_cast<double>(centers.size());
    centroid.y /= static_cast<double>(centers.size());

    CellLayout layout;
    layout.cell_type = cell_type;
    layout.total_area_km2 = kNominalAreaKm2;
    for (size_t i = 0; i < centers.size(); ++i) {
        Cell cell;
        cell.cell_id = static_cast<int>(i);
        cell.center = {centers[i].x - centroid.x, centers[i].y - centroid.y};
        cell.radius_m = r;
        cell.enb_max_power_dbm = cell_type.enb_max_power_dbm;
        cell.enb_antenna_gain_dbi = cell_type.enb_antenna_gain_dbi;
        layout.cells.push_back(cell);
    }
    return layout;
}

namespace {

Vec2 sample_in_coverage(const CellLayout& layout, std::mt19937_64& rng,
                        int* serving_cell) {
    // Cells share one radius, so a uniform cell index keeps the drop uniform
    // over the union of hexagons.
    std::uniform_int_distribution<size_t> pick(0, layout.cells.size() - 1);
    Vec2 p = layout.cells[pick(rng)].hexagon().sample_uniform(rng);
    int cell = layout.cell_containing(p);
    if (cell < 0) throw std::logic_error("sampled point escaped the layout");
    *serving_cell = cell;
    return p;
}

Vec2 sample_receiver(const CellLayout& layout, const Vec2& tx, double d_max,
                     std::mt19937_64& rng, int* serving_cell) {
    std::uniform_real_distribution<double> uu(0.0, 1.0);
    std::uniform_real_distribution<double> ua(0.0, 2.0 * M_PI);
    for (int attempt = 0; attempt < 100000; ++attempt) {
        double radius = d_max * std::sqrt(uu(rng));
        double angle = ua(rng);
        Vec2 p{tx.x + radius * std::cos(angle), tx.y + radius * std::sin(angle)};
        int cell = layout.cell_containing(p);
        if (cell >= 0) {
            *serving_cell = cell;
            return p;
        }
    }
    throw std::runtime_error(
        "pair receiver sampling exhausted its retry budget; "
        "the disc does not intersect the coverage area");
}

}  // namespace

UePopulation drop_ues(const CellLayout& layout, int n_cues, int n_pairs,
                      std::mt19937_64& rng) {
    if (n_cues < 0 || n_pairs < 0 || n_cues + n_pairs < 1) {
        throw std::invalid_argument("population needs at least one CUE or pair");
    }
    UePopulation pop;
    int next_id = 0;
    for (int i = 0; i < n_cues; ++i) {
        Ue ue;
        ue.ue_id = next_id++;
        ue.role = UeRole::LegacyCue;
        ue.position = sample_in_coverage(layout, rng, &ue.serving_cell);
        pop.cues.push_back(ue);
    }
    const double d_max = layout.cell_type.radius_m;
    for (int j = 0; j < n_pairs; ++j) {
        Ue tx;
        tx.ue_id = next_id++;
        tx.role = UeRole::DueTx;
        tx.position = sample_in_coverage(layout, rng, &tx.serving_cell);

        Ue rx;
        rx.ue_id = next_id++;
        rx.role = UeRole::DueRx;
        rx.position =
            sample_receiver(layout, tx.position, d_max, rng, &rx.serving_cell);

        PairRecord rec;
        rec.pair_id = j;
        rec.tx_ue = tx.ue_id;
        rec.rx_ue = rx.ue_id;
        rec.tx_cell = tx.serving_cell;
        rec.rx_cell = rx.serving_cell;
        rec.distance_m = distance_m(tx.position, rx.position);
        rec.cross_cell = rec.tx_cell != rec.rx_cell;

        pop.due_txs.push_back(tx);
        pop.due_rxs.push_back(rx);
        pop.pairs.push_back(rec);
    }
    return pop;
}

int UePopulation::total_ues() const {
    return static_cast<int>(cues.size() + due_txs.size() + due_rxs.size());
}

double densification_ratio(const CellLayout& layout, const UePopulation& pop) {
    int k = pop.total_ues();
    if (k < 1) throw std::invalid_argument("densification ratio needs K >= 1");
    return static_cast<double>(layout.cells.size()) / static_cast<double>(k);
}

void write_population(std::ostream& os, const CellLayout& layout,
                      const UePopulation& pop) {
    os << population_to_string(layout, pop);
}

std::string population_to_string(const CellLayout& layout,
                                 const UePopulation& pop) {
    std::string out;
    for (const Cell& c : layout.cells) {
        out += "cell,";
        out += std::to_string(c.cell_id);
        out += ',';
        append_double(out, c.center.x);
        out += ',';
        append_double(out, c.center.y);
        out += ',';
        append_double(out, c.radius_m);
        out += '\n';
    }
    auto emit_ue = [&out](const Ue& ue) {
        out += "ue,";
        out += std::to_string(ue.ue_id);
        out += ',';
        switch (ue.role) {
            case UeRole::LegacyCue: out += "cue"; break;
            case UeRole::DueTx: out += "due_tx"; break;
            case UeRole::DueRx: out += "due_rx"; break;
        }
        out += ',';
        append_double(out, ue.position.x);
        out += ',';
        append_double(out, ue.position.y);
        out += ',';
        out += std::to_string(ue.serving_cell);
        out += '\n';
    };
    for (const Ue& ue : pop.cues) emit_ue(ue);
    for (size_t j = 0; j < pop.pairs.size(); ++j) {
        emit_ue(pop.due_txs[j]);
        emit_ue(pop.due_rxs[j]);
    }
    for (const PairRecord& p : pop.pairs) {
        out += "pair,";
        out += std::to_string(p.pair_id);
        out += ',';
        out += std::to_string(p.tx_ue);
        out += ',';
        out += std::to_string(p.rx_ue);
        out += ',';
        out += std::to_string(p.tx_cell);
        out += ',';
        out += std::to_string(p.rx_cell);
        out += ',';
        append_double(out, p.distance_m);
        out += ',';
        out += p.cross_cell ? '1' : '0';
        out += '\n';
    }
    return out;
}

}  // namespace d2d
