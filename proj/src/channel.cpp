#include "d2dsim/channel.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>

namespace d2d {

double dbm_to_mw(double dbm) {
    return std::pow(10.0, dbm / 10.0);
}

double mw_to_dbm(double mw) {
    return 10.0 * std::log10(mw);
}

double path_loss_db(double distance_m, const RadioParams& params) {
    double d = std::max(distance_m, params.min_distance_m);
    return params.pathloss_ref_db +
           10.0 * params.pathloss_exponent * std::log10(d);
}

double noise_power_dbm(const RadioParams& params) {
    return params.noise_density_dbm_hz + 10.0 * std::log10(params.bandwidth_hz) +
           params.noise_figure_db;
}

double rx_power_dbm(const LinkSample& link, const RadioParams& params) {
    return link.tx_power_dbm + link.tx_gain_dbi + link.rx_gain_dbi -
           path_loss_db(link.distance_m, params);
}

double rx_power_mw(const LinkSample& link, const RadioParams& params) {
    return dbm_to_mw(rx_power_dbm(link, params));
}

double sinr_linear(double signal_dbm, double total_interference_mw,
                   const RadioParams& params) {
    double denom = total_interference_mw + dbm_to_mw(noise_power_dbm(params));
    return dbm_to_mw(signal_dbm) / denom;
}

double sinr_linear(double signal_dbm, std::span<const double> interferers_mw,
                   const RadioParams& params) {
    double total = 0.0;
    for (double v : interferers_mw) total += v;
    return sinr_linear(signal_dbm, total, params);
}

double capacity_bps(double sinr, double bandwidth_hz) {
    // log1p keeps low-SINR capacities from rounding to zero.
    return bandwidth_hz * std::log1p(sinr) / std::log(2.0);
}

EmpiricalCdf::EmpiricalCdf(std::vector<double> samples_mw)
    : samples_(std::move(samples_mw)) {
    std::sort(samples_.begin(), samples_.end());
    if (!samples_.empty() && samples_.front() < 0.0) {
        throw std::invalid_argument("interference samples must be nonnegative");
    }
}

double EmpiricalCdf::quantile(double u) const {
    if (samples_.empty()) {
        throw std::logic_error("empty interference CDF: calibration not run");
    }
    u = std::clamp(u, 0.0, 1.0);
    size_t idx = std::min(samples_.size() - 1,
                          static_cast<size_t>(u * static_cast<double>(
                                                      samples_.size())));
    return samples_[idx];
}

double EmpiricalCdf::sample(std::mt19937_64& rng) const {
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    return quantile(u01(rng));
}

double EmpiricalCdf::median() const {
    return quantile(0.5);
}

void EmpiricalCdf::save(std::ostream& os) const {
    char buf[64];
    for (double v : samples_) {
        auto res = std::to_chars(buf, buf + sizeof(buf), v);
        os.write(buf, res.ptr - buf);
        os.put('\n');
    }
}

EmpiricalCdf EmpiricalCdf::load(std::istream& is) {
    std::vector<double> samples;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        double v = 0.0;
        auto res = std::from_chars(line.data(), line.data() + line.size(), v);
        if (res.ec != std::errc{}) {
            throw std::runtime_error("malformed CDF sample line: " + line);
        }
        samples.push_back(v);
    }
    return EmpiricalCdf(std::move(samples));
}

EmpiricalCdf calibrate_edge_cdf(const CellLayout& layout,
                                const RadioParams& params,
                                std::mt19937_64& rng, int n_samples) {
    if (n_samples < 100) {
        throw std::invalid_argument("calibration needs at least 100 samples");
    }

    // Receiving cell / neighbour hexagon pairs.
    struct EdgePair {
        Hexagon receiver;
        Hexagon neighbor;
    };
    std::vector<EdgePair> edges;
    for (const Cell& c : layout.cells) {
        for (int n : layout.adjacent_cells(c.cell_id)) {
            edges.push_back({c.hexagon(),
                             layout.cells[static_cast<size_t>(n)].hexagon()});
        }
    }
    if (edges.empty()) {
        // Single-cell fallback: synthetic neighbour one cell diameter away.
        const Cell& c = layout.cells.front();
        Hexagon synthetic{{c.center.x + 2.0 * c.radius_m, c.center.y},
                          c.radius_m};
        edges.push_back({c.hexagon(), synthetic});
    }

    const double tx_power = layout.cell_type.ue_max_power_dbm;
    const double tx_gain = layout.cell_type.ue_antenna_gain_dbi;
    const double rx_gain = layout.cell_type.enb_antenna_gain_dbi;
    const uint64_t base_seed = rng();

    std::vector<double> samples(static_cast<size_t>(n_samples));
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n_samples; ++i) {
        std::seed_seq seq{base_seed & 0xffffffffu, base_seed >> 32,
                          static_cast<uint64_t>(i)};
        std::mt19937_64 local(seq);
        std::uniform_int_distribution<size_t> pick(0, edges.size() - 1);
        const EdgePair& e = edges[pick(local)];
        Vec2 rx_point = e.receiver.sample_uniform(local);
        Vec2 tx_point = e.neighbor.sample_uniform(local);
        LinkSample link{tx_power, tx_gain, rx_gain,
                        distance_m(tx_point, rx_point)};
        samples[static_cast<size_t>(i)] = rx_power_mw(link, params);
    }
    return EmpiricalCdf(std::move(samples));
}

double sample_boundary_interference(const EmpiricalCdf& cdf,
                                    int missing_neighbors,
                                    std::mt19937_64& rng) {
    if (missing_neighbors < 0) {
        throw std::invalid_argument("missing neighbour count must be >= 0");
    }
    double total = 0.0;
    for (int k = 0; k < missing_neighbors; ++k) total += cdf.sample(rng);
    return total;
}

}  // namespace d2d
