// Link budget, noise, SINR, Shannon capacity and the boundary-edge
// empirical interference CDF.
#pragma once

#include <iosfwd>
#include <random>
#include <span>
#include <vector>

#include "d2dsim/topology.hpp"

namespace d2d {

struct RadioParams {
    double carrier_freq_ghz = 2.6;
    double bandwidth_hz = 5e6;
    double noise_density_dbm_hz = -174.0;
    double noise_figure_db = 7.0;
    double pathloss_exponent = 3.0;
    // Free-space loss at the 1 m reference distance for 2.6 GHz.
    double pathloss_ref_db = 40.7;
    double min_distance_m = 1.0;
};

struct LinkSample {
    double tx_power_dbm = 0.0;
    double tx_gain_dbi = 0.0;
    double rx_gain_dbi = 0.0;
    double distance_m = 0.0;
};

double dbm_to_mw(double dbm);
double mw_to_dbm(double mw);

// pathloss_ref_db + 10*n*log10(max(d, min_distance) / 1 m)
double path_loss_db(double distance_m, const RadioParams& params);

// noise_density + 10*log10(bandwidth) + noise_figure
double noise_power_dbm(const RadioParams& params);

double rx_power_dbm(const LinkSample& link, const RadioParams& params);
double rx_power_mw(const LinkSample& link, const RadioParams& params);

double sinr_linear(double signal_dbm, double total_interference_mw,
                   const RadioParams& params);
double sinr_linear(double signal_dbm, std::span<const double> interferers_mw,
                   const RadioParams& params);

// bandwidth * log2(1 + sinr)
double capacity_bps(double sinr, double bandwidth_hz);

// Empirical distribution of single-neighbour interference powers (mW),
// sampled by its piecewise-constant inverse CDF.
class EmpiricalCdf {
  public:
    EmpiricalCdf() = default;
    explicit EmpiricalCdf(std::vector<double> samples_mw);

    bool empty() const { return samples_.empty(); }
    size_t size() const { return samples_.size(); }
    const std::vector<double>& samples() const { return samples_; }

    double quantile(double u) const;           // u in [0, 1)
    double sample(std::mt19937_64& rng) const;
    double median() const;

    void save(std::ostream& os) const;          // one mW value per line
    static EmpiricalCdf load(std::istream& is);

  private:
    std::vector<double> samples_;  // sorted ascending, nonnegative
};

// Monte-Carlo calibration of the interference a cell receives from one
// adjacent co-channel cell: uniform receiving point in a cell, uniform
// UL transmitter at UE max power in an edge-sharing neighbour. Layouts
// without adjacency (the single-cell case) fall back to a synthetic
// neighbour hexagon one cell diameter away. Parallel over samples; each
// sample derives its own engine from the seed, so the result is identical
// at any thread count.
EmpiricalCdf calibrate_edge_cdf(const CellLayout& layout,
                                const RadioParams& params,
                                std::mt19937_64& rng, int n_samples);

// Sum of `missing_neighbors` i.i.d. inverse-CDF draws (mW).
double sample_boundary_interference(const EmpiricalCdf& cdf,
                                    int missing_neighbors,
                                    std::mt19937_64& rng);

}  // namespace d2d
