#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <sstream>

#include "d2dsim/channel.hpp"

using namespace d2d;

TEST_CASE("path loss at reference and published distances") {
    RadioParams params;
    // 40.7 + 30*log10(d)
    CHECK(path_loss_db(1.0, params) == doctest::Approx(40.7));
    CHECK(path_loss_db(100.0, params) == doctest::Approx(100.7));
    CHECK(path_loss_db(300.0, params) ==
          doctest::Approx(40.7 + 30.0 * std::log10(300.0)));
    CHECK(path_loss_db(300.0, params) == doctest::Approx(115.0).epsilon(1e-3));
    // Clamped below the minimum distance.
    CHECK(path_loss_db(0.0, params) == doctest::Approx(40.7));
    CHECK(path_loss_db(0.3, params) == doctest::Approx(40.7));
}

TEST_CASE("path loss is monotone in distance") {
    RadioParams params;
    double prev = -1e9;
    for (double d = 1.0; d < 1000.0; d *= 1.3) {
        double pl = path_loss_db(d, params);
        CHECK(pl >= prev);
        prev = pl;
    }
}

TEST_CASE("noise power") {
    RadioParams params;
    CHECK(noise_power_dbm(params) ==
          doctest::Approx(-174.0 + 10.0 * std::log10(5e6) + 7.0));
    CHECK(noise_power_dbm(params) == doctest::Approx(-100.0).epsilon(1e-3));

    RadioParams unit;
    unit.bandwidth_hz = 1.0;
    unit.noise_figure_db = 0.0;
    CHECK(noise_power_dbm(unit) == doctest::Approx(-174.0));

    RadioParams wide;
    wide.bandwidth_hz = 10e6;
    CHECK(noise_power_dbm(wide) == doctest::Approx(-97.0).epsilon(1e-3));
}

TEST_CASE("received power examples") {
    RadioParams params;
    CHECK(rx_power_dbm({14.7, 0.0, 0.0, 100.0}, params) ==
          doctest::Approx(-86.0));
    CHECK(rx_power_dbm({23.0, 3.0, 3.0, 300.0}, params) ==
          doctest::Approx(-86.0).epsilon(1e-3));
    CHECK(rx_power_dbm({0.0, 0.0, 0.0, 1.0}, params) == doctest::Approx(-40.7));
}

TEST_CASE("sinr") {
    RadioParams params;
    double noise_mw = dbm_to_mw(noise_power_dbm(params));

    double snr = sinr_linear(-86.0, 0.0, params);
    CHECK(snr == doctest::Approx(dbm_to_mw(-86.0) / noise_mw));
    CHECK(10.0 * std::log10(snr) == doctest::Approx(14.0).epsilon(1e-2));

    // Interference equal to noise halves the ratio.
    CHECK(sinr_linear(-86.0, noise_mw, params) == doctest::Approx(snr / 2.0));

    // One interferer 10 dB above noise: S / (11 N).
    std::vector<double> interferers{10.0 * noise_mw};
    CHECK(sinr_linear(-86.0, interferers, params) ==
          doctest::Approx(snr / 11.0));

    // Antitone in each interferer.
    std::vector<double> more{10.0 * noise_mw, noise_mw};
    CHECK(sinr_linear(-86.0, more, params) <
          sinr_linear(-86.0, interferers, params));
}

TEST_CASE("capacity") {
    CHECK(capacity_bps(0.0, 5e6) == 0.0);
    CHECK(capacity_bps(1.0, 1.0) == doctest::Approx(1.0));
    CHECK(capacity_bps(25.1, 5e6) ==
          doctest::Approx(5e6 * std::log2(26.1)).epsilon(1e-12));
    CHECK(capacity_bps(25.1, 5e6) == doctest::Approx(23.5e6).epsilon(1e-2));
    double prev = -1.0;
    for (double s = 0.0; s < 100.0; s += 3.7) {
        double c = capacity_bps(s, 5e6);
        CHECK(c > prev);
        prev = c;
    }
}

TEST_CASE("dBm/mW round trip") {
    for (double dbm = -200.0; dbm <= 50.0; dbm += 1.7) {
        CHECK(std::abs(dbm - mw_to_dbm(dbm_to_mw(dbm))) < 1e-9);
    }
    CHECK(dbm_to_mw(-std::numeric_limits<double>::infinity()) == 0.0);
}

TEST_CASE("cell-edge UL SNR is 14 dB for all five cell types") {
    // The hidden consistency of the published power/gain/radius rows:
    // with the 40.7 dB reference loss every type calibrates to the same
    // cell-edge SNR.
    RadioParams params;
    for (const CellType& type : cell_type_catalogue()) {
        CAPTURE(type.id);
        LinkSample edge{type.ue_max_power_dbm, type.ue_antenna_gain_dbi,
                        type.enb_antenna_gain_dbi, type.radius_m};
        double snr_db = rx_power_dbm(edge, params) - noise_power_dbm(params);
        CHECK(std::abs(snr_db - 14.0) <= 0.3);
    }
}

TEST_CASE("empirical cdf shape, quantiles and serialization") {
    CHECK_THROWS_AS(EmpiricalCdf({-1.0}), std::invalid_argument);

    EmpiricalCdf cdf({3.0, 1.0, 2.0});
    CHECK(cdf.size() == 3);
    CHECK(cdf.samples() == std::vector<double>{1.0, 2.0, 3.0});
    CHECK(cdf.quantile(0.0) == 1.0);
    CHECK(cdf.quantile(0.5) == 2.0);
    CHECK(cdf.quantile(0.999) == 3.0);

    std::mt19937_64 rng(1);
    for (int i = 0; i < 100; ++i) {
        double v = cdf.sample(rng);
        CHECK(v >= 1.0);
        CHECK(v <= 3.0);
    }

    std::ostringstream os;
    cdf.save(os);
    std::istringstream is(os.str());
    EmpiricalCdf restored = EmpiricalCdf::load(is);
    CHECK(restored.samples() == cdf.samples());
}

TEST_CASE("boundary interference draws") {
    EmpiricalCdf degenerate({5.0});
    std::mt19937_64 rng(2);
    CHECK(sample_boundary_interference(degenerate, 0, rng) == 0.0);
    CHECK(sample_boundary_interference(degenerate, 1, rng) == 5.0);
    EmpiricalCdf two({2.0});
    CHECK(sample_boundary_interference(two, 3, rng) == 6.0);

    EmpiricalCdf empty;
    CHECK(sample_boundary_interference(empty, 0, rng) == 0.0);
    CHECK_THROWS_AS(sample_boundary_interference(empty, 1, rng),
                    std::logic_error);
}

TEST_CASE("edge cdf calibration") {
    RadioParams params;
    CellLayout t5 = build_layout(cell_type_by_id(5));

    std::mt19937_64 rng(3);
    CHECK_THROWS_AS(calibrate_edge_cdf(t5, params, rng, 99),
                    std::invalid_argument);

    std::mt19937_64 rng_a(3);
    EmpiricalCdf cdf = calibrate_edge_cdf(t5, params, rng_a, 100);
    CHECK(cdf.size() == 100);
    for (double v : cdf.samples()) CHECK(v >= 0.0);

    // Silenced transmitters produce an all-zero CDF.
    CellLayout silent = t5;
    silent.cell_type.ue_max_power_dbm =
        -std::numeric_limits<double>::infinity();
    std::mt19937_64 rng_s(3);
    EmpiricalCdf zeros = calibrate_edge_cdf(silent, params, rng_s, 100);
    for (double v : zeros.samples()) CHECK(v == 0.0);

    // +3 dB on every transmitter shifts the whole distribution up.
    CellLayout louder = t5;
    louder.cell_type.ue_max_power_dbm += 3.0;
    std::mt19937_64 rng_b(3);
    EmpiricalCdf boosted = calibrate_edge_cdf(louder, params, rng_b, 2000);
    std::mt19937_64 rng_c(3);
    EmpiricalCdf baseline = calibrate_edge_cdf(t5, params, rng_c, 2000);
    CHECK(baseline.median() < boosted.median());

    // The single-cell layout calibrates through the synthetic neighbour.
    CellLayout t1 = build_layout(cell_type_by_id(1));
    std::mt19937_64 rng_d(3);
    EmpiricalCdf fallback = calibrate_edge_cdf(t1, params, rng_d, 500);
    CHECK(fallback.size() == 500);
    CHECK(fallback.median() > 0.0);
}
