#include "d2dsim/experiment.hpp"

#include <charconv>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace d2d {

namespace {

std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

long parse_long(const std::string& key, const std::string& value, long lo,
                long hi) {
    long out = 0;
    auto res = std::from_chars(value.data(), value.data() + value.size(), out);
    if (res.ec != std::errc{} || res.ptr != value.data() + value.size() ||
        out < lo || out > hi) {
        throw std::invalid_argument("config key '" + key + "': expected an integer in [" +
                                    std::to_string(lo) + ", " +
                                    std::to_string(hi) + "], got '" + value +
                                    "'");
    }
    return out;
}

double parse_weight(const std::string& key, const std::string& value) {
    double out = 0.0;
    auto res = std::from_chars(value.data(), value.data() + value.size(), out);
    if (res.ec != std::errc{} || res.ptr != value.data() + value.size() ||
        !(out >= 0.0)) {
        throw std::invalid_argument("config key '" + key +
                                    "': expected a nonnegative number, got '" +
                                    value + "'");
    }
    return out;
}

}  // namespace

SharingScheme parse_scheme(const std::string& text) {
    if (text == "overlay") return SharingScheme::Overlay;
    if (text == "underlay1") return SharingScheme::Underlay1;
    if (text == "underlay2") return SharingScheme::Underlay2;
    throw std::invalid_argument(
        "config key 'scheme': expected overlay|underlay1|underlay2, got '" +
        text + "'");
}

SchedulerPolicy parse_policy(const std::string& text) {
    if (text == "round_robin") return SchedulerPolicy::RoundRobin;
    if (text == "proportional_fair") return SchedulerPolicy::ProportionalFairness;
    throw std::invalid_argument(
        "config key 'scheduler': expected round_robin|proportional_fair, "
        "got '" + text + "'");
}

std::string to_string(SchedulerPolicy policy) {
    return policy == SchedulerPolicy::RoundRobin ? "round_robin"
                                                 : "proportional_fair";
}

RunConfig ExperimentConfig::to_run_config(int replication) const {
    RunConfig run;
    run.scheme = scheme;
    run.cell_type = cell_type;
    run.n_cues = n_cues;
    run.n_pairs = n_pairs;
    run.snapshots = snapshots;
    run.seed = seed + static_cast<uint64_t>(replication);
    run.policy = policy;
    run.a1 = a1;
    run.a2 = a2;
    run.calibration_samples = calibration_samples;
    return run;
}

void apply_override(ExperimentConfig& config, const std::string& key,
                    const std::string& value) {
    if (key == "scheme") {
        config.scheme = parse_scheme(value);
    } else if (key == "cell_type") {
        config.cell_type = static_cast<int>(parse_long(key, value, 1, 5));
    } else if (key == "cues") {
        config.n_cues = static_cast<int>(parse_long(key, value, 0, 100000));
    } else if (key == "pairs") {
        config.n_pairs = static_cast<int>(parse_long(key, value, 0, 100000));
    } else if (key == "snapshots") {
        config.snapshots = static_cast<int>(parse_long(key, value, 1, 10000000));
    } else if (key == "replications") {
        config.replications = static_cast<int>(parse_long(key, value, 1, 100000));
    } else if (key == "seed") {
        config.seed = static_cast<uint64_t>(
            parse_long(key, value, 0, std::numeric_limits<long>::max()));
    } else if (key == "scheduler") {
        config.policy = parse_policy(value);
    } else if (key == "out") {
        config.out_path = value;
    } else if (key == "a1") {
        config.a1 = parse_weight(key, value);
    } else if (key == "a2") {
        config.a2 = parse_weight(key, value);
    } else if (key == "calibration_samples") {
        config.calibration_samples =
            static_cast<int>(parse_long(key, value, 100, 10000000));
    } else {
        throw std::invalid_argument("unknown config key '" + key + "'");
    }
}

void validate_config(const ExperimentConfig& config) {
    cell_type_by_id(config.cell_type);
    if (config.n_cues + config.n_pairs < 1) {
        throw std::invalid_argument("config needs at least one CUE or pair");
    }
    if (config.snapshots < 1) {
        throw std::invalid_argument("config needs snapshots >= 1");
    }
    if (config.replications < 1) {
        throw std::invalid_argument("config needs replications >= 1");
    }
}

ExperimentConfig parse_config(std::istream& is) {
    ExperimentConfig config;
    std::string line;
    int line_no = 0;
    while (std::getline(is, line)) {
        ++line_no;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        auto last = line.find_last_not_of(" \t\r");
        std::string body = line.substr(first, last - first + 1);
        auto eq = body.find('=');
        if (eq == std::string::npos) {
            throw std::invalid_argument("config line " + std::to_string(line_no) +
                                        ": expected key=value, got '" + body +
                                        "'");
        }
        std::string key = body.substr(0, eq);
        std::string value = body.substr(eq + 1);
        auto trim = [](std::string& s) {
            auto b = s.find_first_not_of(" \t");
            auto e = s.find_last_not_of(" \t");
            s = b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        trim(key);
        trim(value);
        apply_override(config, key, value);
    }
    validate_config(config);
    return config;
}

ExperimentConfig parse_config_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open config file '" + path + "'");
    return parse_config(is);
}

std::string config_to_string(const ExperimentConfig& config) {
    std::ostringstream os;
    os << "scheme=" << to_string(config.scheme) << '\n'
       << "cell_type=" << config.cell_type << '\n'
       << "cues=" << config.n_cues << '\n'
       << "pairs=" << config.n_pairs << '\n'
       << "snapshots=" << config.snapshots << '\n'
       << "replications=" << config.replications << '\n'
       << "seed=" << config.seed << '\n'
       << "scheduler=" << to_string(config.policy) << '\n'
       << "out=" << config.out_path << '\n'
       << "a1=" << format_double(config.a1) << '\n'
       << "a2=" << format_double(config.a2) << '\n'
       << "calibration_samples=" << config.calibration_samples << '\n';
    return os.str();
}

const char* const kCsvHeader =
    "scheme,cell_type,enb_density,n_cues,n_pairs,seed,avg_total_ul_bps,"
    "avg_pair_bps,avg_cue_dl_bps,g_dir_pct,g_off_pct,g_tot_pct";

std::string csv_line(const RowRecord& row) {
    std::string out = to_string(row.scheme);
    out += ',';
    out += std::to_string(row.cell_type);
    out += ',';
    out += format_double(row.enb_density);
    out += ',';
    out += std::to_string(row.n_cues);
    out += ',';
    out += std::to_string(row.n_pairs);
    out += ',';
    out += std::to_string(row.seed);
    out += ',';
    out += format_double(row.avg_total_ul_bps);
    out += ',';
    out += format_double(row.avg_pair_bps);
    out += ',';
    out += format_double(row.avg_cue_dl_bps);
    out += ',';
    out += format_double(row.g_dir_pct);
    out += ',';
    out += format_double(row.g_off_pct);
    out += ',';
    out += format_double(row.g_tot_pct);
    return out;
}

void emit_csv(const std::vector<RowRecord>& rows, std::ostream& os) {
    os << kCsvHeader << '\n';
    for (const RowRecord& row : rows) os << csv_line(row) << '\n';
}

void emit_csv_file(const std::vector<RowRecord>& rows,
                   const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write to '" + path + "'");
    emit_csv(rows, os);
    if (!os.good()) throw std::runtime_error("write failure on '" + path + "'");
}

RowRecord run_replication(const ExperimentConfig& config, int replication) {
    RunConfig run = config.to_run_config(replication);
    RunResult enabled = run_simulation(run);
    RunResult disabled = run_disabled_baseline(run);
    GainReport gains =
        make_gain_report(enabled, disabled, config.a1, config.a2);

    RowRecord row;
    row.scheme = config.scheme;
    row.cell_type = config.cell_type;
    row.enb_density = cell_type_by_id(config.cell_type).enb_density_per_km2;
    row.n_cues = config.n_cues;
    row.n_pairs = config.n_pairs;
    row.seed = run.seed;
    row.avg_total_ul_bps = enabled.avg_total_ul_bps;
    row.avg_pair_bps = enabled.avg_pair_bps;
    row.avg_cue_dl_bps = enabled.avg_cue_dl_bps;
    row.g_dir_pct = gains.g_dir_pct;
    row.g_off_pct = gains.g_off_pct;
    row.g_tot_pct = gains.g_tot_pct;
    return row;
}

std::vector<ExperimentConfig> preset_densification_sweep(
    int total_ues, const ExperimentConfig& base) {
    if (total_ues < 3 || total_ues % 3 != 0) {
        throw std::invalid_argument(
            "densification sweep needs a UE total divisible by 3 "
            "(cues = pairs = total/3)");
    }
    std::vector<ExperimentConfig> configs;
    for (const CellType& type : cell_type_catalogue()) {
        for (SharingScheme scheme : {SharingScheme::Overlay,
                                     SharingScheme::Underlay1,
                                     SharingScheme::Underlay2}) {
            ExperimentConfig config = base;
            config.scheme = scheme;
            config.cell_type = type.id;
            config.n_cues = total_ues / 3;
            config.n_pairs = total_ues / 3;
            configs.push_back(config);
        }
    }
    return configs;
}

std::vector<ExperimentConfig> preset_ue_density_sweep(
    const ExperimentConfig& base) {
    const int pair_counts[] = {12, 24, 36, 48};
    std::vector<ExperimentConfig> configs;
    for (const CellType& type : cell_type_catalogue()) {
        for (int pairs : pair_counts) {
            ExperimentConfig config = base;
            config.scheme = SharingScheme::Overlay;
            config.cell_type = type.id;
            config.n_cues = 36;
            config.n_pairs = pairs;
            configs.push_back(config);
        }
    }
    return configs;
}

}  // namespace d2d
