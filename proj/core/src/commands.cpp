#include "oamlink/commands.hpp"

#include <cmath>
#include <filesystem>
#include <numbers>
#include <sstream>

#include <nlohmann/json.hpp>

#include "oamlink/io_util.hpp"
#include "oamlink/link.hpp"

namespace oamlink {
namespace {

using nlohmann::json;

constexpr const char* kToolName = "oamlink";
constexpr const char* kToolVersion = "1.0.0";
constexpr int kSchemaVersion = 1;
constexpr double kFecThresholdBer = 3.8e-3;
constexpr double kRadToDeg = 180.0 / std::numbers::pi;
constexpr double kDegToRad = std::numbers::pi / 180.0;

std::string mode_label(const std::vector<int>& modes) {
    std::string s = "oam";
    for (int m : modes) s += "_" + std::to_string(m);
    return s;
}

json base_manifest(const std::string& command, const Scenario& s) {
    json m;
    m["schema_version"] = kSchemaVersion;
    m["tool"] = kToolName;
    m["tool_version"] = kToolVersion;
    m["command"] = command;
    m["timestamp_utc"] = iso8601_utc_now();
    m["seed"] = s.seed;
    m["scenario_text"] = serialize_scenario(s);
    return m;
}

CommandResult finish(json manifest, const std::string& out_dir, const std::string& base,
                     const std::string& csv, std::string summary) {
    namespace fs = std::filesystem;
    fs::path csv_path = fs::path(out_dir) / (base + ".csv");
    fs::path man_path = fs::path(out_dir) / (base + ".manifest.json");
    atomic_write(csv_path, csv);
    manifest["outputs"] = json::array(
        {{{"file", csv_path.filename().string()}, {"fnv1a64", fnv1a64_hex(csv)}}});
    atomic_write(man_path, manifest.dump(2) + "\n");
    return {{csv_path.string(), man_path.string()}, std::move(summary)};
}

}  // namespace

CommandResult cmd_pattern_cut(const Scenario& s, const std::string& out_dir,
                              const PatternCutOptions& opt) {
    validate_scenario(s);
    WaveParameters wave = scenario_wave(s);

    int mode = 0;
    if (opt.mode) mode = *opt.mode;
    else if (s.tx_type == TxType::NtcsOam) mode = s.modes.front();

    BeamSpec spec = mode == 0 ? scenario_horn_spec(s)
                              : scenario_ntcs_specs(s, std::vector<int>{mode}).front();

    if (!(opt.az_step_deg > 0.0)) throw ValidationError("azimuth step must be positive");
    if (!(opt.distance_m > 0.0)) throw ValidationError("distance must be positive");
    double span = opt.az_stop_deg - opt.az_start_deg;
    auto n = static_cast<std::size_t>(std::floor(span / opt.az_step_deg + 0.5));
    if (span <= 0.0 || n < 5)
        throw ValidationError("azimuth grid must contain at least five samples");

    double theta_deg = opt.theta_deg ? *opt.theta_deg
                                     : center_mode_peak_polar(spec, wave) * kRadToDeg;

    std::vector<double> az_deg(n), az_rad(n);
    for (std::size_t i = 0; i < n; ++i) {
        az_deg[i] = opt.az_start_deg + static_cast<double>(i) * opt.az_step_deg;
        az_rad[i] = az_deg[i] * kDegToRad;
    }

    PatternCut cut = pattern_cut(spec, wave, theta_deg * kDegToRad, az_rad,
                                 opt.distance_m, s.truncation_order);
    double slope = main_lobe_phase_slope(cut);

    std::ostringstream csv;
    csv << "azimuth_deg,amplitude_linear,amplitude_db,phase_deg_unwrapped\n";
    for (std::size_t i = 0; i < n; ++i) {
        csv << format_sig(az_deg[i]) << ',' << format_sig(cut.amplitude[i]) << ','
            << format_sig(20.0 * std::log10(cut.amplitude[i])) << ','
            << format_sig(cut.phase[i] * kRadToDeg) << '\n';
    }

    json m = base_manifest("pattern-cut", s);
    m["options"] = {{"mode", mode},
                    {"theta_deg", theta_deg},
                    {"az_start_deg", opt.az_start_deg},
                    {"az_stop_deg", opt.az_stop_deg},
                    {"az_step_deg", opt.az_step_deg},
                    {"distance_m", opt.distance_m}};

    std::ostringstream sum;
    sum << "pattern-cut: "
        << (mode == 0 ? std::string("plane wave") : "mode " + std::to_string(mode))
        << ", theta " << format_sig(theta_deg) << " deg, recovered slope "
        << format_sig(slope);
    return finish(std::move(m), out_dir, "pattern_cut", csv.str(), sum.str());
}

CommandResult cmd_capacity_sweep(const Scenario& s, const std::string& out_dir) {
    validate_scenario(s);
    if (s.snr_grid_db.empty()) throw ValidationError("snr_grid_db must be nonempty");
    if (s.tx_count != s.rx_count)
        throw ValidationError("capacity sweep needs a square array");

    std::vector<std::string> labels{"horn"};
    std::vector<ChannelMatrix> channels;
    channels.push_back(scenario_channel_square(s, s.tx_count, {}));
    for (const auto& set : s.mode_sets) {
        if (static_cast<int>(set.size()) != s.tx_count) continue;
        labels.push_back(mode_label(set));
        channels.push_back(scenario_channel_square(s, s.tx_count, set));
    }

    std::ostringstream csv;
    csv << "snr_db";
    for (const auto& l : labels) csv << ',' << l;
    csv << '\n';
    for (double snr_db : s.snr_grid_db) {
        double snr = std::pow(10.0, snr_db / 10.0);
        csv << format_sig(snr_db);
        for (const auto& H : channels) csv << ',' << format_sig(shannon_capacity(H, snr));
        csv << '\n';
    }

    json m = base_manifest("capacity-sweep", s);
    std::ostringstream sum;
    sum << "capacity-sweep: " << labels.size() << " configurations, "
        << s.snr_grid_db.size() << " snr points";
    return finish(std::move(m), out_dir, "capacity_sweep", csv.str(), sum.str());
}

CommandResult cmd_condition_table(const Scenario& s, const std::string& out_dir) {
    validate_scenario(s);

    std::ostringstream csv;
    csv << "size,configuration,eta_cond,rho,flag\n";
    std::size_t rows = 0;
    for (int size : s.sizes) {
        auto emit = [&](const std::string& label, const ChannelMatrix& H) {
            double eta = condition_number(H);
            csv << size << ',' << label << ',' << format_sig(eta) << ','
                << format_sig(correlation_coefficient(H)) << ','
                << (numerically_singular(eta) ? "numerically_singular" : "") << '\n';
            ++rows;
        };
        emit("horn", scenario_channel_square(s, size, {}));
        for (const auto& set : s.mode_sets) {
            if (static_cast<int>(set.size()) != size) continue;
            emit(mode_label(set), scenario_channel_square(s, size, set));
        }
    }

    json m = base_manifest("condition-table", s);
    std::ostringstream sum;
    sum << "condition-table: " << rows << " rows";
    return finish(std::move(m), out_dir, "condition_table", csv.str(), sum.str());
}

CommandResult cmd_ber_sweep(const Scenario& s, const std::string& out_dir) {
    validate_scenario(s);
    if (s.snr_grid_db.empty()) throw ValidationError("snr_grid_db must be nonempty");

    ChannelMatrix H = scenario_channel(s);
    FrameSchedule sched = scenario_schedule(s);
    std::vector<LinkResult> results =
        run_link_sim(H, sched, s.equalizer, s.csi, s.snr_grid_db, s.trials, s.seed);
    double cond = condition_number(H);

    std::ostringstream csv;
    csv << "snr_db,ber_stream1,ber_stream2,rho,cond_number,trials,seed\n";
    for (const LinkResult& r : results) {
        double b1 = r.ber_per_stream.at(0);
        double b2 = r.ber_per_stream.size() > 1 ? r.ber_per_stream[1] : b1;
        csv << format_sig(r.snr_db) << ',' << format_sig(b1) << ',' << format_sig(b2)
            << ',' << format_sig(r.rho_measured) << ',' << format_sig(cond) << ','
            << r.trials << ',' << s.seed << '\n';
    }

    json m = base_manifest("ber-sweep", s);
    m["fec_threshold_ber"] = kFecThresholdBer;
    std::ostringstream sum;
    sum << "ber-sweep: " << H.entries.n_rows << "x" << H.entries.n_cols << " channel, "
        << s.snr_grid_db.size() << " snr points, " << s.trials << " trials";
    return finish(std::move(m), out_dir, "ber_sweep", csv.str(), sum.str());
}

LoadedManifest load_manifest(const std::string& path) {
    json m;
    try {
        m = json::parse(read_file(path));
    } catch (const json::exception& e) {
        throw ParseError(std::string("manifest: ") + e.what());
    }
    if (!m.is_object() || !m.contains("command") || !m.contains("scenario_text"))
        throw ValidationError("manifest missing command or scenario_text");
    if (m.value("schema_version", 0) != kSchemaVersion)
        throw ValidationError("unsupported manifest schema_version");

    LoadedManifest out;
    out.command = m["command"].get<std::string>();
    out.scenario = parse_scenario_text(m["scenario_text"].get<std::string>());
    if (m.contains("options")) {
        const json& o = m["options"];
        out.pattern_options.mode = o.value("mode", 0);
        out.pattern_options.theta_deg = o.value("theta_deg", 0.0);
        out.pattern_options.az_start_deg = o.value("az_start_deg", -180.0);
        out.pattern_options.az_stop_deg = o.value("az_stop_deg", 180.0);
        out.pattern_options.az_step_deg = o.value("az_step_deg", 0.25);
        out.pattern_options.distance_m = o.value("distance_m", 1000.0);
    }
    return out;
}

Scenario scenario_from_manifest(const std::string& path) {
    return load_manifest(path).scenario;
}

}  // namespace oamlink
