#include "oamlink/scenario.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

namespace oamlink {

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;

const std::set<std::string>& known_keys() {
    static const std::set<std::string> keys = {
        "frequency_ghz", "tx_count", "rx_count", "tx_spacing_m", "rx_spacing_m",
        "range_m", "height_m", "tx_type", "modes", "mode_sets", "sizes",
        "waveguide_wide_side_m", "waveguide_narrow_side_m", "arc_angle_deg",
        "boresight_deg", "peak_gain_db", "horn_beamwidth_deg", "beta",
        "snr_grid_db", "trials", "seed", "equalizer", "aim", "csi",
        "pilot_len", "payload_len", "truncation_order"};
    return keys;
}

template <typename T>
T get_as(const YAML::Node& node, const std::string& key) {
    try {
        return node.as<T>();
    } catch (const YAML::Exception&) {
        throw ParseError("key '" + key + "': wrong value type");
    }
}

[[noreturn]] void invalid(const std::string& what) { throw ValidationError(what); }

}  // namespace

void validate_scenario(const Scenario& s) {
    if (!(s.frequency_ghz > 0.0)) invalid("frequency_ghz must be positive");
    if (s.tx_count < 1 || s.rx_count < 1) invalid("antenna counts must be >= 1");
    if (!(s.tx_spacing_m > 0.0) || !(s.rx_spacing_m > 0.0))
        invalid("antenna spacings must be positive");
    if (!(s.range_m > 0.0) || !(s.height_m > 0.0))
        invalid("range_m and height_m must be positive");

    if (!(s.waveguide_wide_side_m > s.waveguide_narrow_side_m) ||
        !(s.waveguide_narrow_side_m > 0.0))
        invalid("waveguide sides must satisfy s_w > s_n > 0");
    double lam = kSpeedOfLight / (s.frequency_ghz * 1e9);
    if (lam >= 2.0 * s.waveguide_wide_side_m)
        invalid("wavelength at or beyond waveguide cutoff (lambda0 >= 2 s_w)");

    if (s.tx_type == TxType::NtcsOam) {
        if (static_cast<int>(s.modes.size()) != s.tx_count)
            invalid("modes list length must equal tx_count for ntcs_oam");
        for (int m : s.modes)
            if (m == 0) invalid("equivalent modes must be nonzero");
    }
    for (const auto& set : s.mode_sets) {
        if (set.empty()) invalid("mode_sets entries must be nonempty");
        for (int m : set)
            if (m == 0) invalid("equivalent modes must be nonzero");
    }
    for (int sz : s.sizes)
        if (sz < 1) invalid("sizes entries must be >= 1");

    if (!(s.arc_angle_deg > 0.0) || s.arc_angle_deg > 360.0)
        invalid("arc_angle_deg must lie in (0, 360]");
    if (!(s.horn_beamwidth_deg > 0.0) || s.horn_beamwidth_deg >= 180.0)
        invalid("horn_beamwidth_deg must lie in (0, 180)");
    if (!std::isfinite(s.peak_gain_db)) invalid("peak_gain_db must be finite");
    if (!(s.beta > 0.0)) invalid("beta must be positive");

    if (s.snr_grid_db.empty()) invalid("snr_grid_db must be nonempty");
    for (std::size_t i = 1; i < s.snr_grid_db.size(); ++i)
        if (!(s.snr_grid_db[i] > s.snr_grid_db[i - 1]))
            invalid("snr_grid_db must be strictly increasing");
    if (s.trials < 1) invalid("trials must be >= 1");
    if (s.pilot_len < 1 || s.payload_len < 1)
        invalid("pilot_len and payload_len must be >= 1");
    if (s.truncation_order < 1) invalid("truncation_order must be >= 1");
}

Scenario parse_scenario_text(const std::string& text) {
    YAML::Node root;
    try {
        root = YAML::Load(text);
    } catch (const YAML::Exception& e) {
        std::ostringstream msg;
        msg << "line " << e.mark.line + 1 << ": " << e.msg;
        throw ParseError(msg.str());
    }
    if (!root.IsMap()) throw ParseError("scenario document must be a key/value map");

    Scenario s;
    for (const auto& item : root) {
        std::string key = item.first.as<std::string>();
        if (!known_keys().count(key)) invalid("unknown key '" + key + "'");
        const YAML::Node& v = item.second;

        if (key == "frequency_ghz") s.frequency_ghz = get_as<double>(v, key);
        else if (key == "tx_count") s.tx_count = get_as<int>(v, key);
        else if (key == "rx_count") s.rx_count = get_as<int>(v, key);
        else if (key == "tx_spacing_m") s.tx_spacing_m = get_as<double>(v, key);
        else if (key == "rx_spacing_m") s.rx_spacing_m = get_as<double>(v, key);
        else if (key == "range_m") s.range_m = get_as<double>(v, key);
        else if (key == "height_m") s.height_m = get_as<double>(v, key);
        else if (key == "tx_type") {
            std::string t = get_as<std::string>(v, key);
            if (t == "horn") s.tx_type = TxType::Horn;
            else if (t == "ntcs_oam") s.tx_type = TxType::NtcsOam;
            else invalid("tx_type must be 'horn' or 'ntcs_oam'");
        } else if (key == "modes") s.modes = get_as<std::vector<int>>(v, key);
        else if (key == "mode_sets")
            s.mode_sets = get_as<std::vector<std::vector<int>>>(v, key);
        else if (key == "sizes") s.sizes = get_as<std::vector<int>>(v, key);
        else if (key == "waveguide_wide_side_m")
            s.waveguide_wide_side_m = get_as<double>(v, key);
        else if (key == "waveguide_narrow_side_m")
            s.waveguide_narrow_side_m = get_as<double>(v, key);
        else if (key == "arc_angle_deg") s.arc_angle_deg = get_as<double>(v, key);
        else if (key == "boresight_deg") s.boresight_deg = get_as<double>(v, key);
        else if (key == "peak_gain_db") s.peak_gain_db = get_as<double>(v, key);
        else if (key == "horn_beamwidth_deg")
            s.horn_beamwidth_deg = get_as<double>(v, key);
        else if (key == "beta") s.beta = get_as<double>(v, key);
        else if (key == "snr_grid_db")
            s.snr_grid_db = get_as<std::vector<double>>(v, key);
        else if (key == "trials") s.trials = get_as<std::uint64_t>(v, key);
        else if (key == "seed") s.seed = get_as<std::uint64_t>(v, key);
        else if (key == "equalizer") {
            std::string t = get_as<std::string>(v, key);
            if (t == "raw") s.equalizer = EqualizerMode::Raw;
            else if (t == "zero_forcing") s.equalizer = EqualizerMode::ZeroForcing;
            else invalid("equalizer must be 'raw' or 'zero_forcing'");
        } else if (key == "aim") {
            std::string t = get_as<std::string>(v, key);
            if (t == "centroid") s.aim = AimMode::Centroid;
            else if (t == "paired") s.aim = AimMode::Paired;
            else invalid("aim must be 'centroid' or 'paired'");
        } else if (key == "csi") {
            std::string t = get_as<std::string>(v, key);
            if (t == "estimated") s.csi = CsiMode::Estimated;
            else if (t == "perfect") s.csi = CsiMode::Perfect;
            else invalid("csi must be 'estimated' or 'perfect'");
        } else if (key == "pilot_len") s.pilot_len = get_as<int>(v, key);
        else if (key == "payload_len") s.payload_len = get_as<int>(v, key);
        else if (key == "truncation_order") s.truncation_order = get_as<int>(v, key);
    }
    validate_scenario(s);
    return s;
}

Scenario parse_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open scenario file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario_text(buf.str());
}

namespace {

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

template <typename T>
std::string list_str(const std::vector<T>& v) {
    std::ostringstream os;
    os << "[";
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) os << ", ";
        if constexpr (std::is_same_v<T, double>) os << fmt(v[i]);
        else os << v[i];
    }
    os << "]";
    return os.str();
}

}  // namespace

std::string serialize_scenario(const Scenario& s) {
    std::ostringstream os;
    os << "frequency_ghz: " << fmt(s.frequency_ghz) << "\n";
    os << "tx_count: " << s.tx_count << "\n";
    os << "rx_count: " << s.rx_count << "\n";
    os << "tx_spacing_m: " << fmt(s.tx_spacing_m) << "\n";
    os << "rx_spacing_m: " << fmt(s.rx_spacing_m) << "\n";
    os << "range_m: " << fmt(s.range_m) << "\n";
    os << "height_m: " << fmt(s.height_m) << "\n";
    os << "tx_type: " << (s.tx_type == TxType::Horn ? "horn" : "ntcs_oam") << "\n";
    if (!s.modes.empty()) os << "modes: " << list_str(s.modes) << "\n";
    if (!s.mode_sets.empty()) {
        os << "mode_sets:\n";
        for (const auto& set : s.mode_sets) os << "  - " << list_str(set) << "\n";
    }
    os << "sizes: " << list_str(s.sizes) << "\n";
    os << "waveguide_wide_side_m: " << fmt(s.waveguide_wide_side_m) << "\n";
    os << "waveguide_narrow_side_m: " << fmt(s.waveguide_narrow_side_m) << "\n";
    os << "arc_angle_deg: " << fmt(s.arc_angle_deg) << "\n";
    os << "boresight_deg: " << fmt(s.boresight_deg) << "\n";
    os << "peak_gain_db: " << fmt(s.peak_gain_db) << "\n";
    os << "horn_beamwidth_deg: " << fmt(s.horn_beamwidth_deg) << "\n";
    os << "beta: " << fmt(s.beta) << "\n";
    if (!s.snr_grid_db.empty()) os << "snr_grid_db: " << list_str(s.snr_grid_db) << "\n";
    os << "trials: " << s.trials << "\n";
    os << "seed: " << s.seed << "\n";
    os << "equalizer: " << (s.equalizer == EqualizerMode::Raw ? "raw" : "zero_forcing")
       << "\n";
    os << "aim: " << (s.aim == AimMode::Centroid ? "centroid" : "paired") << "\n";
    os << "csi: " << (s.csi == CsiMode::Estimated ? "estimated" : "perfect") << "\n";
    os << "pilot_len: " << s.pilot_len << "\n";
    os << "payload_len: " << s.payload_len << "\n";
    os << "truncation_order: " << s.truncation_order << "\n";
    return os.str();
}

WaveParameters scenario_wave(const Scenario& s) {
    return WaveParameters::from_frequency(s.frequency_ghz * 1e9);
}

WaveguideSpec scenario_waveguide(const Scenario& s) {
    return {s.waveguide_wide_side_m, s.waveguide_narrow_side_m};
}

ArrayGeometry scenario_geometry(const Scenario& s) {
    ArrayGeometry g = build_uniform_linear_geometry(
        static_cast<std::size_t>(s.tx_count), static_cast<std::size_t>(s.rx_count),
        s.tx_spacing_m, s.rx_spacing_m, s.range_m, s.height_m);
    if (s.aim == AimMode::Paired) apply_paired_aiming(g);
    return g;
}

ArrayGeometry scenario_geometry_square(const Scenario& s, int size) {
    ArrayGeometry g = build_uniform_linear_geometry(
        static_cast<std::size_t>(size), static_cast<std::size_t>(size),
        s.tx_spacing_m, s.rx_spacing_m, s.range_m, s.height_m);
    if (s.aim == AimMode::Paired) apply_paired_aiming(g);
    return g;
}

BeamSpec scenario_horn_spec(const Scenario& s) {
    BeamSpec spec;
    spec.kind = BeamKind::PlaneWave;
    spec.peak_gain_db = s.peak_gain_db;
    spec.beamwidth_deg = s.horn_beamwidth_deg;
    return spec;
}

std::vector<BeamSpec> scenario_ntcs_specs(const Scenario& s,
                                          const std::vector<int>& modes) {
    WaveParameters wave = scenario_wave(s);
    WaveguideSpec wg = scenario_waveguide(s);
    std::vector<BeamSpec> out;
    out.reserve(modes.size());
    for (int le : modes)
        out.push_back(make_ntcs_spec(le, wave, wg, s.arc_angle_deg * kDegToRad,
                                     s.boresight_deg * kDegToRad, s.peak_gain_db));
    return out;
}

FrameSchedule scenario_schedule(const Scenario& s) {
    return {static_cast<std::size_t>(s.pilot_len),
            static_cast<std::size_t>(s.payload_len)};
}

ChannelMatrix scenario_channel(const Scenario& s) {
    WaveParameters wave = scenario_wave(s);
    ArrayGeometry geom = scenario_geometry(s);
    BeamSpec rx_model = scenario_horn_spec(s);
    if (s.tx_type == TxType::Horn)
        return plane_wave_channel(geom, wave, s.beta, scenario_horn_spec(s), rx_model);
    return oam_channel(geom, wave, s.beta, scenario_ntcs_specs(s, s.modes), rx_model,
                       s.truncation_order);
}

ChannelMatrix scenario_channel_square(const Scenario& s, int size,
                                      const std::vector<int>& modes) {
    WaveParameters wave = scenario_wave(s);
    ArrayGeometry geom = scenario_geometry_square(s, size);
    BeamSpec rx_model = scenario_horn_spec(s);
    if (modes.empty())
        return plane_wave_channel(geom, wave, s.beta, scenario_horn_spec(s), rx_model);
    if (static_cast<int>(modes.size()) != size)
        throw ValidationError("mode set size must match the array size");
    return oam_channel(geom, wave, s.beta, scenario_ntcs_specs(s, modes), rx_model,
                       s.truncation_order);
}

}  // namespace oamlink
