#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "oamlink/channel.hpp"
#include "oamlink/geometry.hpp"
#include "oamlink/link.hpp"

namespace oamlink {

enum class TxType { Horn, NtcsOam };
enum class AimMode { Centroid, Paired };

// One experiment description, loaded from a strict YAML document. Keys carry
// their units; unknown keys are rejected so typos cannot silently change the
// physics.
struct Scenario {
    double frequency_ghz = 10.0;
    int tx_count = 2;
    int rx_count = 2;
    double tx_spacing_m = 0.2;
    double rx_spacing_m = 0.2;
    double range_m = 10.0;
    double height_m = 1.5;

    TxType tx_type = TxType::Horn;
    std::vector<int> modes;                   // per-tx modes when tx_type = ntcs_oam
    std::vector<std::vector<int>> mode_sets;  // configurations for table/sweep commands
    std::vector<int> sizes{2};                // square array sizes for condition tables

    double waveguide_wide_side_m = 0.0151;
    double waveguide_narrow_side_m = 0.008;
    double arc_angle_deg = 90.0;
    double boresight_deg = 0.0;
    double peak_gain_db = 16.0;
    double horn_beamwidth_deg = 36.0;
    double beta = 1.0;

    std::vector<double> snr_grid_db;
    std::uint64_t trials = 25;
    std::uint64_t seed = 12345;
    EqualizerMode equalizer = EqualizerMode::Raw;
    AimMode aim = AimMode::Centroid;
    CsiMode csi = CsiMode::Estimated;
    int pilot_len = 64;
    int payload_len = 1024;
    int truncation_order = 64;

    bool operator==(const Scenario&) const = default;
};

Scenario parse_scenario(const std::string& path);
Scenario parse_scenario_text(const std::string& text);  // same, from a string
std::string serialize_scenario(const Scenario& s);
void validate_scenario(const Scenario& s);

// Derived build helpers.
WaveParameters scenario_wave(const Scenario& s);
WaveguideSpec scenario_waveguide(const Scenario& s);
ArrayGeometry scenario_geometry(const Scenario& s);
ArrayGeometry scenario_geometry_square(const Scenario& s, int size);
BeamSpec scenario_horn_spec(const Scenario& s);
std::vector<BeamSpec> scenario_ntcs_specs(const Scenario& s, const std::vector<int>& modes);
FrameSchedule scenario_schedule(const Scenario& s);

// Channel for the scenario's own tx_type/modes (ber sweeps).
ChannelMatrix scenario_channel(const Scenario& s);
// Channel on an n x n version of the geometry; empty modes = horn tx.
ChannelMatrix scenario_channel_square(const Scenario& s, int size,
                                      const std::vector<int>& modes);

}  // namespace oamlink
