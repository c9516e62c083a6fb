#pragma once

#include <optional>
#include <string>
#include <vector>

#include "oamlink/scenario.hpp"

namespace oamlink {

// What a command wrote plus its one-line stdout summary. outputs[0] is the
// CSV, outputs[1] the manifest.
struct CommandResult {
    std::vector<std::string> outputs;
    std::string summary;
};

struct PatternCutOptions {
    std::optional<int> mode;         // 0 = plane wave; default from the scenario
    std::optional<double> theta_deg; // default: polar angle of the center-mode peak
    double az_start_deg = -180.0;
    double az_stop_deg = 180.0;      // exclusive
    double az_step_deg = 0.25;
    double distance_m = 1000.0;
};

CommandResult cmd_pattern_cut(const Scenario& s, const std::string& out_dir,
                              const PatternCutOptions& opt = {});
CommandResult cmd_capacity_sweep(const Scenario& s, const std::string& out_dir);
CommandResult cmd_condition_table(const Scenario& s, const std::string& out_dir);
CommandResult cmd_ber_sweep(const Scenario& s, const std::string& out_dir);

// Every command writes a versioned JSON manifest next to its CSV, recording
// the resolved inputs; loading one reproduces the run byte-for-byte.
struct LoadedManifest {
    std::string command;
    Scenario scenario;
    PatternCutOptions pattern_options;  // resolved; meaningful for pattern-cut
};

LoadedManifest load_manifest(const std::string& path);
Scenario scenario_from_manifest(const std::string& path);

}  // namespace oamlink
