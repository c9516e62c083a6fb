#include <cstdint>
#include <functional>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "oamlink/commands.hpp"
#include "oamlink/errors.hpp"

namespace {

struct CommonArgs {
    std::string scenario_path;
    std::string out_dir = "out";
    std::optional<std::uint64_t> seed;
    std::string from_manifest;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--scenario", args.scenario_path, "Scenario file");
    cmd->add_option("--out", args.out_dir, "Output directory")->capture_default_str();
    cmd->add_option("--seed", args.seed, "Override the scenario seed");
    cmd->add_option("--from-manifest", args.from_manifest,
                    "Re-run exactly as recorded in a manifest written by this command");
}

// Scenario from --scenario or --from-manifest (exactly one), seed applied.
oamlink::Scenario load_scenario(const CommonArgs& args, const std::string& command) {
    if (args.from_manifest.empty() == args.scenario_path.empty())
        throw oamlink::ValidationError("pass exactly one of --scenario or --from-manifest");
    oamlink::Scenario s;
    if (!args.from_manifest.empty()) {
        oamlink::LoadedManifest lm = oamlink::load_manifest(args.from_manifest);
        if (lm.command != command)
            throw oamlink::ValidationError("manifest records a '" + lm.command +
                                           "' run, not '" + command + "'");
        s = lm.scenario;
    } else {
        s = oamlink::parse_scenario(args.scenario_path);
    }
    if (args.seed) s.seed = *args.seed;
    return s;
}

int run(const std::function<oamlink::CommandResult()>& fn) {
    try {
        oamlink::CommandResult res = fn();
        std::cout << res.summary << "\n";
        for (const auto& f : res.outputs) std::cout << "wrote " << f << "\n";
        return 0;
    } catch (const oamlink::Error& e) {
        const char* cat = "usage";
        int code = 2;
        switch (e.category()) {
            case oamlink::ErrorCategory::Usage: break;
            case oamlink::ErrorCategory::Config: cat = "config"; code = 3; break;
            case oamlink::ErrorCategory::Domain: cat = "domain"; code = 4; break;
            case oamlink::ErrorCategory::Io: cat = "io"; code = 5; break;
        }
        std::cerr << "error [" << cat << "]: " << e.what() << "\n";
        return code;
    } catch (const std::exception& e) {
        std::cerr << "error [internal]: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Simulation toolkit for directional OAM multiplexing links"};
    app.require_subcommand(1);

    CommonArgs pc_args, cap_args, cond_args, ber_args;
    oamlink::PatternCutOptions pc_opt;
    std::optional<int> pc_mode;
    std::optional<double> pc_theta;

    CLI::App* pc = app.add_subcommand(
        "pattern-cut", "Azimuth cut of one beam pattern, with the recovered phase slope");
    add_common(pc, pc_args);
    pc->add_option("--mode", pc_mode, "Equivalent mode of the cut beam (0 = plane-wave horn)");
    pc->add_option("--theta-deg", pc_theta,
                   "Polar angle of the cut in degrees (default: center-mode peak)");
    pc->add_option("--az-start-deg", pc_opt.az_start_deg, "Azimuth grid start, deg")
        ->capture_default_str();
    pc->add_option("--az-stop-deg", pc_opt.az_stop_deg, "Azimuth grid stop (exclusive), deg")
        ->capture_default_str();
    pc->add_option("--az-step-deg", pc_opt.az_step_deg, "Azimuth grid step, deg")
        ->capture_default_str();
    pc->add_option("--distance-m", pc_opt.distance_m, "Evaluation distance, m")
        ->capture_default_str();

    CLI::App* cap = app.add_subcommand(
        "capacity-sweep", "Shannon capacity vs SNR for the horn and each OAM mode set");
    add_common(cap, cap_args);

    CLI::App* cond = app.add_subcommand(
        "condition-table", "Condition number and correlation per array size and mode set");
    add_common(cond, cond_args);

    CLI::App* ber = app.add_subcommand(
        "ber-sweep", "Monte Carlo 16-QAM bit error rates over the scenario SNR grid");
    add_common(ber, ber_args);

    CLI11_PARSE(app, argc, argv);

    if (app.got_subcommand(pc)) {
        return run([&] {
            oamlink::Scenario s = load_scenario(pc_args, "pattern-cut");
            oamlink::PatternCutOptions opt = pc_opt;
            if (!pc_args.from_manifest.empty())
                opt = oamlink::load_manifest(pc_args.from_manifest).pattern_options;
            if (pc_mode) opt.mode = pc_mode;
            if (pc_theta) opt.theta_deg = pc_theta;
            return oamlink::cmd_pattern_cut(s, pc_args.out_dir, opt);
        });
    }
    if (app.got_subcommand(cap)) {
        return run([&] {
            return oamlink::cmd_capacity_sweep(load_scenario(cap_args, "capacity-sweep"),
                                               cap_args.out_dir);
        });
    }
    if (app.got_subcommand(cond)) {
        return run([&] {
            return oamlink::cmd_condition_table(load_scenario(cond_args, "condition-table"),
                                                cond_args.out_dir);
        });
    }
    return run([&] {
        return oamlink::cmd_ber_sweep(load_scenario(ber_args, "ber-sweep"),
                                      ber_args.out_dir);
    });
}
