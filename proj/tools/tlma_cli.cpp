// Command-line front end. Deliberately uses the public C API only, so it
// doubles as a smoke test of the shared library surface.

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "tlma/tlma.h"

namespace {

struct ConfigArgs {
    std::string profile;
    std::string config_file;
    // (key, value) pairs from explicit flags, applied after the file so
    // flags win over file values.
    std::vector<std::pair<std::string, std::string>> overrides;
};

void add_config_options(CLI::App* cmd, ConfigArgs& args) {
    cmd->add_option("--profile", args.profile, "Parameter profile: table1 or desk");
    cmd->add_option("--config", args.config_file, "Config file of key = value lines");
    static const char* keys[] = {
        "carrier_ghz", "snr_db", "num_antennas", "num_users", "num_paths",
        "subarray_counts", "alphas", "lengths", "schemes",
        "subarray_particles", "subarray_iterations", "antenna_particles",
        "antenna_iterations", "inertia", "cognitive", "social",
        "penalty_coefficient", "velocity_clamp", "ao_max_rounds", "ao_epsilon",
        "aao_budget_rounds", "num_trials", "seed", "out", "record_pso_trace",
    };
    for (const char* key : keys) {
        const std::string flag = "--" + std::string(key);
        cmd->add_option_function<std::string>(
               flag,
               [&args, key](const std::string& value) {
                   args.overrides.emplace_back(key, value);
               },
               "Config key " + std::string(key))
            ->type_name("VALUE");
    }
}

[[noreturn]] void die(const char* what, tlma_status status) {
    std::fprintf(stderr, "%s failed (%s): %s\n", what, tlma_status_name(status),
                 tlma_last_error());
    std::exit(1);
}

void check(const char* what, tlma_status status) {
    if (status != TLMA_OK) die(what, status);
}

tlma_config* build_config(const ConfigArgs& args) {
    tlma_config* config = nullptr;
    check("config_create", tlma_config_create(&config));
    if (!args.profile.empty())
        check("apply_profile", tlma_config_apply_profile(config, args.profile.c_str()));
    if (!args.config_file.empty())
        check("load_config", tlma_config_load_file(config, args.config_file.c_str()));
    for (const auto& [key, value] : args.overrides)
        check(("set " + key).c_str(), tlma_config_set(config, key.c_str(), value.c_str()));
    check("validate", tlma_config_validate(config));
    return config;
}

void print_result(const tlma_result* result) {
    std::printf("sum_rate_bps_hz: %.6f\n", tlma_result_sum_rate(result));
    std::printf("C_S_wavelengths: %.6f\n", tlma_result_subarray_displacement(result));
    std::printf("C_A_wavelengths: %.6f\n", tlma_result_antenna_displacement(result));
    std::printf("ao_rounds: %d\n", tlma_result_rounds(result));
    std::printf("evaluations: %lld\n", tlma_result_evaluations(result));

    size_t count = 0;
    check("positions", tlma_result_positions(result, nullptr, 0, &count));
    std::vector<double> positions(count);
    check("positions", tlma_result_positions(result, positions.data(), count, &count));
    std::printf("positions:");
    for (double p : positions) std::printf(" %.6f", p);
    std::printf("\n");

    check("rate_trace", tlma_result_rate_trace(result, nullptr, 0, &count));
    std::vector<double> trace(count);
    check("rate_trace", tlma_result_rate_trace(result, trace.data(), count, &count));
    std::printf("rate_trace:");
    for (double r : trace) std::printf(" %.6f", r);
    std::printf("\n");

    size_t needed = 0;
    tlma_result_layout_json(result, nullptr, 0, &needed);
    std::vector<char> json(needed);
    if (tlma_result_layout_json(result, json.data(), json.size(), &needed) == TLMA_OK)
        std::printf("layout: %s\n", json.data());
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Two-layer movable antenna position optimization toolkit"};
    app.require_subcommand(1);

    ConfigArgs sweep_args;
    auto* sweep = app.add_subcommand("sweep", "Run the configured Monte-Carlo sweep");
    add_config_options(sweep, sweep_args);

    ConfigArgs single_args;
    std::string single_scheme = "tlma";
    std::uint64_t single_trial = 0;
    std::string single_scenario_in, single_scenario_out;
    auto* single = app.add_subcommand("single", "Run one scheme on one scenario");
    add_config_options(single, single_args);
    single->add_option("--scheme", single_scheme, "tlma|slma|arraywise|fpa|allatonce");
    single->add_option("--trial", single_trial, "Trial index (selects the scenario draw)");
    single->add_option("--scenario", single_scenario_in,
                       "Load the scenario from this file instead of sampling");
    single->add_option("--save-scenario", single_scenario_out,
                       "Write the scenario used to this file");
    std::string single_trace_out;
    single->add_option("--pso-trace", single_trace_out,
                       "Write per-iteration swarm trace CSV to this file");

    ConfigArgs replay_args;
    std::string replay_scheme = "tlma";
    std::uint64_t replay_trial = 0;
    std::string replay_scenario;
    auto* replay = app.add_subcommand("replay", "Re-run one scheme on a stored scenario");
    add_config_options(replay, replay_args);
    replay->add_option("--scenario", replay_scenario, "Stored scenario file")->required();
    replay->add_option("--scheme", replay_scheme, "tlma|slma|arraywise|fpa|allatonce");
    replay->add_option("--trial", replay_trial, "Trial index used by the original run");

    CLI11_PARSE(app, argc, argv);

    if (sweep->parsed()) {
        tlma_config* config = build_config(sweep_args);
        char detail[4096];
        char aggregate[4096];
        check("run_sweep",
              tlma_run_sweep(config, detail, sizeof(detail), aggregate, sizeof(aggregate)));
        std::printf("detail: %s\naggregate: %s\n", detail, aggregate);
        tlma_config_destroy(config);
        return 0;
    }

    if (single->parsed()) {
        if (!single_trace_out.empty())
            single_args.overrides.emplace_back("record_pso_trace", "true");
        tlma_config* config = build_config(single_args);
        tlma_scenario* scenario = nullptr;
        if (!single_scenario_in.empty())
            check("scenario_load", tlma_scenario_load(single_scenario_in.c_str(), &scenario));
        else
            check("scenario_sample", tlma_scenario_sample(config, single_trial, &scenario));
        if (!single_scenario_out.empty())
            check("scenario_save", tlma_scenario_save(scenario, single_scenario_out.c_str()));
        tlma_result* result = nullptr;
        check("run_scheme", tlma_run_scheme(config, scenario, single_scheme.c_str(),
                                            single_trial, &result));
        std::printf("scheme: %s\ntrial: %llu\n", single_scheme.c_str(),
                    static_cast<unsigned long long>(single_trial));
        print_result(result);
        if (!single_trace_out.empty()) {
            size_t needed = 0;
            tlma_result_pso_trace_csv(result, nullptr, 0, &needed);
            std::vector<char> csv(needed);
            check("pso_trace", tlma_result_pso_trace_csv(result, csv.data(), csv.size(), &needed));
            std::ofstream out(single_trace_out, std::ios::binary);
            out << csv.data();
            std::printf("pso_trace: %s\n", single_trace_out.c_str());
        }
        tlma_result_destroy(result);
        tlma_scenario_destroy(scenario);
        tlma_config_destroy(config);
        return 0;
    }

    if (replay->parsed()) {
        tlma_config* config = build_config(replay_args);
        tlma_result* result = nullptr;
        check("replay", tlma_replay(config, replay_scenario.c_str(), replay_scheme.c_str(),
                                    replay_trial, &result));
        std::printf("scheme: %s\ntrial: %llu\n", replay_scheme.c_str(),
                    static_cast<unsigned long long>(replay_trial));
        print_result(result);
        tlma_result_destroy(result);
        tlma_config_destroy(config);
        return 0;
    }

    return 0;
}
