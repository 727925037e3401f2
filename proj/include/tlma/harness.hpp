#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tlma/channel.hpp"
#include "tlma/errors.hpp"
#include "tlma/geometry.hpp"
#include "tlma/optimizer.hpp"

namespace tlma {

// Experiment description. Defaults reproduce the reference simulation setup;
// the "desk" profile shrinks swarm and trial counts so a full sweep finishes
// in minutes while preserving every algorithmic property.
struct ExperimentConfig {
    double carrier_ghz = 10.0; // documents the wavelength; never enters formulas
    double snr_db = 9.78;      // gamma * average gain power, in dB
    int num_antennas = 12;     // M (total)
    int num_users = 3;         // K
    int num_paths = 3;         // N_PA

    // Sweep axes; at most one list may hold more than one value.
    std::vector<int> subarray_counts = {4};    // M_S
    std::vector<double> alphas = {0.375};      // L_A = alpha * L / M_S
    std::vector<double> lengths = {24.0};      // L in wavelengths

    std::vector<Scheme> schemes = {Scheme::TwoLayer, Scheme::SingleLayer, Scheme::ArrayWise,
                                   Scheme::FixedArray};

    int subarray_particles = 300;  // I_P
    int subarray_iterations = 200; // I_T
    int antenna_particles = 300;   // I_P for the offset swarm
    int antenna_iterations = 200;  // I_T for the offset swarm
    double inertia = 0.9;
    double cognitive = 2.0;
    double social = 2.0;
    double penalty_coefficient = 1e6;
    double velocity_clamp = 0.01;

    int ao_max_rounds = 10;
    double ao_epsilon = 1e-3;
    // all-at-once budget in AO-round equivalents (one round = the evaluations
    // of one subarray plus one antenna PSO call)
    int aao_budget_rounds = 1;

    int num_trials = 50;
    std::uint64_t master_seed = 1;
    std::string output_path = "results";
    // Emit per-iteration PSO traces (call, iteration, best fitness, penalty)
    // into SchemeResult::pso_trace for convergence plots.
    bool record_pso_trace = false;

    double snr_linear() const;
    SwarmConfig subarray_swarm() const;
    SwarmConfig antenna_swarm() const;
    AoConfig ao_config() const;
    long long aao_budget() const;
};

// Named parameter profiles: "table1" (reference scale) and "desk".
void apply_profile(ExperimentConfig& config, const std::string& name);

// Sets one field from its textual key (the config-file key, also the CLI
// flag name). Unknown keys and malformed values raise ParseError.
void set_key(ExperimentConfig& config, const std::string& key, const std::string& value);

// Reads `key = value` lines ('#' comments); errors carry the line number.
ExperimentConfig load_config_file(const std::string& path, ExperimentConfig base);

// Textual value of one key, for round-trip inspection.
std::string get_key(const ExperimentConfig& config, const std::string& key);

// Rejects invalid geometry/parameter combinations, naming the violated
// invariant. Alpha must lie in [M*lambda/(2L), 1] for every swept length;
// at the lower bound the layout degenerates to the array-wise grid.
void validate(const ExperimentConfig& config);

enum class SweepAxis { SubarrayCount, Alpha, RegionLength };
const char* to_string(SweepAxis axis);

struct SweepPlan {
    SweepAxis axis = SweepAxis::SubarrayCount;
    std::vector<double> values;
};

// The swept axis is the list with more than one entry (subarray count when
// all are singletons).
SweepPlan plan_sweep(const ExperimentConfig& config);

// Architecture for one sweep point.
ArrayArchitecture architecture_at(const ExperimentConfig& config, SweepAxis axis, double value);

struct DetailRow {
    std::string sweep_axis;
    double sweep_value = 0.0;
    std::uint64_t trial = 0;
    std::string scheme;
    std::uint64_t seed = 0; // per-(trial, scheme) stream identifier
    double sum_rate = 0.0;
    double subarray_displacement = 0.0;
    double antenna_displacement = 0.0;
    int ao_rounds = 0;
    long long evaluations = 0;
    std::string status; // "ok" or "error: ..."
};

// Scenario for one trial; identical for every scheme and sweep value of the
// trial, so per-trial differences are attributable to the scheme.
Scenario sample_trial_scenario(const ExperimentConfig& config, std::uint64_t trial);

// Runs one scheme on one scenario at one sweep point.
SchemeResult run_scheme(Scheme scheme, const Scenario& scenario, const ArrayArchitecture& arch,
                        const ExperimentConfig& config, std::uint64_t trial);

// Full sweep: every (sweep value, trial, scheme) combination, trials in
// parallel, rows in deterministic order. Failed trials become error rows.
std::vector<DetailRow> run_sweep_rows(const ExperimentConfig& config);

struct SweepOutput {
    std::string detail_path;
    std::string aggregate_path;
};

// Writes <output_path>_detail.csv and <output_path>_aggregate.csv.
SweepOutput run_sweep(const ExperimentConfig& config);

std::string detail_csv(const std::vector<DetailRow>& rows);
std::string aggregate_csv(const std::vector<DetailRow>& rows);

// Re-executes one scheme on a stored scenario; identical to the original run
// for the same master seed and trial index. Requires a single sweep point.
SchemeResult replay(const std::string& scenario_path, Scheme scheme,
                    const ExperimentConfig& config, std::uint64_t trial);

}  // namespace tlma
