#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "tlma/beamforming.hpp"
#include "tlma/geometry.hpp"
#include "tlma/pso.hpp"

namespace tlma {

// Scheme ids are pinned: they enter the seed derivation and the result CSVs.
// Id 0 is reserved for scenario sampling so all schemes of a trial share one
// channel realization.
enum class Scheme {
    TwoLayer = 1,    // "tlma": alternating subarray/antenna optimization
    SingleLayer = 2, // "slma": every antenna moves freely in the region
    ArrayWise = 3,   // "arraywise": rigid half-wavelength subarrays
    FixedArray = 4,  // "fpa": uniform half-wavelength grid, no optimization
    AllAtOnce = 5,   // "allatonce": one PSO over the joint (q, d) vector
};

const char* to_string(Scheme scheme);
std::optional<Scheme> scheme_from_string(std::string_view token);

struct AoConfig {
    int max_rounds = 10;   // I_A
    double epsilon = 1e-3; // stop when a full round improves the sum-rate by less
    SwarmConfig subarray_swarm;
    SwarmConfig antenna_swarm;
    bool record_pso_trace = false;
};

struct PsoTracePoint {
    int call = 0; // 1-based PSO call index within the scheme run
    int iteration = 0;
    double best_fitness = 0.0;
    double best_penalty = 0.0;
};

struct SchemeResult {
    Scheme scheme = Scheme::FixedArray;
    TwoLayerLayout layout;         // two-layer family only; empty for slma/fpa
    std::vector<double> positions; // final absolute antenna positions
    double sum_rate = 0.0;
    double subarray_displacement = 0.0; // C_S against the scheme's initial layout
    double antenna_displacement = 0.0;  // C_A against the scheme's initial layout
    std::vector<double> rate_trace;     // sum-rate per AO round, starting at the initial layout
    int rounds = 0;
    long long evaluations = 0; // PSO fitness evaluations consumed
    std::vector<PsoTracePoint> pso_trace;
};

// Penalized fitness of a subarray-position vector with offsets held fixed:
// sum-rate minus kappa times the subarray violation.
double fitness_subarray(std::span<const double> origins, std::span<const double> offsets,
                        const Scenario& scenario, const ArrayArchitecture& arch, double kappa);

// Penalized fitness of an offset vector with subarray positions held fixed.
double fitness_antenna(std::span<const double> offsets, std::span<const double> origins,
                       const Scenario& scenario, const ArrayArchitecture& arch, double kappa);

// Uniform draws over the feasible sets, via uniform slack on the simplex of
// free space left once minimum gaps are reserved.
std::vector<double> sample_feasible_origins(const ArrayArchitecture& arch, RngStream& rng);
std::vector<double> sample_feasible_offsets(const ArrayArchitecture& arch, RngStream& rng);
std::vector<double> sample_feasible_single_layer(double region_length, int num_antennas,
                                                 RngStream& rng);

// Hinge penalty of the single-layer scheme: region bounds +-L/2 and
// half-wavelength spacing over all antennas.
double single_layer_penalty(std::span<const double> positions, double region_length);

// Uniform half-wavelength grid centered at the origin.
std::vector<double> fpa_positions(int num_antennas);

// Stream key for one PSO call; the swarm engine extends it with
// (iteration, particle) to complete the project-wide derivation tuple.
std::uint64_t scheme_stream_key(std::uint64_t master_seed, std::uint64_t trial, Scheme scheme,
                                int pso_call);

struct SubproblemResult {
    std::vector<double> position; // feasible best (zero penalty)
    double sum_rate = 0.0;        // sum-rate at `position`
    SwarmRunResult swarm;
};

// PSO over subarray positions with fixed offsets. Every vector in `seeds`
// is injected into the initial swarm (incumbent first).
SubproblemResult optimize_subarrays(std::span<const double> offsets, const Scenario& scenario,
                                    const ArrayArchitecture& arch, const SwarmConfig& config,
                                    std::uint64_t stream_key,
                                    std::span<const std::vector<double>> seeds);

// PSO over the stacked offset vector with fixed subarray positions. When the
// architecture leaves no intra-subarray slack (array-wise case) the feasible
// set is the single half-wavelength grid, returned directly without search.
SubproblemResult optimize_antennas(std::span<const double> origins, const Scenario& scenario,
                                   const ArrayArchitecture& arch, const SwarmConfig& config,
                                   std::uint64_t stream_key,
                                   std::span<const std::vector<double>> seeds);

// The two-layer scheme: alternate subarray and antenna optimization from the
// uniform initial layout until the sum-rate improvement falls below epsilon
// or max_rounds is hit. Incumbent injection makes the round trace exactly
// non-decreasing.
SchemeResult ao_optimize(const Scenario& scenario, const ArrayArchitecture& arch,
                         const AoConfig& config, std::uint64_t master_seed, std::uint64_t trial);

// Element-wise single-layer benchmark: one PSO over all absolute positions.
SchemeResult sl_ma_optimize(const Scenario& scenario, const ArrayArchitecture& arch,
                            const SwarmConfig& config, std::uint64_t master_seed,
                            std::uint64_t trial, bool record_pso_trace = false);

// Rigid-subarray benchmark: offsets pinned to the half-wavelength grid, one
// PSO over subarray positions.
SchemeResult array_wise_optimize(const Scenario& scenario, const ArrayArchitecture& arch,
                                 const SwarmConfig& config, std::uint64_t master_seed,
                                 std::uint64_t trial, bool record_pso_trace = false);

// Conventional fixed-position array; deterministic, consumes no randomness.
SchemeResult fpa_layout(const Scenario& scenario, const ArrayArchitecture& arch);

// Joint (q, d) PSO comparison scheme. Iteration count is derived from the
// evaluation budget: iterations = max(1, budget / particles).
SchemeResult all_at_once_optimize(const Scenario& scenario, const ArrayArchitecture& arch,
                                  const SwarmConfig& config, long long budget_evaluations,
                                  std::uint64_t master_seed, std::uint64_t trial,
                                  bool record_pso_trace = false);

}  // namespace tlma
