#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "tlma/rng.hpp"

namespace tlma {

// Penalty-aware particle swarm over a flat real coordinate space. The engine
// is generic: fitness callbacks own the objective and the penalty weighting;
// the engine only needs the violation amount to track the best feasible
// point separately from the best penalized fitness.
struct SwarmConfig {
    int num_particles = 300;  // I_P
    int num_iterations = 200; // I_T
    double inertia = 0.9;     // omega
    double cognitive = 2.0;   // c_1
    double social = 2.0;      // c_2
    // kappa; applied inside fitness callbacks, carried here so one config
    // object describes a full swarm instantiation.
    double penalty_coefficient = 1e6;
    // Velocity clamp as a fraction of the per-coordinate initialization
    // range. The reference coefficients (inertia 0.9, c1 = c2 = 2) are
    // divergent without it, and the 1e6-scale penalty makes any infeasible
    // excursion unrecoverable, so steps must stay small enough to re-enter
    // the spacing-chain feasible set.
    double velocity_clamp = 0.01;
    // Positions are clamped to the init box expanded by this much on each
    // side; violations inside the padded box are the penalty's job.
    double position_pad = 0.0;
    std::vector<double> init_lo; // per-coordinate initialization bounds
    std::vector<double> init_hi;
};

struct Fitness {
    double value = 0.0;   // objective minus weighted penalty
    double penalty = 0.0; // raw constraint violation, zero iff feasible
};

using FitnessFn = std::function<Fitness(std::span<const double>)>;
using SamplerFn = std::function<std::vector<double>(RngStream&)>;

struct Particle {
    std::vector<double> position;
    std::vector<double> velocity;
    std::vector<double> best_position;
    double best_fitness; // fitness at best_position when it was recorded
    double best_penalty; // penalty at best_position when it was recorded
    Fitness last;        // most recent evaluation of `position`
};

struct SwarmRunResult {
    std::vector<double> best_position;
    double best_fitness = 0.0;
    double best_penalty = 0.0;
    // Best zero-penalty point seen; empty if none was evaluated (cannot
    // happen when the sampler honors its feasibility contract).
    std::vector<double> best_feasible_position;
    double best_feasible_fitness = 0.0;
    std::vector<double> fitness_trace; // global best after each iteration; non-decreasing
    std::vector<double> penalty_trace; // penalty of the global best per iteration
    long long evaluations = 0;
};

class Swarm {
  public:
    // Draws num_particles positions from the sampler and velocities uniform
    // in [-v_max, v_max] per coordinate. The first seed_positions.size()
    // particles start at the given positions instead (incumbent injection).
    // Random streams derive from (stream_key, iteration, particle); the key
    // is the partial application of the project-wide seed derivation.
    Swarm(const SwarmConfig& config, const SamplerFn& sampler, std::uint64_t stream_key,
          std::span<const std::vector<double>> seed_positions = {});

    // Evaluates every particle's current position. Evaluations are
    // independent and run in parallel; results land in per-particle slots so
    // scheduling cannot affect the outcome.
    void evaluate(const FitnessFn& fitness);

    // Personal bests improve only on strictly greater fitness; the global
    // best is the argmax over personal bests with ties resolved to the
    // earliest iteration, then the lowest particle index.
    void update_bests();

    // One velocity/position update for every particle; iteration is 1-based
    // and feeds the stream derivation.
    void step(int iteration);

    // evaluate -> update_bests -> step, num_iterations times.
    SwarmRunResult run(const FitnessFn& fitness);

    const std::vector<Particle>& particles() const { return particles_; }
    const std::vector<double>& global_best() const { return global_best_position_; }
    double global_best_fitness() const { return global_best_fitness_; }
    const std::vector<double>& fitness_trace() const { return fitness_trace_; }

  private:
    SwarmConfig config_;
    std::uint64_t stream_key_;
    int dimension_;
    std::vector<Particle> particles_;
    std::vector<double> velocity_max_;
    std::vector<double> global_best_position_;
    double global_best_fitness_;
    double global_best_penalty_;
    std::vector<double> best_feasible_position_;
    double best_feasible_fitness_;
    std::vector<double> fitness_trace_;
    std::vector<double> penalty_trace_;
    long long evaluations_ = 0;
};

// Velocity/position update of a single particle, exposed for direct tests of
// the update arithmetic with pinned random vectors.
void step_particle(Particle& particle, std::span<const double> global_best,
                   const SwarmConfig& config, std::span<const double> r_personal,
                   std::span<const double> r_global, std::span<const double> velocity_max);

// Convenience wrapper: init + run.
SwarmRunResult run_swarm(const SwarmConfig& config, const FitnessFn& fitness,
                         const SamplerFn& sampler, std::uint64_t stream_key,
                         std::span<const std::vector<double>> seed_positions = {});

}  // namespace tlma
