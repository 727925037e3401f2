#include "tlma/pso.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace tlma {

namespace {

void validate_config(const SwarmConfig& config) {
    if (config.num_particles < 1)
        throw std::invalid_argument("swarm: num_particles must be >= 1");
    if (config.num_iterations < 1)
        throw std::invalid_argument("swarm: num_iterations must be >= 1");
    if (config.init_lo.empty() || config.init_lo.size() != config.init_hi.size())
        throw std::invalid_argument("swarm: init box is empty or mismatched");
    for (std::size_t j = 0; j < config.init_lo.size(); ++j)
        if (config.init_hi[j] < config.init_lo[j])
            throw std::invalid_argument("swarm: init box has hi < lo");
    if (!(config.velocity_clamp > 0.0) || config.velocity_clamp > 1.0)
        throw std::invalid_argument("swarm: velocity_clamp must be in (0, 1]");
    if (config.position_pad < 0.0)
        throw std::invalid_argument("swarm: position_pad must be >= 0");
}

} // namespace

Swarm::Swarm(const SwarmConfig& config, const SamplerFn& sampler, std::uint64_t stream_key,
             std::span<const std::vector<double>> seed_positions)
    : config_(config), stream_key_(stream_key),
      dimension_(static_cast<int>(config.init_lo.size())),
      global_best_fitness_(-std::numeric_limits<double>::infinity()),
      global_best_penalty_(0.0),
      best_feasible_fitness_(-std::numeric_limits<double>::infinity()) {
    validate_config(config_);
    if (static_cast<int>(seed_positions.size()) > config_.num_particles)
        throw std::invalid_argument("swarm: more seed positions than particles");

    velocity_max_.resize(dimension_);
    for (int j = 0; j < dimension_; ++j)
        velocity_max_[j] = config_.velocity_clamp * (config_.init_hi[j] - config_.init_lo[j]);

    particles_.resize(config_.num_particles);
    const std::uint64_t init_key = derive_key(stream_key_, 0);
    for (int i = 0; i < config_.num_particles; ++i) {
        RngStream rng(derive_key(init_key, static_cast<std::uint64_t>(i)));
        Particle& p = particles_[i];
        if (i < static_cast<int>(seed_positions.size())) {
            p.position = seed_positions[i];
            if (static_cast<int>(p.position.size()) != dimension_)
                throw std::invalid_argument("swarm: seed position has wrong dimension");
        } else {
            p.position = sampler(rng);
            if (static_cast<int>(p.position.size()) != dimension_)
                throw std::invalid_argument("swarm: sampler returned wrong dimension");
        }
        p.velocity.resize(dimension_);
        for (int j = 0; j < dimension_; ++j)
            p.velocity[j] = rng.uniform(-velocity_max_[j], velocity_max_[j]);
        p.best_position = p.position;
        p.best_fitness = -std::numeric_limits<double>::infinity();
        p.best_penalty = 0.0;
        p.last = Fitness{-std::numeric_limits<double>::infinity(), 0.0};
    }
}

void Swarm::evaluate(const FitnessFn& fitness) {
    const int n = static_cast<int>(particles_.size());
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i) {
        Particle& p = particles_[i];
        p.last = fitness(p.position);
    }
    evaluations_ += n;
}

void Swarm::update_bests() {
    for (auto& p : particles_) {
        if (p.last.value > p.best_fitness) {
            p.best_fitness = p.last.value;
            p.best_penalty = p.last.penalty;
            p.best_position = p.position;
        }
        if (p.last.penalty == 0.0 && p.last.value > best_feasible_fitness_) {
            best_feasible_fitness_ = p.last.value;
            best_feasible_position_ = p.position;
        }
    }
    for (const auto& p : particles_) {
        if (p.best_fitness > global_best_fitness_) {
            global_best_fitness_ = p.best_fitness;
            global_best_position_ = p.best_position;
            global_best_penalty_ = p.best_penalty;
        }
    }
    fitness_trace_.push_back(global_best_fitness_);
    penalty_trace_.push_back(global_best_penalty_);
}

void step_particle(Particle& particle, std::span<const double> global_best,
                   const SwarmConfig& config, std::span<const double> r_personal,
                   std::span<const double> r_global, std::span<const double> velocity_max) {
    const std::size_t dim = particle.position.size();
    for (std::size_t j = 0; j < dim; ++j) {
        double v = config.inertia * particle.velocity[j] +
                   config.cognitive * r_personal[j] * (particle.best_position[j] - particle.position[j]) +
                   config.social * r_global[j] * (global_best[j] - particle.position[j]);
        v = std::clamp(v, -velocity_max[j], velocity_max[j]);
        particle.velocity[j] = v;
        const double lo = config.init_lo[j] - config.position_pad;
        const double hi = config.init_hi[j] + config.position_pad;
        particle.position[j] = std::clamp(particle.position[j] + v, lo, hi);
    }
}

void Swarm::step(int iteration) {
    if (global_best_position_.empty())
        throw std::logic_error("swarm: step before any update_bests");
    const int n = static_cast<int>(particles_.size());
    const std::uint64_t iter_key = derive_key(stream_key_, static_cast<std::uint64_t>(iteration));
    std::vector<double> r1(dimension_), r2(dimension_);
    for (int i = 0; i < n; ++i) {
        RngStream rng(derive_key(iter_key, static_cast<std::uint64_t>(i)));
        for (int j = 0; j < dimension_; ++j) r1[j] = rng.uniform();
        for (int j = 0; j < dimension_; ++j) r2[j] = rng.uniform();
        step_particle(particles_[i], global_best_position_, config_, r1, r2, velocity_max_);
    }
}

SwarmRunResult Swarm::run(const FitnessFn& fitness) {
    for (int t = 1; t <= config_.num_iterations; ++t) {
        evaluate(fitness);
        update_bests();
        step(t);
    }
    SwarmRunResult result;
    result.best_position = global_best_position_;
    result.best_fitness = global_best_fitness_;
    result.best_penalty = global_best_penalty_;
    result.best_feasible_position = best_feasible_position_;
    result.best_feasible_fitness = best_feasible_fitness_;
    result.fitness_trace = fitness_trace_;
    result.penalty_trace = penalty_trace_;
    result.evaluations = evaluations_;
    return result;
}

SwarmRunResult run_swarm(const SwarmConfig& config, const FitnessFn& fitness,
                         const SamplerFn& sampler, std::uint64_t stream_key,
                         std::span<const std::vector<double>> seed_positions) {
    Swarm swarm(config, sampler, stream_key, seed_positions);
    return swarm.run(fitness);
}

}  // namespace tlma
