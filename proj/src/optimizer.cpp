#include "tlma/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace tlma {

namespace {

// Intra-subarray slack below this is treated as the packed (array-wise) case;
// absorbs the ulp of drift a reconstructed L_A can carry.
constexpr double kSingletonSlack = 1e-9;

std::vector<double> compose_positions(std::span<const double> origins,
                                      std::span<const double> offsets, int per_subarray) {
    std::vector<double> delta(offsets.size());
    for (std::size_t i = 0; i < offsets.size(); ++i)
        delta[i] = origins[i / per_subarray] + offsets[i];
    return delta;
}

// Draws `count` sorted uniforms on [0, slack].
std::vector<double> sorted_slack(double slack, int count, RngStream& rng) {
    std::vector<double> draws(count);
    for (auto& x : draws) x = rng.uniform(0.0, slack);
    std::sort(draws.begin(), draws.end());
    return draws;
}

std::vector<double> chain_sample(double base, double min_gap, double slack, int count,
                                 RngStream& rng) {
    const auto draws = sorted_slack(slack, count, rng);
    std::vector<double> points(count);
    for (int i = 0; i < count; ++i)
        points[i] = base + i * min_gap + draws[i];
    return points;
}

// A raw chain sample can land an ulp outside a constraint; resample until the
// exact feasibility predicate holds.
SamplerFn verified(SamplerFn raw, std::function<double(std::span<const double>)> penalty) {
    return [raw = std::move(raw), penalty = std::move(penalty)](RngStream& rng) {
        for (int attempt = 0; attempt < 100; ++attempt) {
            auto x = raw(rng);
            if (penalty(x) == 0.0) return x;
        }
        throw std::runtime_error("feasible sampler failed after 100 attempts");
    };
}

std::vector<double> half_wavelength_grid(int count) {
    std::vector<double> grid(count);
    for (int a = 0; a < count; ++a)
        grid[a] = 0.25 + 0.5 * a;
    return grid;
}

void append_pso_trace(SchemeResult& result, int call, const SwarmRunResult& swarm) {
    for (std::size_t t = 0; t < swarm.fitness_trace.size(); ++t)
        result.pso_trace.push_back({call, static_cast<int>(t) + 1, swarm.fitness_trace[t],
                                    swarm.penalty_trace[t]});
}

SubproblemResult finish_subproblem(SwarmRunResult run) {
    if (run.best_feasible_position.empty())
        throw std::logic_error("swarm finished without any feasible evaluation");
    SubproblemResult result;
    result.position = run.best_feasible_position;
    result.sum_rate = run.best_feasible_fitness; // zero penalty, fitness == sum-rate
    result.swarm = std::move(run);
    return result;
}

} // namespace

const char* to_string(Scheme scheme) {
    switch (scheme) {
    case Scheme::TwoLayer: return "tlma";
    case Scheme::SingleLayer: return "slma";
    case Scheme::ArrayWise: return "arraywise";
    case Scheme::FixedArray: return "fpa";
    case Scheme::AllAtOnce: return "allatonce";
    }
    return "unknown";
}

std::optional<Scheme> scheme_from_string(std::string_view token) {
    if (token == "tlma") return Scheme::TwoLayer;
    if (token == "slma") return Scheme::SingleLayer;
    if (token == "arraywise") return Scheme::ArrayWise;
    if (token == "fpa") return Scheme::FixedArray;
    if (token == "allatonce") return Scheme::AllAtOnce;
    return std::nullopt;
}

double fitness_subarray(std::span<const double> origins, std::span<const double> offsets,
                        const Scenario& scenario, const ArrayArchitecture& arch, double kappa) {
    const double penalty = subarray_penalty(origins, arch);
    const auto delta = compose_positions(origins, offsets, arch.antennas_per_subarray);
    return sum_rate_optimal(delta, scenario).sum_rate - kappa * penalty;
}

double fitness_antenna(std::span<const double> offsets, std::span<const double> origins,
                       const Scenario& scenario, const ArrayArchitecture& arch, double kappa) {
    const double penalty = antenna_penalty(offsets, arch);
    const auto delta = compose_positions(origins, offsets, arch.antennas_per_subarray);
    return sum_rate_optimal(delta, scenario).sum_rate - kappa * penalty;
}

std::vector<double> sample_feasible_origins(const ArrayArchitecture& arch, RngStream& rng) {
    const double slack = arch.region_length - arch.num_subarrays * arch.subarray_length;
    return chain_sample(-0.5 * arch.region_length, arch.subarray_length,
                        std::max(slack, 0.0), arch.num_subarrays, rng);
}

std::vector<double> sample_feasible_offsets(const ArrayArchitecture& arch, RngStream& rng) {
    const int per = arch.antennas_per_subarray;
    const double slack = arch.offset_slack();
    std::vector<double> offsets;
    offsets.reserve(arch.total_antennas());
    for (int s = 0; s < arch.num_subarrays; ++s) {
        std::vector<double> row = slack < kSingletonSlack
                                      ? half_wavelength_grid(per)
                                      : chain_sample(0.25, 0.5, slack, per, rng);
        offsets.insert(offsets.end(), row.begin(), row.end());
    }
    return offsets;
}

std::vector<double> sample_feasible_single_layer(double region_length, int num_antennas,
                                                 RngStream& rng) {
    const double slack = region_length - 0.5 * (num_antennas - 1);
    if (slack < 0.0)
        throw std::invalid_argument("region too short for the half-wavelength chain");
    return chain_sample(-0.5 * region_length, 0.5, slack, num_antennas, rng);
}

double single_layer_penalty(std::span<const double> positions, double region_length) {
    const double half = 0.5 * region_length;
    double penalty = 0.0;
    for (std::size_t m = 0; m < positions.size(); ++m) {
        penalty += std::max(0.0, -half - positions[m]) + std::max(0.0, positions[m] - half);
        if (m + 1 < positions.size())
            penalty += std::max(0.0, 0.5 - (positions[m + 1] - positions[m]));
    }
    return penalty;
}

std::vector<double> fpa_positions(int num_antennas) {
    std::vector<double> delta(num_antennas);
    for (int m = 0; m < num_antennas; ++m)
        delta[m] = 0.25 * (2 * m - (num_antennas - 1));
    return delta;
}

std::uint64_t scheme_stream_key(std::uint64_t master_seed, std::uint64_t trial, Scheme scheme,
                                int pso_call) {
    std::uint64_t key = derive_key(master_seed, trial);
    key = derive_key(key, static_cast<std::uint64_t>(scheme));
    return derive_key(key, static_cast<std::uint64_t>(pso_call));
}

SubproblemResult optimize_subarrays(std::span<const double> offsets, const Scenario& scenario,
                                    const ArrayArchitecture& arch, const SwarmConfig& config,
                                    std::uint64_t stream_key,
                                    std::span<const std::vector<double>> seeds) {
    SwarmConfig cfg = config;
    cfg.init_lo.assign(arch.num_subarrays, -0.5 * arch.region_length);
    cfg.init_hi.assign(arch.num_subarrays, 0.5 * arch.region_length - arch.subarray_length);
    cfg.position_pad = arch.subarray_length;

    const std::vector<double> fixed_offsets(offsets.begin(), offsets.end());
    const double kappa = cfg.penalty_coefficient;
    FitnessFn fitness = [&arch, &scenario, &fixed_offsets, kappa](std::span<const double> q) {
        const double penalty = subarray_penalty(q, arch);
        const auto delta = compose_positions(q, fixed_offsets, arch.antennas_per_subarray);
        const double rate = sum_rate_optimal(delta, scenario).sum_rate;
        return Fitness{rate - kappa * penalty, penalty};
    };
    SamplerFn sampler = verified(
        [&arch](RngStream& rng) { return sample_feasible_origins(arch, rng); },
        [&arch](std::span<const double> q) { return subarray_penalty(q, arch); });

    return finish_subproblem(run_swarm(cfg, fitness, sampler, stream_key, seeds));
}

SubproblemResult optimize_antennas(std::span<const double> origins, const Scenario& scenario,
                                   const ArrayArchitecture& arch, const SwarmConfig& config,
                                   std::uint64_t stream_key,
                                   std::span<const std::vector<double>> seeds) {
    const std::vector<double> fixed_origins(origins.begin(), origins.end());
    if (arch.offset_slack() < kSingletonSlack) {
        // Array-wise case: the only feasible offsets are the packed grid.
        SubproblemResult result;
        const auto grid = half_wavelength_grid(arch.antennas_per_subarray);
        result.position.reserve(arch.total_antennas());
        for (int s = 0; s < arch.num_subarrays; ++s)
            result.position.insert(result.position.end(), grid.begin(), grid.end());
        const auto delta =
            compose_positions(fixed_origins, result.position, arch.antennas_per_subarray);
        result.sum_rate = sum_rate_optimal(delta, scenario).sum_rate;
        return result;
    }

    SwarmConfig cfg = config;
    cfg.init_lo.assign(arch.total_antennas(), 0.25);
    cfg.init_hi.assign(arch.total_antennas(), arch.subarray_length - 0.25);
    cfg.position_pad = arch.subarray_length;

    const double kappa = cfg.penalty_coefficient;
    FitnessFn fitness = [&arch, &scenario, &fixed_origins, kappa](std::span<const double> d) {
        const double penalty = antenna_penalty(d, arch);
        const auto delta = compose_positions(fixed_origins, d, arch.antennas_per_subarray);
        const double rate = sum_rate_optimal(delta, scenario).sum_rate;
        return Fitness{rate - kappa * penalty, penalty};
    };
    SamplerFn sampler = verified(
        [&arch](RngStream& rng) { return sample_feasible_offsets(arch, rng); },
        [&arch](std::span<const double> d) { return antenna_penalty(d, arch); });

    return finish_subproblem(run_swarm(cfg, fitness, sampler, stream_key, seeds));
}

SchemeResult ao_optimize(const Scenario& scenario, const ArrayArchitecture& arch,
                         const AoConfig& config, std::uint64_t master_seed, std::uint64_t trial) {
    arch.validate();
    SchemeResult result;
    result.scheme = Scheme::TwoLayer;

    const TwoLayerLayout initial = uniform_initial_layout(arch);
    TwoLayerLayout layout = initial;
    double rate = sum_rate_optimal(absolute_positions(layout, arch), scenario).sum_rate;
    result.rate_trace.push_back(rate);

    for (int round = 1; round <= config.max_rounds; ++round) {
        std::vector<std::vector<double>> q_seed{layout.subarray_origins};
        auto sub = optimize_subarrays(layout.offsets, scenario, arch, config.subarray_swarm,
                                      scheme_stream_key(master_seed, trial, Scheme::TwoLayer,
                                                        2 * round - 1),
                                      q_seed);
        layout.subarray_origins = sub.position;

        std::vector<std::vector<double>> d_seed{layout.offsets};
        auto ant = optimize_antennas(layout.subarray_origins, scenario, arch,
                                     config.antenna_swarm,
                                     scheme_stream_key(master_seed, trial, Scheme::TwoLayer,
                                                       2 * round),
                                     d_seed);
        layout.offsets = ant.position;

        result.evaluations += sub.swarm.evaluations + ant.swarm.evaluations;
        if (config.record_pso_trace) {
            append_pso_trace(result, 2 * round - 1, sub.swarm);
            append_pso_trace(result, 2 * round, ant.swarm);
        }
        const double improvement = ant.sum_rate - rate;
        rate = ant.sum_rate;
        result.rate_trace.push_back(rate);
        result.rounds = round;
        if (improvement < config.epsilon) break;
    }

    result.layout = layout;
    result.positions = absolute_positions(layout, arch);
    result.sum_rate = rate;
    const Displacement cost = sum_displacement(initial, layout);
    result.subarray_displacement = cost.subarray;
    result.antenna_displacement = cost.antenna;
    return result;
}

SchemeResult sl_ma_optimize(const Scenario& scenario, const ArrayArchitecture& arch,
                            const SwarmConfig& config, std::uint64_t master_seed,
                            std::uint64_t trial, bool record_pso_trace) {
    arch.validate();
    const int antennas = arch.total_antennas();
    const double region = arch.region_length;

    SwarmConfig cfg = config;
    cfg.init_lo.assign(antennas, -0.5 * region);
    cfg.init_hi.assign(antennas, 0.5 * region);
    cfg.position_pad = arch.subarray_length;

    const double kappa = cfg.penalty_coefficient;
    FitnessFn fitness = [&scenario, region, kappa](std::span<const double> delta) {
        const double penalty = single_layer_penalty(delta, region);
        const double rate = sum_rate_optimal(delta, scenario).sum_rate;
        return Fitness{rate - kappa * penalty, penalty};
    };
    SamplerFn sampler = verified(
        [region, antennas](RngStream& rng) {
            return sample_feasible_single_layer(region, antennas, rng);
        },
        [region](std::span<const double> delta) {
            return single_layer_penalty(delta, region);
        });

    const std::vector<double> initial = fpa_positions(antennas);
    std::vector<std::vector<double>> seeds{initial};
    auto run = finish_subproblem(run_swarm(cfg, fitness, sampler,
                                           scheme_stream_key(master_seed, trial,
                                                             Scheme::SingleLayer, 1),
                                           seeds));

    SchemeResult result;
    result.scheme = Scheme::SingleLayer;
    result.positions = run.position;
    result.sum_rate = run.sum_rate;
    result.rate_trace = {sum_rate_optimal(initial, scenario).sum_rate, run.sum_rate};
    result.rounds = 1;
    result.evaluations = run.swarm.evaluations;
    // All motors are element-level; travel is accounted in the antenna column.
    for (int m = 0; m < antennas; ++m)
        result.antenna_displacement += std::abs(initial[m] - run.position[m]);
    if (record_pso_trace) append_pso_trace(result, 1, run.swarm);
    return result;
}

SchemeResult array_wise_optimize(const Scenario& scenario, const ArrayArchitecture& arch,
                                 const SwarmConfig& config, std::uint64_t master_seed,
                                 std::uint64_t trial, bool record_pso_trace) {
    const ArrayArchitecture rigid = ArrayArchitecture::array_wise(
        arch.num_subarrays, arch.antennas_per_subarray, arch.region_length);
    const TwoLayerLayout initial = uniform_initial_layout(rigid);

    // The uniform grid is the incumbent; the subarray positions matching the
    // conventional fixed array are always feasible here and seed a second
    // particle, so this scheme never falls below the fixed-array rate.
    std::vector<double> fpa_origins(rigid.num_subarrays);
    for (int s = 0; s < rigid.num_subarrays; ++s)
        fpa_origins[s] = -0.25 * rigid.total_antennas() +
                         0.5 * rigid.antennas_per_subarray * s;
    std::vector<std::vector<double>> seeds{initial.subarray_origins, fpa_origins};

    auto run = optimize_subarrays(initial.offsets, scenario, rigid, config,
                                  scheme_stream_key(master_seed, trial, Scheme::ArrayWise, 1),
                                  seeds);

    SchemeResult result;
    result.scheme = Scheme::ArrayWise;
    result.layout = make_layout(run.position, initial.offsets, rigid);
    result.positions = absolute_positions(result.layout, rigid);
    result.sum_rate = run.sum_rate;
    result.rate_trace = {sum_rate_optimal(absolute_positions(initial, rigid), scenario).sum_rate,
                         run.sum_rate};
    result.rounds = 1;
    result.evaluations = run.swarm.evaluations;
    const Displacement cost = sum_displacement(initial, result.layout);
    result.subarray_displacement = cost.subarray;
    result.antenna_displacement = cost.antenna; // zero: offsets never move
    if (record_pso_trace) append_pso_trace(result, 1, run.swarm);
    return result;
}

SchemeResult fpa_layout(const Scenario& scenario, const ArrayArchitecture& arch) {
    SchemeResult result;
    result.scheme = Scheme::FixedArray;
    result.positions = fpa_positions(arch.total_antennas());
    result.sum_rate = sum_rate_optimal(result.positions, scenario).sum_rate;
    result.rate_trace = {result.sum_rate};
    return result;
}

SchemeResult all_at_once_optimize(const Scenario& scenario, const ArrayArchitecture& arch,
                                  const SwarmConfig& config, long long budget_evaluations,
                                  std::uint64_t master_seed, std::uint64_t trial,
                                  bool record_pso_trace) {
    arch.validate();
    const int subs = arch.num_subarrays;
    const int antennas = arch.total_antennas();
    const int dim = subs + antennas;

    SwarmConfig cfg = config;
    cfg.num_iterations = static_cast<int>(
        std::max<long long>(1, budget_evaluations / std::max(1, cfg.num_particles)));
    cfg.init_lo.resize(dim);
    cfg.init_hi.resize(dim);
    for (int s = 0; s < subs; ++s) {
        cfg.init_lo[s] = -0.5 * arch.region_length;
        cfg.init_hi[s] = 0.5 * arch.region_length - arch.subarray_length;
    }
    for (int i = 0; i < antennas; ++i) {
        cfg.init_lo[subs + i] = 0.25;
        cfg.init_hi[subs + i] = arch.subarray_length - 0.25;
    }
    cfg.position_pad = arch.subarray_length;

    const double kappa = cfg.penalty_coefficient;
    const int per = arch.antennas_per_subarray;
    FitnessFn fitness = [&scenario, &arch, kappa, subs, per](std::span<const double> x) {
        const auto q = x.subspan(0, subs);
        const auto d = x.subspan(subs);
        const double penalty = subarray_penalty(q, arch) + antenna_penalty(d, arch);
        const auto delta = compose_positions(q, d, per);
        const double rate = sum_rate_optimal(delta, scenario).sum_rate;
        return Fitness{rate - kappa * penalty, penalty};
    };
    auto joint_penalty = [&arch, subs](std::span<const double> x) {
        return subarray_penalty(x.subspan(0, subs), arch) +
               antenna_penalty(x.subspan(subs), arch);
    };
    SamplerFn sampler = verified(
        [&arch](RngStream& rng) {
            auto q = sample_feasible_origins(arch, rng);
            auto d = sample_feasible_offsets(arch, rng);
            q.insert(q.end(), d.begin(), d.end());
            return q;
        },
        joint_penalty);

    const TwoLayerLayout initial = uniform_initial_layout(arch);
    std::vector<double> seed = initial.subarray_origins;
    seed.insert(seed.end(), initial.offsets.begin(), initial.offsets.end());
    std::vector<std::vector<double>> seeds{seed};

    auto run = finish_subproblem(run_swarm(cfg, fitness, sampler,
                                           scheme_stream_key(master_seed, trial,
                                                             Scheme::AllAtOnce, 1),
                                           seeds));

    SchemeResult result;
    result.scheme = Scheme::AllAtOnce;
    result.layout = make_layout(
        std::vector<double>(run.position.begin(), run.position.begin() + subs),
        std::vector<double>(run.position.begin() + subs, run.position.end()), arch);
    result.positions = absolute_positions(result.layout, arch);
    result.sum_rate = run.sum_rate;
    result.rate_trace = {sum_rate_optimal(absolute_positions(initial, arch), scenario).sum_rate,
                         run.sum_rate};
    result.rounds = 1;
    result.evaluations = run.swarm.evaluations;
    const Displacement cost = sum_displacement(initial, result.layout);
    result.subarray_displacement = cost.subarray;
    result.antenna_displacement = cost.antenna;
    if (record_pso_trace) append_pso_trace(result, 1, run.swarm);
    return result;
}

}  // namespace tlma
