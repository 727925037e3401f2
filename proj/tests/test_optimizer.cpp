#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "tlma/optimizer.hpp"

using namespace tlma;

namespace {

SwarmConfig tiny_swarm(int particles = 14, int iterations = 12) {
    SwarmConfig cfg;
    cfg.num_particles = particles;
    cfg.num_iterations = iterations;
    return cfg;
}

AoConfig tiny_ao(int rounds = 3, double epsilon = 1e-3) {
    AoConfig cfg;
    cfg.max_rounds = rounds;
    cfg.epsilon = epsilon;
    cfg.subarray_swarm = tiny_swarm();
    cfg.antenna_swarm = tiny_swarm();
    return cfg;
}

Scenario random_scenario(int users, int paths, std::uint64_t seed, double snr = 9.5) {
    RngStream rng(seed);
    return sample_scenario(users, paths, 1.0, snr, rng);
}

} // namespace

TEST_CASE("scheme names round trip") {
    for (Scheme s : {Scheme::TwoLayer, Scheme::SingleLayer, Scheme::ArrayWise,
                     Scheme::FixedArray, Scheme::AllAtOnce}) {
        const auto back = scheme_from_string(to_string(s));
        REQUIRE(back.has_value());
        CHECK(*back == s);
    }
    CHECK_FALSE(scheme_from_string("nonesuch").has_value());
}

TEST_CASE("fitness decomposes into rate minus weighted penalty") {
    const auto arch = ArrayArchitecture::from_alpha(2, 2, 10.0, 0.4);
    const auto scenario = random_scenario(2, 2, 5);
    const auto layout = uniform_initial_layout(arch);
    const double kappa = 1e6;

    const double rate =
        sum_rate_optimal(absolute_positions(layout, arch), scenario).sum_rate;
    CHECK(fitness_subarray(layout.subarray_origins, layout.offsets, scenario, arch, kappa) ==
          doctest::Approx(rate).epsilon(1e-12));
    CHECK(fitness_antenna(layout.offsets, layout.subarray_origins, scenario, arch, kappa) ==
          doctest::Approx(rate).epsilon(1e-12));

    // Violating the spacing constraint by one wavelength costs kappa.
    std::vector<double> bad_q{0.0, 1.0}; // gap 1 < L_A = 2
    const double penalty = subarray_penalty(bad_q, arch);
    CHECK(penalty == doctest::Approx(1.0));
    const double bad_q_rate =
        sum_rate_optimal(absolute_positions({bad_q, layout.offsets}, arch), scenario).sum_rate;
    const double f = fitness_subarray(bad_q, layout.offsets, scenario, arch, kappa);
    CHECK(f <= bad_q_rate - kappa + 1e-9);
    // Decomposition holds to 1e-12 of the dominant (penalty) scale; the
    // subtraction itself rounds at ~1e-10 absolute when kappa*P ~ 1e6.
    CHECK(std::abs(f + kappa * penalty - bad_q_rate) <= 1e-12 * kappa * penalty);

    std::vector<double> bad_d{0.1, 0.7, 0.25, 0.75};
    const double apenalty = antenna_penalty(bad_d, arch);
    CHECK(apenalty > 0.0);
    const double bad_d_rate =
        sum_rate_optimal(absolute_positions({layout.subarray_origins, bad_d}, arch), scenario)
            .sum_rate;
    const double fa = fitness_antenna(bad_d, layout.subarray_origins, scenario, arch, kappa);
    CHECK(std::abs(fa + kappa * apenalty - bad_d_rate) <= 1e-12 * kappa * apenalty);
}

TEST_CASE("feasible samplers always produce zero penalty") {
    const auto arch = ArrayArchitecture::from_alpha(4, 3, 24.0, 0.375);
    RngStream rng(11);
    double q_min = 1e9, q_max = -1e9;
    for (int it = 0; it < 1000; ++it) {
        const auto q = sample_feasible_origins(arch, rng);
        CHECK(subarray_penalty(q, arch) == 0.0);
        q_min = std::min(q_min, q.front());
        q_max = std::max(q_max, q.back());
        const auto d = sample_feasible_offsets(arch, rng);
        CHECK(antenna_penalty(d, arch) == 0.0);
        const auto delta = sample_feasible_single_layer(24.0, 12, rng);
        CHECK(single_layer_penalty(delta, 24.0) == 0.0);
    }
    // The sampler explores the region rather than hugging one corner.
    CHECK(q_min < -11.0);
    CHECK(q_max > 8.0);

    // Packed offsets collapse to the grid.
    const auto rigid = ArrayArchitecture::array_wise(2, 3, 24.0);
    const auto d = sample_feasible_offsets(rigid, rng);
    CHECK(d == std::vector<double>{0.25, 0.75, 1.25, 0.25, 0.75, 1.25});
}

TEST_CASE("single antenna: flat objective, feasible answer") {
    // M_S = 1, M_A = 1: with one antenna and one path the rate cannot depend
    // on position; brute force confirms, the optimizer returns any feasible
    // point.
    const auto arch = ArrayArchitecture::from_alpha(1, 1, 10.0, 0.2);
    const auto scenario = random_scenario(1, 1, 3);
    const auto layout = uniform_initial_layout(arch);

    double reference = -1.0;
    for (int g = 0; g <= 100; ++g) {
        const double q = -5.0 + g * (5.0 - 2.0 + 5.0) / 100.0;
        if (q > 3.0) break;
        const double rate = sum_rate_optimal(std::vector<double>{q + layout.offsets[0]},
                                             scenario)
                                .sum_rate;
        if (reference < 0.0)
            reference = rate;
        else
            CHECK(rate == doctest::Approx(reference).epsilon(1e-12));
    }

    std::vector<std::vector<double>> seeds{layout.subarray_origins};
    const auto result = optimize_subarrays(layout.offsets, scenario, arch, tiny_swarm(), 17,
                                           seeds);
    CHECK(result.position.size() == 1);
    CHECK(result.position[0] >= -5.0);
    CHECK(result.position[0] <= 3.0);
    CHECK(result.sum_rate == doctest::Approx(reference).epsilon(1e-9));
}

TEST_CASE("subproblem results never fall below the injected incumbent") {
    const auto arch = ArrayArchitecture::from_alpha(2, 3, 12.0, 0.8);
    const auto scenario = random_scenario(2, 3, 21);
    const auto layout = uniform_initial_layout(arch);
    const double incumbent_rate =
        sum_rate_optimal(absolute_positions(layout, arch), scenario).sum_rate;

    std::vector<std::vector<double>> q_seed{layout.subarray_origins};
    const auto sub = optimize_subarrays(layout.offsets, scenario, arch, tiny_swarm(), 1, q_seed);
    CHECK(sub.sum_rate >= incumbent_rate);
    CHECK(subarray_penalty(sub.position, arch) == 0.0);

    std::vector<std::vector<double>> d_seed{layout.offsets};
    const auto ant =
        optimize_antennas(layout.subarray_origins, scenario, arch, tiny_swarm(), 2, d_seed);
    CHECK(ant.sum_rate >= incumbent_rate);
    CHECK(antenna_penalty(ant.position, arch) == 0.0);
}

TEST_CASE("packed architecture short-circuits the offset search") {
    const auto rigid = ArrayArchitecture::array_wise(4, 3, 24.0);
    const auto scenario = random_scenario(3, 3, 9);
    const auto layout = uniform_initial_layout(rigid);
    std::vector<std::vector<double>> seeds{layout.offsets};
    const auto result =
        optimize_antennas(layout.subarray_origins, scenario, rigid, tiny_swarm(), 4, seeds);
    CHECK(result.swarm.evaluations == 0);
    for (int s = 0; s < 4; ++s)
        for (int a = 0; a < 3; ++a)
            CHECK(result.position[s * 3 + a] == 0.25 + 0.5 * a);
}

TEST_CASE("alternating optimization is monotone and converges") {
    const auto arch = ArrayArchitecture::from_alpha(2, 3, 12.0, 0.8);
    for (std::uint64_t trial = 0; trial < 8; ++trial) {
        const auto scenario = random_scenario(2, 3, 100 + trial);
        const auto result = ao_optimize(scenario, arch, tiny_ao(), 42, trial);
        REQUIRE(result.rate_trace.size() >= 2);
        for (std::size_t r = 1; r < result.rate_trace.size(); ++r)
            CHECK(result.rate_trace[r] >= result.rate_trace[r - 1]);
        CHECK(result.sum_rate == result.rate_trace.back());
        CHECK(check_feasible(result.layout, arch).feasible);
        CHECK(result.rounds >= 1);
        CHECK(result.rounds <= 3);
        // Budget accounting: every round spends both swarms in full.
        CHECK(result.evaluations == result.rounds * (14LL * 12 + 14LL * 12));
    }
}

TEST_CASE("one AO round with epsilon zero equals P3 then P4") {
    const auto arch = ArrayArchitecture::from_alpha(2, 3, 12.0, 0.8);
    const auto scenario = random_scenario(2, 3, 77);
    AoConfig cfg = tiny_ao(1, 0.0);
    const auto ao = ao_optimize(scenario, arch, cfg, 7, 0);

    const auto layout = uniform_initial_layout(arch);
    std::vector<std::vector<double>> q_seed{layout.subarray_origins};
    const auto sub = optimize_subarrays(layout.offsets, scenario, arch, cfg.subarray_swarm,
                                        scheme_stream_key(7, 0, Scheme::TwoLayer, 1), q_seed);
    std::vector<std::vector<double>> d_seed{layout.offsets};
    const auto ant = optimize_antennas(sub.position, scenario, arch, cfg.antenna_swarm,
                                       scheme_stream_key(7, 0, Scheme::TwoLayer, 2), d_seed);

    CHECK(ao.layout.subarray_origins == sub.position);
    CHECK(ao.layout.offsets == ant.position);
    CHECK(ao.sum_rate == ant.sum_rate);
    CHECK(ao.rounds == 1);
}

TEST_CASE("two-layer optimization beats the fixed array on average") {
    const auto arch = ArrayArchitecture::from_alpha(4, 3, 24.0, 0.375);
    double gain = 0.0;
    const int trials = 6;
    for (std::uint64_t trial = 0; trial < trials; ++trial) {
        const auto scenario = random_scenario(1, 3, 500 + trial);
        const auto tl = ao_optimize(scenario, arch, tiny_ao(2), 1, trial);
        const auto fixed = fpa_layout(scenario, arch);
        gain += tl.sum_rate - fixed.sum_rate;
    }
    CHECK(gain / trials > 0.0);
}

TEST_CASE("single-layer benchmark stays feasible and dominates its seed") {
    const auto arch = ArrayArchitecture::from_alpha(4, 3, 24.0, 0.375);
    const auto scenario = random_scenario(3, 3, 55);
    const auto result = sl_ma_optimize(scenario, arch, tiny_swarm(), 3, 0);
    CHECK(single_layer_penalty(result.positions, 24.0) == 0.0);
    CHECK(result.subarray_displacement == 0.0);
    CHECK(result.antenna_displacement >= 0.0);
    CHECK(result.rate_trace.size() == 2);
    CHECK(result.rate_trace[1] >= result.rate_trace[0]);

    // The conventional grid seeds the swarm, so its rate is a floor.
    const auto fixed = fpa_layout(scenario, arch);
    CHECK(result.sum_rate >= fixed.sum_rate);
}

TEST_CASE("array-wise benchmark pins offsets and never moves them") {
    const auto arch = ArrayArchitecture::from_alpha(4, 3, 24.0, 0.375);
    const auto scenario = random_scenario(3, 3, 66);
    const auto result = array_wise_optimize(scenario, arch, tiny_swarm(), 4, 0);
    CHECK(result.antenna_displacement == 0.0);
    for (int s = 0; s < 4; ++s)
        for (int a = 0; a < 3; ++a)
            CHECK(result.layout.offsets[s * 3 + a] == 0.25 + 0.5 * a);
    const auto rigid = ArrayArchitecture::array_wise(4, 3, 24.0);
    CHECK(check_feasible(result.layout, rigid).feasible);

    // The grid matching the conventional array seeds the swarm.
    const auto fixed = fpa_layout(scenario, arch);
    CHECK(result.sum_rate >= fixed.sum_rate);
}

TEST_CASE("fixed array layout") {
    const auto arch = ArrayArchitecture::from_alpha(4, 3, 24.0, 0.375);
    const auto scenario = random_scenario(3, 3, 99);
    const auto a = fpa_layout(scenario, arch);
    const auto b = fpa_layout(scenario, arch);
    CHECK(a.positions == b.positions);
    CHECK(a.sum_rate == b.sum_rate);
    CHECK(a.evaluations == 0);
    CHECK(a.subarray_displacement == 0.0);
    CHECK(a.antenna_displacement == 0.0);
    REQUIRE(a.positions.size() == 12);
    CHECK(a.positions.front() == -11.0 * 0.25);
    for (std::size_t m = 1; m < a.positions.size(); ++m)
        CHECK(a.positions[m] - a.positions[m - 1] == 0.5);
}

TEST_CASE("all-at-once uses the given budget and stays feasible") {
    const auto arch = ArrayArchitecture::from_alpha(2, 3, 12.0, 0.8);
    const auto scenario = random_scenario(2, 3, 123);
    const auto result = all_at_once_optimize(scenario, arch, tiny_swarm(14, 12), 14 * 24, 5, 0);
    CHECK(result.evaluations == 14 * 24);
    CHECK(check_feasible(result.layout, arch).feasible);
    CHECK(result.rate_trace.size() == 2);
    CHECK(result.rate_trace[1] >= result.rate_trace[0]);
    CHECK(subarray_penalty(result.layout.subarray_origins, arch) == 0.0);
    CHECK(antenna_penalty(result.layout.offsets, arch) == 0.0);
}

TEST_CASE("pso traces are recorded on request") {
    const auto arch = ArrayArchitecture::from_alpha(2, 3, 12.0, 0.8);
    const auto scenario = random_scenario(2, 3, 31);
    AoConfig cfg = tiny_ao(1, 0.0);
    cfg.record_pso_trace = true;
    const auto result = ao_optimize(scenario, arch, cfg, 2, 0);
    REQUIRE(result.pso_trace.size() == 2u * 12);
    CHECK(result.pso_trace.front().call == 1);
    CHECK(result.pso_trace.back().call == 2);
    CHECK(result.pso_trace.front().iteration == 1);
    for (const auto& point : result.pso_trace)
        CHECK(point.best_penalty == 0.0);
}
