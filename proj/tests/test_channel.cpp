#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "tlma/beamforming.hpp"
#include "tlma/channel.hpp"
#include "tlma/errors.hpp"

using namespace tlma;
using cd = std::complex<double>;

namespace {

Scenario single_path(double theta, cd gain, double snr = 1.0) {
    Scenario s;
    s.num_users = 1;
    s.num_paths = 1;
    s.spatial_angles.resize(1, 1);
    s.spatial_angles(0, 0) = theta;
    s.path_gains.resize(1, 1);
    s.path_gains(0, 0) = gain;
    s.snr = snr;
    return s;
}

} // namespace

TEST_CASE("steering vector phases") {
    const std::vector<double> delta{0.0, 0.5};

    const auto flat = steering_vector(0.0, delta);
    CHECK(flat[0] == cd{1.0, 0.0});
    CHECK(flat[1] == cd{1.0, 0.0});

    // Quarter-turn phase at half-wavelength spacing and angle 0.5.
    const auto quarter = steering_vector(0.5, delta);
    CHECK(quarter[0].real() == doctest::Approx(1.0));
    CHECK(quarter[1].real() == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(quarter[1].imag() == doctest::Approx(-1.0));

    RngStream rng(3);
    for (int it = 0; it < 50; ++it) {
        std::vector<double> pos{rng.uniform(-10, 10), rng.uniform(-10, 10),
                                rng.uniform(-10, 10)};
        const auto b = steering_vector(rng.uniform(-0.5, 0.5), pos);
        for (int m = 0; m < b.size(); ++m)
            CHECK(std::abs(b[m]) == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("steering vector shift covariance and conjugate symmetry") {
    RngStream rng(4);
    for (int it = 0; it < 50; ++it) {
        std::vector<double> pos{rng.uniform(-5, 5), rng.uniform(-5, 5), rng.uniform(-5, 5),
                                rng.uniform(-5, 5)};
        const double theta = rng.uniform(-0.5, 0.5);
        const double t = rng.uniform(-3, 3);

        std::vector<double> shifted = pos;
        for (auto& p : shifted) p += t;
        const auto b = steering_vector(theta, pos);
        const auto bs = steering_vector(theta, shifted);
        const double phase = -2.0 * std::numbers::pi * t * theta;
        const cd factor{std::cos(phase), std::sin(phase)};
        for (int m = 0; m < b.size(); ++m)
            CHECK(std::abs(bs[m] - factor * b[m]) < 1e-12);

        const auto bneg = steering_vector(-theta, pos);
        for (int m = 0; m < b.size(); ++m)
            CHECK(std::abs(bneg[m] - std::conj(b[m])) < 1e-14);
    }
}

TEST_CASE("user channel composition") {
    // Single zero-angle path: all-ones vector.
    const std::vector<double> delta{0.0, 0.5};
    auto s = single_path(0.0, cd{1.0, 0.0});
    auto h = user_channel(s, 0, delta);
    CHECK(h[0] == cd{1.0, 0.0});
    CHECK(h[1] == cd{1.0, 0.0});

    // Two opposite-angle unit paths cancel their phases at the origin.
    Scenario two;
    two.num_users = 1;
    two.num_paths = 2;
    two.spatial_angles.resize(1, 2);
    two.spatial_angles(0, 0) = 0.31;
    two.spatial_angles(0, 1) = -0.31;
    two.path_gains.resize(1, 2);
    two.path_gains(0, 0) = cd{1.0, 0.0};
    two.path_gains(0, 1) = cd{1.0, 0.0};
    const std::vector<double> origin{0.0};
    const auto h2 = user_channel(two, 0, origin);
    CHECK(h2[0].real() == doctest::Approx(2.0));
    CHECK(h2[0].imag() == doctest::Approx(0.0));

    // Single path at angle 0.5: h = conj(beta) * b = [1, -j].
    auto s3 = single_path(0.5, cd{1.0, 0.0});
    const auto h3 = user_channel(s3, 0, delta);
    CHECK(h3[0].real() == doctest::Approx(1.0));
    CHECK(h3[0].imag() == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(h3[1].real() == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(h3[1].imag() == doctest::Approx(-1.0));

    CHECK_THROWS_AS(user_channel(s3, 1, delta), std::out_of_range);
    CHECK_THROWS_AS(user_channel(s3, -1, delta), std::out_of_range);
}

TEST_CASE("user channel is linear in the gains") {
    RngStream rng(9);
    Scenario a, b;
    a.num_users = b.num_users = 1;
    a.num_paths = b.num_paths = 3;
    a.spatial_angles.resize(1, 3);
    a.path_gains.resize(1, 3);
    b.path_gains.resize(1, 3);
    for (int n = 0; n < 3; ++n) {
        a.spatial_angles(0, n) = rng.uniform(-0.5, 0.5);
        a.path_gains(0, n) = rng.complex_normal(1.0);
        b.path_gains(0, n) = rng.complex_normal(1.0);
    }
    b.spatial_angles = a.spatial_angles;

    Scenario sum = a;
    sum.path_gains = a.path_gains + b.path_gains;
    const std::vector<double> pos{-1.3, 0.4, 2.2};
    const auto ha = user_channel(a, 0, pos);
    const auto hb = user_channel(b, 0, pos);
    const auto hsum = user_channel(sum, 0, pos);
    for (int m = 0; m < 3; ++m)
        CHECK(std::abs(hsum[m] - (ha[m] + hb[m])) < 1e-12);
}

TEST_CASE("channel matrix assembles user columns") {
    RngStream rng(12);
    const auto s = sample_scenario(3, 3, 1.0, 9.5, rng);
    std::vector<double> pos(12);
    for (auto& p : pos) p = rng.uniform(-12, 12);

    const auto channels = channel_matrix(s, pos);
    CHECK(channels.rows() == 12);
    CHECK(channels.cols() == 3);
    for (int k = 0; k < 3; ++k) {
        const auto h = user_channel(s, k, pos);
        for (int m = 0; m < 12; ++m)
            CHECK(channels(m, k) == h[m]);
    }

    // Swapping users permutes the columns.
    Scenario swapped = s;
    swapped.spatial_angles.row(0).swap(swapped.spatial_angles.row(2));
    swapped.path_gains.row(0).swap(swapped.path_gains.row(2));
    const auto channels2 = channel_matrix(swapped, pos);
    CHECK((channels2.col(0) - channels.col(2)).norm() == 0.0);
    CHECK((channels2.col(2) - channels.col(0)).norm() == 0.0);
}

TEST_CASE("scenario sampler statistics and determinism") {
    RngStream a(77), b(77);
    const auto s1 = sample_scenario(3, 3, 1.0, 9.5, a);
    const auto s2 = sample_scenario(3, 3, 1.0, 9.5, b);
    CHECK((s1.spatial_angles - s2.spatial_angles).norm() == 0.0);
    CHECK((s1.path_gains - s2.path_gains).norm() == 0.0);

    RngStream c(78);
    const auto s3 = sample_scenario(3, 3, 1.0, 9.5, c);
    CHECK((s1.path_gains - s3.path_gains).norm() != 0.0);

    // Angles stay inside [-0.5, 0.5]; |beta|^2 averages avg_power / N_PA.
    RngStream big(5150);
    const int draws = 100000;
    double power = 0.0;
    for (int it = 0; it < draws / 4; ++it) {
        const auto s = sample_scenario(2, 2, 1.0, 1.0, big);
        for (int k = 0; k < 2; ++k)
            for (int n = 0; n < 2; ++n) {
                CHECK(s.spatial_angles(k, n) >= -0.5);
                CHECK(s.spatial_angles(k, n) <= 0.5);
                power += std::norm(s.path_gains(k, n));
            }
    }
    power /= draws;
    CHECK(power == doctest::Approx(0.5).epsilon(0.02));
}

TEST_CASE("downstream rates are translation invariant for single-path users") {
    RngStream rng(31);
    for (int it = 0; it < 20; ++it) {
        const int users = 1 + static_cast<int>(rng.bits() % 3);
        const auto s = sample_scenario(users, 1, 1.0, rng.uniform(0.5, 20.0), rng);
        std::vector<double> pos(6);
        for (auto& p : pos) p = rng.uniform(-8, 8);
        std::vector<double> shifted = pos;
        const double t = rng.uniform(-5, 5);
        for (auto& p : shifted) p += t;
        const double r0 = sum_rate_optimal(pos, s).sum_rate;
        const double r1 = sum_rate_optimal(shifted, s).sum_rate;
        CHECK(r1 == doctest::Approx(r0).epsilon(1e-9));
    }
}

TEST_CASE("scenario json round trip is bit exact") {
    RngStream rng(123);
    const auto s = sample_scenario(3, 3, 1.0, 9.5, rng);
    const auto restored = scenario_from_json(scenario_to_json(s));
    CHECK(restored.num_users == s.num_users);
    CHECK(restored.num_paths == s.num_paths);
    CHECK(restored.snr == s.snr);
    CHECK(restored.avg_power == s.avg_power);
    CHECK((restored.spatial_angles - s.spatial_angles).norm() == 0.0);
    CHECK((restored.path_gains - s.path_gains).norm() == 0.0);

    CHECK_THROWS_AS(scenario_from_json("{\"schema\":\"bogus\"}"), ParseError);
    CHECK_THROWS_AS(scenario_from_json("not json"), ParseError);
}
