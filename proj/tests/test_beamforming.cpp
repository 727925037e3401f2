#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "tlma/beamforming.hpp"
#include "tlma/channel.hpp"
#include "tlma/rng.hpp"

using namespace tlma;
using cd = std::complex<double>;

namespace {

Eigen::VectorXcd random_unit_beamformer(int dim, RngStream& rng) {
    Eigen::VectorXcd v(dim);
    for (int m = 0; m < dim; ++m)
        v[m] = cd{rng.normal(), rng.normal()};
    v /= v.norm();
    return v;
}

// The hand-checked 2x2 instance: h1 = [1, 0], h2 = [1, 1], snr = 1.
Eigen::MatrixXcd hand_case() {
    Eigen::MatrixXcd channels(2, 2);
    channels << cd{1, 0}, cd{1, 0}, cd{0, 0}, cd{1, 0};
    return channels;
}

} // namespace

TEST_CASE("interference covariance") {
    // Single user: empty interference sum leaves the identity.
    Eigen::MatrixXcd one(2, 1);
    one << cd{3, 0}, cd{4, 0};
    const auto eye = interference_covariance(one, 0, 2.0);
    CHECK((eye - Eigen::MatrixXcd::Identity(2, 2)).norm() == 0.0);

    // Rank-one update on a basis vector.
    Eigen::MatrixXcd two(2, 2);
    two << cd{1, 0}, cd{0, 0}, cd{0, 0}, cd{1, 0};
    const auto cov = interference_covariance(two, 0, 1.0);
    Eigen::MatrixXcd expected(2, 2);
    expected << cd{1, 0}, cd{0, 0}, cd{0, 0}, cd{2, 0};
    CHECK((cov - expected).norm() < 1e-15);

    CHECK_THROWS_AS(interference_covariance(two, 2, 1.0), std::out_of_range);

    RngStream rng(2);
    for (int it = 0; it < 20; ++it) {
        Eigen::MatrixXcd channels(4, 3);
        for (int m = 0; m < 4; ++m)
            for (int k = 0; k < 3; ++k)
                channels(m, k) = rng.complex_normal(1.0);
        const auto c = interference_covariance(channels, 1, 3.0);
        CHECK((c - c.adjoint()).norm() < 1e-12);
        // Eigenvalues of gamma * sum h h^H + I never drop below 1.
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(c);
        CHECK(eig.eigenvalues().minCoeff() >= 1.0 - 1e-12);
    }
}

TEST_CASE("matched filter when interference is absent") {
    Eigen::MatrixXcd channels(2, 1);
    channels << cd{3, 0}, cd{4, 0};
    const auto v = mmse_beamformer(channels, 0, 1.0);
    CHECK(v[0].real() == doctest::Approx(0.6));
    CHECK(v[1].real() == doctest::Approx(0.8));

    // K = 1: SINR reduces to snr * ||h||^2.
    CHECK(user_sinr(channels, v, 0, 2.0) == doctest::Approx(50.0));
}

TEST_CASE("hand-derived two-user case") {
    const auto channels = hand_case();
    const auto v = mmse_beamformer(channels, 0, 1.0);
    const double root5 = std::sqrt(5.0);
    // Direction [2, -1]/sqrt(5), up to a global phase (real here).
    CHECK(std::abs(v[0] - cd{2.0 / root5, 0.0}) < 1e-12);
    CHECK(std::abs(v[1] - cd{-1.0 / root5, 0.0}) < 1e-12);

    const double sinr = user_sinr(channels, v, 0, 1.0);
    CHECK(sinr == doctest::Approx(2.0 / 3.0).epsilon(1e-12));

    // Independent oracle: a dense grid over complex unit vectors
    // [cos a, sin a * e^{i phi}] (global phase fixed) never beats the
    // closed form, and approaches it.
    double best = 0.0;
    const int na = 314, np = 628;
    for (int ia = 0; ia <= na; ++ia) {
        const double a = 0.5 * std::numbers::pi * ia / na;
        for (int ip = 0; ip < np; ++ip) {
            const double phi = 2.0 * std::numbers::pi * ip / np;
            Eigen::VectorXcd u(2);
            u << cd{std::cos(a), 0.0}, std::polar(std::sin(a), phi);
            best = std::max(best, user_sinr(channels, u, 0, 1.0));
        }
    }
    CHECK(best <= sinr + 1e-9);
    CHECK(best >= sinr - 1e-3);
}

TEST_CASE("orthogonal channels decouple") {
    Eigen::MatrixXcd channels(2, 2);
    channels << cd{1, 0}, cd{0, 0}, cd{0, 0}, cd{1, 0};
    const auto v0 = mmse_beamformer(channels, 0, 1.0);
    CHECK(std::abs(v0[0] - cd{1, 0}) < 1e-12);
    CHECK(user_sinr(channels, v0, 0, 1.0) == doctest::Approx(1.0));
}

TEST_CASE("zero channel is rejected") {
    Eigen::MatrixXcd channels = Eigen::MatrixXcd::Zero(3, 2);
    channels.col(1).setOnes();
    CHECK_THROWS_AS(mmse_beamformer(channels, 0, 1.0), std::domain_error);
}

TEST_CASE("sum rate under optimal beamforming") {
    // Orthogonal two-user case: each rate is 1 bps/Hz.
    Scenario s;
    s.num_users = 2;
    s.num_paths = 1;
    s.snr = 1.0;
    s.spatial_angles.resize(2, 1);
    s.spatial_angles << 0.0, 0.5;
    s.path_gains.resize(2, 1);
    s.path_gains << cd{1, 0}, cd{1, 0};
    // Positions 0 and 1: b(0) = [1, 1], b(0.5) = [1, -1]; orthogonal.
    const std::vector<double> pos{0.0, 1.0};
    const auto result = sum_rate_optimal(pos, s);
    CHECK(result.sinrs[0] == doctest::Approx(2.0)); // ||h||^2 = 2 after nulling
    CHECK(result.sum_rate == doctest::Approx(2.0 * std::log2(3.0)).epsilon(1e-12));

    // Single user, single antenna: log2(1 + snr).
    Scenario single;
    single.num_users = 1;
    single.num_paths = 1;
    single.snr = 3.0;
    single.spatial_angles.resize(1, 1);
    single.spatial_angles(0, 0) = 0.37;
    single.path_gains.resize(1, 1);
    single.path_gains(0, 0) = cd{1, 0};
    const std::vector<double> one{0.7};
    CHECK(sum_rate_optimal(one, single).sum_rate == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("result is internally consistent") {
    RngStream rng(17);
    const auto s = sample_scenario(3, 3, 1.0, std::pow(10.0, 0.978), rng);
    std::vector<double> pos(12);
    for (auto& p : pos) p = rng.uniform(-12.0, 12.0);

    const auto result = sum_rate_optimal(pos, s);
    const auto channels = channel_matrix(s, pos);
    double sum = 0.0;
    for (int k = 0; k < 3; ++k) {
        CHECK(result.beamformers.col(k).norm() == doctest::Approx(1.0).epsilon(1e-12));
        const auto v = mmse_beamformer(channels, k, s.snr);
        const double sinr = user_sinr(channels, v, k, s.snr);
        CHECK(result.sinrs[k] == doctest::Approx(sinr).epsilon(1e-12));
        CHECK(result.rates[k] == doctest::Approx(std::log2(1.0 + sinr)).epsilon(1e-12));
        sum += std::log2(1.0 + sinr);
    }
    CHECK(result.sum_rate == doctest::Approx(sum).epsilon(1e-12));
}

TEST_CASE("no random beamformer beats the closed form") {
    RngStream rng(23);
    for (int instance = 0; instance < 5; ++instance) {
        const auto s = sample_scenario(3, 3, 1.0, std::pow(10.0, 0.978), rng);
        std::vector<double> pos(12);
        for (auto& p : pos) p = rng.uniform(-12.0, 12.0);
        const auto channels = channel_matrix(s, pos);
        for (int k = 0; k < 3; ++k) {
            const auto v = mmse_beamformer(channels, k, s.snr);
            const double best = user_sinr(channels, v, k, s.snr);
            for (int it = 0; it < 300; ++it) {
                const auto u = random_unit_beamformer(12, rng);
                CHECK(user_sinr(channels, u, k, s.snr) <= best + 1e-9);
            }
        }
    }
}

TEST_CASE("beam direction is invariant to channel scaling") {
    RngStream rng(29);
    const auto s = sample_scenario(2, 2, 1.0, 4.0, rng);
    std::vector<double> pos(6);
    for (auto& p : pos) p = rng.uniform(-6.0, 6.0);
    auto channels = channel_matrix(s, pos);

    const auto v = mmse_beamformer(channels, 0, s.snr);
    const double sinr = user_sinr(channels, v, 0, s.snr);

    const cd c = std::polar(2.5, 1.1);
    Eigen::MatrixXcd scaled = channels;
    scaled.col(0) *= c;
    const auto vs = mmse_beamformer(scaled, 0, s.snr);
    // Only the unit phase of c survives in the beamformer.
    const cd phase = c / std::abs(c);
    CHECK((vs - phase * v).norm() < 1e-10);

    // SINR scales by |c|^2 in the numerator only.
    const double sinr_scaled = user_sinr(scaled, vs, 0, s.snr);
    const double signal = std::norm(v.dot(channels.col(0)));
    const double interference = std::norm(v.dot(channels.col(1)));
    const double predicted = s.snr * std::norm(c) * signal / (s.snr * interference + 1.0);
    CHECK(sinr_scaled == doctest::Approx(predicted).epsilon(1e-10));
    CHECK(sinr_scaled >= sinr); // |c| > 1 here
}

TEST_CASE("sum rate is non-decreasing in snr") {
    RngStream rng(37);
    for (int it = 0; it < 10; ++it) {
        auto s = sample_scenario(3, 3, 1.0, 1.0, rng);
        std::vector<double> pos(9);
        for (auto& p : pos) p = rng.uniform(-10.0, 10.0);
        double previous = 0.0;
        for (double snr : {0.5, 1.0, 2.0, 4.0, 8.0, 16.0}) {
            s.snr = snr;
            const double rate = sum_rate_optimal(pos, s).sum_rate;
            CHECK(rate >= previous - 1e-12);
            previous = rate;
        }
    }
}

TEST_CASE("translation invariance for single-path users") {
    RngStream rng(41);
    for (int it = 0; it < 25; ++it) {
        const int users = 1 + static_cast<int>(rng.bits() % 4);
        const auto s = sample_scenario(users, 1, 1.0, rng.uniform(0.5, 20.0), rng);
        std::vector<double> pos(8);
        for (auto& p : pos) p = rng.uniform(-10.0, 10.0);
        const double t = rng.uniform(-7.0, 7.0);
        std::vector<double> shifted = pos;
        for (auto& p : shifted) p += t;
        CHECK(sum_rate_optimal(shifted, s).sum_rate ==
              doctest::Approx(sum_rate_optimal(pos, s).sum_rate).epsilon(1e-9));
    }
}
