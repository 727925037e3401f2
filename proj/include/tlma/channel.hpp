#pragma once

#include <Eigen/Dense>
#include <span>
#include <string>

#include "tlma/rng.hpp"

namespace tlma {

// One multipath channel realization. Angles are the dimensionless spatial
// angles multiplying position in the steering phase; positions are in
// wavelengths, so the phase of antenna m for path (k, n) is
// -2*pi * delta_m * theta_{k,n}.
struct Scenario {
    int num_users = 0; // K
    int num_paths = 0; // N_PA
    Eigen::MatrixXd spatial_angles; // K x N_PA
    Eigen::MatrixXcd path_gains;    // K x N_PA
    double snr = 1.0;       // transmit SNR gamma = P_t / sigma^2, linear
    double avg_power = 1.0; // per-user gain normalization: E|beta|^2 = avg_power / N_PA
};

// Far-field steering vector: entry m is exp(-j * 2*pi * positions[m] * angle).
Eigen::VectorXcd steering_vector(double spatial_angle, std::span<const double> positions);

// h_k = sum_n conj(beta_{k,n}) * b(theta_{k,n}, positions). User index is 0-based.
Eigen::VectorXcd user_channel(const Scenario& scenario, int user,
                              std::span<const double> positions);

// M x K matrix whose column k is user_channel(scenario, k, positions).
Eigen::MatrixXcd channel_matrix(const Scenario& scenario, std::span<const double> positions);

// Angles i.i.d. U(-0.5, 0.5); gains i.i.d. CN(0, avg_power / num_paths).
// Deterministic given the stream.
Scenario sample_scenario(int num_users, int num_paths, double avg_power, double snr,
                         RngStream& rng);

// Self-contained JSON record (schema "tlma-scenario-v1"): doubles round-trip
// bit-exactly, so stored scenarios replay identically.
std::string scenario_to_json(const Scenario& scenario);
Scenario scenario_from_json(const std::string& text);
void save_scenario(const Scenario& scenario, const std::string& path);
Scenario load_scenario(const std::string& path);

}  // namespace tlma
