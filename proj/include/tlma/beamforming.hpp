#pragma once

#include <Eigen/Dense>
#include <span>

#include "tlma/channel.hpp"

namespace tlma {

struct BeamformingResult {
    Eigen::MatrixXcd beamformers; // M x K, unit-norm columns
    Eigen::VectorXd sinrs;        // linear
    Eigen::VectorXd rates;        // bps/Hz, rates[k] = log2(1 + sinrs[k])
    double sum_rate = 0.0;
};

// C_k = snr * sum_{i != k} h_i h_i^H + I. Hermitian, eigenvalues >= 1.
Eigen::MatrixXcd interference_covariance(const Eigen::MatrixXcd& channels, int user, double snr);

// v_k = C_k^{-1} h_k / ||C_k^{-1} h_k||, the SINR-maximizing unit-norm
// receiver. Solved via Cholesky (C_k is positive definite); throws
// std::domain_error for a zero channel.
Eigen::VectorXcd mmse_beamformer(const Eigen::MatrixXcd& channels, int user, double snr);

// snr * |v^H h_k|^2 / (snr * sum_{i != k} |v^H h_i|^2 + 1). Evaluates any
// beamformer, optimal or not; expects ||v|| ~ 1.
double user_sinr(const Eigen::MatrixXcd& channels, const Eigen::VectorXcd& beamformer, int user,
                 double snr);

// Sum rate under per-user MMSE receive beamforming: the fitness core shared
// by every position-optimization scheme.
BeamformingResult sum_rate_optimal(std::span<const double> positions, const Scenario& scenario);

}  // namespace tlma
