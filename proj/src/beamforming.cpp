#include "tlma/beamforming.hpp"

#include <cmath>
#include <stdexcept>

namespace tlma {

namespace {

void require_user(const Eigen::MatrixXcd& channels, int user) {
    if (user < 0 || user >= channels.cols())
        throw std::out_of_range("beamforming: user index out of range");
}

} // namespace

Eigen::MatrixXcd interference_covariance(const Eigen::MatrixXcd& channels, int user, double snr) {
    require_user(channels, user);
    const Eigen::Index m = channels.rows();
    Eigen::MatrixXcd cov = Eigen::MatrixXcd::Identity(m, m);
    for (Eigen::Index i = 0; i < channels.cols(); ++i) {
        if (i == user) continue;
        cov.noalias() += snr * channels.col(i) * channels.col(i).adjoint();
    }
    return cov;
}

Eigen::VectorXcd mmse_beamformer(const Eigen::MatrixXcd& channels, int user, double snr) {
    require_user(channels, user);
    const Eigen::VectorXcd h = channels.col(user);
    const double norm = h.norm();
    if (norm == 0.0)
        throw std::domain_error("mmse_beamformer: zero channel, beam direction undefined");
    const Eigen::MatrixXcd cov = interference_covariance(channels, user, snr);
    Eigen::VectorXcd v = cov.llt().solve(h);
    v /= v.norm();
    return v;
}

double user_sinr(const Eigen::MatrixXcd& channels, const Eigen::VectorXcd& beamformer, int user,
                 double snr) {
    require_user(channels, user);
    const double signal = std::norm(beamformer.dot(channels.col(user)));
    double interference = 0.0;
    for (Eigen::Index i = 0; i < channels.cols(); ++i) {
        if (i == user) continue;
        interference += std::norm(beamformer.dot(channels.col(i)));
    }
    return snr * signal / (snr * interference + 1.0);
}

BeamformingResult sum_rate_optimal(std::span<const double> positions, const Scenario& scenario) {
    BeamformingResult result;
    const Eigen::MatrixXcd channels = channel_matrix(scenario, positions);
    const int users = scenario.num_users;
    result.beamformers.resize(channels.rows(), users);
    result.sinrs.resize(users);
    result.rates.resize(users);
    result.sum_rate = 0.0;
    for (int k = 0; k < users; ++k) {
        const Eigen::VectorXcd v = mmse_beamformer(channels, k, scenario.snr);
        result.beamformers.col(k) = v;
        result.sinrs[k] = user_sinr(channels, v, k, scenario.snr);
        result.rates[k] = std::log2(1.0 + result.sinrs[k]);
        result.sum_rate += result.rates[k];
    }
    return result;
}

}  // namespace tlma
