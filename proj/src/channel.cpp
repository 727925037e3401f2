#include "tlma/channel.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <stdexcept>

#include <json.hpp>

#include "tlma/errors.hpp"

namespace tlma {

Eigen::VectorXcd steering_vector(double spatial_angle, std::span<const double> positions) {
    Eigen::VectorXcd b(positions.size());
    const double two_pi = 2.0 * std::numbers::pi;
    for (std::size_t m = 0; m < positions.size(); ++m) {
        const double phase = -two_pi * positions[m] * spatial_angle;
        b[static_cast<Eigen::Index>(m)] = {std::cos(phase), std::sin(phase)};
    }
    return b;
}

Eigen::VectorXcd user_channel(const Scenario& scenario, int user,
                              std::span<const double> positions) {
    if (user < 0 || user >= scenario.num_users)
        throw std::out_of_range("user_channel: user index out of range");
    Eigen::VectorXcd h = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(positions.size()));
    const double two_pi = 2.0 * std::numbers::pi;
    for (int n = 0; n < scenario.num_paths; ++n) {
        const std::complex<double> gain = std::conj(scenario.path_gains(user, n));
        const double theta = scenario.spatial_angles(user, n);
        for (std::size_t m = 0; m < positions.size(); ++m) {
            const double phase = -two_pi * positions[m] * theta;
            h[static_cast<Eigen::Index>(m)] +=
                gain * std::complex<double>{std::cos(phase), std::sin(phase)};
        }
    }
    return h;
}

Eigen::MatrixXcd channel_matrix(const Scenario& scenario, std::span<const double> positions) {
    Eigen::MatrixXcd channels(static_cast<Eigen::Index>(positions.size()), scenario.num_users);
    for (int k = 0; k < scenario.num_users; ++k)
        channels.col(k) = user_channel(scenario, k, positions);
    return channels;
}

Scenario sample_scenario(int num_users, int num_paths, double avg_power, double snr,
                         RngStream& rng) {
    if (num_users < 1 || num_paths < 1)
        throw std::invalid_argument("sample_scenario: num_users and num_paths must be positive");
    if (!(avg_power > 0.0) || !(snr > 0.0))
        throw std::invalid_argument("sample_scenario: avg_power and snr must be positive");
    Scenario scenario;
    scenario.num_users = num_users;
    scenario.num_paths = num_paths;
    scenario.snr = snr;
    scenario.avg_power = avg_power;
    scenario.spatial_angles.resize(num_users, num_paths);
    scenario.path_gains.resize(num_users, num_paths);
    const double path_var = avg_power / num_paths;
    for (int k = 0; k < num_users; ++k) {
        for (int n = 0; n < num_paths; ++n) {
            scenario.spatial_angles(k, n) = rng.uniform(-0.5, 0.5);
            scenario.path_gains(k, n) = rng.complex_normal(path_var);
        }
    }
    return scenario;
}

namespace {

constexpr const char* kScenarioSchema = "tlma-scenario-v1";

} // namespace

std::string scenario_to_json(const Scenario& scenario) {
    nlohmann::json j;
    j["schema"] = kScenarioSchema;
    j["num_users"] = scenario.num_users;
    j["num_paths"] = scenario.num_paths;
    j["snr"] = scenario.snr;
    j["avg_power"] = scenario.avg_power;
    auto angles = nlohmann::json::array();
    auto gains_re = nlohmann::json::array();
    auto gains_im = nlohmann::json::array();
    for (int k = 0; k < scenario.num_users; ++k) {
        auto arow = nlohmann::json::array();
        auto rrow = nlohmann::json::array();
        auto irow = nlohmann::json::array();
        for (int n = 0; n < scenario.num_paths; ++n) {
            arow.push_back(scenario.spatial_angles(k, n));
            rrow.push_back(scenario.path_gains(k, n).real());
            irow.push_back(scenario.path_gains(k, n).imag());
        }
        angles.push_back(std::move(arow));
        gains_re.push_back(std::move(rrow));
        gains_im.push_back(std::move(irow));
    }
    j["angles"] = std::move(angles);
    j["gains_re"] = std::move(gains_re);
    j["gains_im"] = std::move(gains_im);
    return j.dump(2);
}

Scenario scenario_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("scenario parse error: ") + e.what());
    }
    if (!j.contains("schema") || j["schema"] != kScenarioSchema)
        throw ParseError("scenario schema mismatch: expected " + std::string(kScenarioSchema));
    Scenario scenario;
    scenario.num_users = j.at("num_users").get<int>();
    scenario.num_paths = j.at("num_paths").get<int>();
    scenario.snr = j.at("snr").get<double>();
    scenario.avg_power = j.at("avg_power").get<double>();
    if (scenario.num_users < 1 || scenario.num_paths < 1)
        throw ParseError("scenario has invalid dimensions");
    scenario.spatial_angles.resize(scenario.num_users, scenario.num_paths);
    scenario.path_gains.resize(scenario.num_users, scenario.num_paths);
    const auto& angles = j.at("angles");
    const auto& gains_re = j.at("gains_re");
    const auto& gains_im = j.at("gains_im");
    if (static_cast<int>(angles.size()) != scenario.num_users)
        throw ParseError("scenario angle rows do not match num_users");
    for (int k = 0; k < scenario.num_users; ++k) {
        if (static_cast<int>(angles[k].size()) != scenario.num_paths)
            throw ParseError("scenario angle row length does not match num_paths");
        for (int n = 0; n < scenario.num_paths; ++n) {
            scenario.spatial_angles(k, n) = angles[k][n].get<double>();
            scenario.path_gains(k, n) = {gains_re.at(k).at(n).get<double>(),
                                         gains_im.at(k).at(n).get<double>()};
        }
    }
    return scenario;
}

void save_scenario(const Scenario& scenario, const std::string& path) {
    std::ofstream out(path);
    if (!out)
        throw IoError("cannot open scenario file for writing: " + path);
    out << scenario_to_json(scenario) << '\n';
    if (!out)
        throw IoError("failed writing scenario file: " + path);
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open scenario file: " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return scenario_from_json(text);
}

}  // namespace tlma
