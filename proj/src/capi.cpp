#include "tlma/tlma.h"

#include <cstring>
#include <string>

#include <json.hpp>

#include "tlma/errors.hpp"
#include "tlma/harness.hpp"

struct tlma_config {
    tlma::ExperimentConfig config;
};

struct tlma_scenario {
    tlma::Scenario scenario;
};

struct tlma_result {
    tlma::SchemeResult result;
};

namespace {

thread_local std::string g_last_error;

void clear_error() { g_last_error.clear(); }

template <typename Fn>
tlma_status guarded(Fn&& fn) noexcept {
    try {
        clear_error();
        fn();
        return TLMA_OK;
    } catch (const tlma::ParseError& e) {
        g_last_error = e.what();
        return TLMA_ERR_PARSE;
    } catch (const tlma::IoError& e) {
        g_last_error = e.what();
        return TLMA_ERR_IO;
    } catch (const std::domain_error& e) {
        g_last_error = e.what();
        return TLMA_ERR_NUMERIC;
    } catch (const std::invalid_argument& e) {
        g_last_error = e.what();
        return TLMA_ERR_INVALID_ARGUMENT;
    } catch (const std::out_of_range& e) {
        g_last_error = e.what();
        return TLMA_ERR_INVALID_ARGUMENT;
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return TLMA_ERR_INTERNAL;
    } catch (...) {
        g_last_error = "unknown error";
        return TLMA_ERR_INTERNAL;
    }
}

tlma_status fail_invalid(const char* message) noexcept {
    g_last_error = message;
    return TLMA_ERR_INVALID_ARGUMENT;
}

tlma_status copy_string(const std::string& text, char* buffer, size_t capacity) noexcept {
    if (buffer == nullptr || capacity < text.size() + 1) {
        g_last_error = "buffer too small (need " + std::to_string(text.size() + 1) + " bytes)";
        return TLMA_ERR_INVALID_ARGUMENT;
    }
    std::memcpy(buffer, text.c_str(), text.size() + 1);
    return TLMA_OK;
}

tlma_status copy_doubles(const std::vector<double>& values, double* buffer, size_t capacity,
                         size_t* count) noexcept {
    if (count == nullptr) return fail_invalid("count pointer is null");
    *count = values.size();
    const size_t n = values.size() < capacity ? values.size() : capacity;
    if (n > 0 && buffer == nullptr) return fail_invalid("buffer is null");
    for (size_t i = 0; i < n; ++i) buffer[i] = values[i];
    return TLMA_OK;
}

tlma::Scheme parse_scheme(const char* scheme) {
    if (scheme == nullptr) throw std::invalid_argument("scheme is null");
    const auto parsed = tlma::scheme_from_string(scheme);
    if (!parsed)
        throw std::invalid_argument(std::string("unknown scheme '") + scheme +
                                    "' (expected tlma, slma, arraywise, fpa or allatonce)");
    return *parsed;
}

tlma::SchemeResult run_on_scenario(const tlma::ExperimentConfig& config,
                                   const tlma::Scenario& scenario, tlma::Scheme scheme,
                                   uint64_t trial) {
    tlma::validate(config);
    if (config.subarray_counts.size() > 1 || config.alphas.size() > 1 ||
        config.lengths.size() > 1)
        throw std::invalid_argument("single-scenario runs require a single sweep point");
    if (scenario.num_users != config.num_users)
        throw std::invalid_argument("scenario has " + std::to_string(scenario.num_users) +
                                    " users, config expects " +
                                    std::to_string(config.num_users));
    if (scenario.num_paths != config.num_paths)
        throw std::invalid_argument("scenario has " + std::to_string(scenario.num_paths) +
                                    " paths, config expects " +
                                    std::to_string(config.num_paths));
    const tlma::SweepPlan plan = tlma::plan_sweep(config);
    const tlma::ArrayArchitecture arch =
        tlma::architecture_at(config, plan.axis, plan.values.front());
    return tlma::run_scheme(scheme, scenario, arch, config, trial);
}

} // namespace

extern "C" {

const char* tlma_version(void) { return "0.1.0"; }

const char* tlma_status_name(tlma_status status) {
    switch (status) {
    case TLMA_OK: return "ok";
    case TLMA_ERR_INVALID_ARGUMENT: return "invalid_argument";
    case TLMA_ERR_PARSE: return "parse_error";
    case TLMA_ERR_IO: return "io_error";
    case TLMA_ERR_NUMERIC: return "numeric_error";
    case TLMA_ERR_INTERNAL: return "internal_error";
    }
    return "unknown";
}

const char* tlma_last_error(void) { return g_last_error.c_str(); }

tlma_status tlma_config_create(tlma_config** out) {
    if (out == nullptr) return fail_invalid("out pointer is null");
    return guarded([&] { *out = new tlma_config{}; });
}

void tlma_config_destroy(tlma_config* config) { delete config; }

tlma_status tlma_config_apply_profile(tlma_config* config, const char* name) {
    if (config == nullptr || name == nullptr) return fail_invalid("null argument");
    return guarded([&] { tlma::apply_profile(config->config, name); });
}

tlma_status tlma_config_load_file(tlma_config* config, const char* path) {
    if (config == nullptr || path == nullptr) return fail_invalid("null argument");
    return guarded([&] { config->config = tlma::load_config_file(path, config->config); });
}

tlma_status tlma_config_set(tlma_config* config, const char* key, const char* value) {
    if (config == nullptr || key == nullptr || value == nullptr)
        return fail_invalid("null argument");
    return guarded([&] { tlma::set_key(config->config, key, value); });
}

tlma_status tlma_config_get(const tlma_config* config, const char* key, char* buffer,
                            size_t capacity) {
    if (config == nullptr || key == nullptr) return fail_invalid("null argument");
    std::string value;
    const tlma_status status = guarded([&] { value = tlma::get_key(config->config, key); });
    if (status != TLMA_OK) return status;
    return copy_string(value, buffer, capacity);
}

tlma_status tlma_config_validate(const tlma_config* config) {
    if (config == nullptr) return fail_invalid("config is null");
    return guarded([&] { tlma::validate(config->config); });
}

tlma_status tlma_scenario_sample(const tlma_config* config, uint64_t trial,
                                 tlma_scenario** out) {
    if (config == nullptr || out == nullptr) return fail_invalid("null argument");
    return guarded([&] {
        *out = new tlma_scenario{tlma::sample_trial_scenario(config->config, trial)};
    });
}

tlma_status tlma_scenario_load(const char* path, tlma_scenario** out) {
    if (path == nullptr || out == nullptr) return fail_invalid("null argument");
    return guarded([&] { *out = new tlma_scenario{tlma::load_scenario(path)}; });
}

tlma_status tlma_scenario_save(const tlma_scenario* scenario, const char* path) {
    if (scenario == nullptr || path == nullptr) return fail_invalid("null argument");
    return guarded([&] { tlma::save_scenario(scenario->scenario, path); });
}

void tlma_scenario_destroy(tlma_scenario* scenario) { delete scenario; }

int tlma_scenario_num_users(const tlma_scenario* scenario) {
    return scenario ? scenario->scenario.num_users : 0;
}

int tlma_scenario_num_paths(const tlma_scenario* scenario) {
    return scenario ? scenario->scenario.num_paths : 0;
}

tlma_status tlma_run_scheme(const tlma_config* config, const tlma_scenario* scenario,
                            const char* scheme, uint64_t trial, tlma_result** out) {
    if (config == nullptr || scenario == nullptr || out == nullptr)
        return fail_invalid("null argument");
    return guarded([&] {
        *out = new tlma_result{
            run_on_scenario(config->config, scenario->scenario, parse_scheme(scheme), trial)};
    });
}

tlma_status tlma_replay(const tlma_config* config, const char* scenario_path,
                        const char* scheme, uint64_t trial, tlma_result** out) {
    if (config == nullptr || scenario_path == nullptr || out == nullptr)
        return fail_invalid("null argument");
    return guarded([&] {
        *out = new tlma_result{
            tlma::replay(scenario_path, parse_scheme(scheme), config->config, trial)};
    });
}

void tlma_result_destroy(tlma_result* result) { delete result; }

double tlma_result_sum_rate(const tlma_result* result) {
    return result ? result->result.sum_rate : 0.0;
}

double tlma_result_subarray_displacement(const tlma_result* result) {
    return result ? result->result.subarray_displacement : 0.0;
}

double tlma_result_antenna_displacement(const tlma_result* result) {
    return result ? result->result.antenna_displacement : 0.0;
}

int tlma_result_rounds(const tlma_result* result) { return result ? result->result.rounds : 0; }

long long tlma_result_evaluations(const tlma_result* result) {
    return result ? result->result.evaluations : 0;
}

tlma_status tlma_result_positions(const tlma_result* result, double* buffer, size_t capacity,
                                  size_t* count) {
    if (result == nullptr) return fail_invalid("result is null");
    return copy_doubles(result->result.positions, buffer, capacity, count);
}

tlma_status tlma_result_rate_trace(const tlma_result* result, double* buffer, size_t capacity,
                                   size_t* count) {
    if (result == nullptr) return fail_invalid("result is null");
    return copy_doubles(result->result.rate_trace, buffer, capacity, count);
}

tlma_status tlma_result_pso_trace_csv(const tlma_result* result, char* buffer, size_t capacity,
                                      size_t* needed) {
    if (result == nullptr || needed == nullptr) return fail_invalid("null argument");
    clear_error();
    std::string text = "call,iteration,best_fitness,best_penalty\n";
    char line[128];
    for (const auto& point : result->result.pso_trace) {
        std::snprintf(line, sizeof(line), "%d,%d,%.12g,%.12g\n", point.call, point.iteration,
                      point.best_fitness, point.best_penalty);
        text += line;
    }
    *needed = text.size() + 1;
    if (buffer == nullptr || capacity < text.size() + 1)
        return fail_invalid("buffer too small for pso trace csv");
    std::memcpy(buffer, text.c_str(), text.size() + 1);
    return TLMA_OK;
}

tlma_status tlma_result_layout_json(const tlma_result* result, char* buffer, size_t capacity,
                                    size_t* needed) {
    if (result == nullptr || needed == nullptr) return fail_invalid("null argument");
    std::string text;
    const tlma_status status = guarded([&] {
        nlohmann::json j;
        j["q"] = result->result.layout.subarray_origins;
        auto rows = nlohmann::json::array();
        const auto& layout = result->result.layout;
        if (!layout.subarray_origins.empty()) {
            const size_t per = layout.offsets.size() / layout.subarray_origins.size();
            for (size_t s = 0; s < layout.subarray_origins.size(); ++s) {
                auto row = nlohmann::json::array();
                for (size_t a = 0; a < per; ++a) row.push_back(layout.offsets[s * per + a]);
                rows.push_back(std::move(row));
            }
        }
        j["d"] = std::move(rows);
        text = j.dump();
    });
    if (status != TLMA_OK) return status;
    *needed = text.size() + 1;
    if (buffer == nullptr || capacity < text.size() + 1)
        return fail_invalid("buffer too small for layout json");
    std::memcpy(buffer, text.c_str(), text.size() + 1);
    return TLMA_OK;
}

tlma_status tlma_run_sweep(const tlma_config* config, char* detail_path, size_t detail_capacity,
                           char* aggregate_path, size_t aggregate_capacity) {
    if (config == nullptr) return fail_invalid("config is null");
    tlma::SweepOutput output;
    const tlma_status status = guarded([&] { output = tlma::run_sweep(config->config); });
    if (status != TLMA_OK) return status;
    if (detail_path != nullptr) {
        const tlma_status copy = copy_string(output.detail_path, detail_path, detail_capacity);
        if (copy != TLMA_OK) return copy;
    }
    if (aggregate_path != nullptr)
        return copy_string(output.aggregate_path, aggregate_path, aggregate_capacity);
    return TLMA_OK;
}

tlma_status tlma_sum_rate(const tlma_config* config, const tlma_scenario* scenario,
                          const double* positions, size_t count, double* out) {
    if (config == nullptr || scenario == nullptr || positions == nullptr || out == nullptr)
        return fail_invalid("null argument");
    return guarded([&] {
        std::span<const double> span(positions, count);
        *out = tlma::sum_rate_optimal(span, scenario->scenario).sum_rate;
    });
}

} // extern "C"
