#include "tlma/harness.hpp"

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace tlma {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split_list(const std::string& value) {
    std::vector<std::string> items;
    std::stringstream stream(value);
    std::string item;
    while (std::getline(stream, item, ',')) {
        item = trim(item);
        if (!item.empty()) items.push_back(item);
    }
    return items;
}

double parse_double(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const double parsed = std::stod(value, &used);
        if (used != value.size()) throw std::invalid_argument("trailing characters");
        return parsed;
    } catch (const std::exception&) {
        throw ParseError("key '" + key + "': cannot parse '" + value + "' as a number");
    }
}

long long parse_int(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const long long parsed = std::stoll(value, &used);
        if (used != value.size()) throw std::invalid_argument("trailing characters");
        return parsed;
    } catch (const std::exception&) {
        throw ParseError("key '" + key + "': cannot parse '" + value + "' as an integer");
    }
}

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

std::string join_doubles(const std::vector<double>& values) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out += ',';
        out += format_double(values[i]);
    }
    return out;
}

std::string join_ints(const std::vector<int>& values) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(values[i]);
    }
    return out;
}

std::string sanitize_cell(std::string text) {
    for (char& c : text)
        if (c == ',' || c == '\n' || c == '\r') c = ';';
    return text;
}

constexpr const char* kDetailSchema = "# tlma-detail-v1";
constexpr const char* kAggregateSchema = "# tlma-aggregate-v1";

} // namespace

double ExperimentConfig::snr_linear() const { return std::pow(10.0, snr_db / 10.0); }

SwarmConfig ExperimentConfig::subarray_swarm() const {
    SwarmConfig cfg;
    cfg.num_particles = subarray_particles;
    cfg.num_iterations = subarray_iterations;
    cfg.inertia = inertia;
    cfg.cognitive = cognitive;
    cfg.social = social;
    cfg.penalty_coefficient = penalty_coefficient;
    cfg.velocity_clamp = velocity_clamp;
    return cfg;
}

SwarmConfig ExperimentConfig::antenna_swarm() const {
    SwarmConfig cfg = subarray_swarm();
    cfg.num_particles = antenna_particles;
    cfg.num_iterations = antenna_iterations;
    return cfg;
}

AoConfig ExperimentConfig::ao_config() const {
    AoConfig cfg;
    cfg.max_rounds = ao_max_rounds;
    cfg.epsilon = ao_epsilon;
    cfg.subarray_swarm = subarray_swarm();
    cfg.antenna_swarm = antenna_swarm();
    cfg.record_pso_trace = record_pso_trace;
    return cfg;
}

long long ExperimentConfig::aao_budget() const {
    const long long per_round =
        static_cast<long long>(subarray_particles) * subarray_iterations +
        static_cast<long long>(antenna_particles) * antenna_iterations;
    return per_round * aao_budget_rounds;
}

void apply_profile(ExperimentConfig& config, const std::string& name) {
    if (name == "table1") {
        config.subarray_particles = 300;
        config.subarray_iterations = 200;
        config.antenna_particles = 300;
        config.antenna_iterations = 200;
        config.num_trials = 50;
    } else if (name == "desk") {
        config.subarray_particles = 60;
        config.subarray_iterations = 60;
        config.antenna_particles = 60;
        config.antenna_iterations = 60;
        config.num_trials = 50;
    } else {
        throw ParseError("unknown profile '" + name + "' (expected table1 or desk)");
    }
}

void set_key(ExperimentConfig& config, const std::string& key, const std::string& value) {
    if (key == "profile") {
        apply_profile(config, value);
    } else if (key == "carrier_ghz") {
        config.carrier_ghz = parse_double(key, value);
    } else if (key == "snr_db") {
        config.snr_db = parse_double(key, value);
    } else if (key == "num_antennas") {
        config.num_antennas = static_cast<int>(parse_int(key, value));
    } else if (key == "num_users") {
        config.num_users = static_cast<int>(parse_int(key, value));
    } else if (key == "num_paths") {
        config.num_paths = static_cast<int>(parse_int(key, value));
    } else if (key == "subarray_counts") {
        config.subarray_counts.clear();
        for (const auto& item : split_list(value))
            config.subarray_counts.push_back(static_cast<int>(parse_int(key, item)));
    } else if (key == "alphas") {
        config.alphas.clear();
        for (const auto& item : split_list(value))
            config.alphas.push_back(parse_double(key, item));
    } else if (key == "lengths") {
        config.lengths.clear();
        for (const auto& item : split_list(value))
            config.lengths.push_back(parse_double(key, item));
    } else if (key == "schemes") {
        config.schemes.clear();
        for (const auto& item : split_list(value)) {
            const auto scheme = scheme_from_string(item);
            if (!scheme) throw ParseError("key 'schemes': unknown scheme '" + item + "'");
            config.schemes.push_back(*scheme);
        }
    } else if (key == "subarray_particles") {
        config.subarray_particles = static_cast<int>(parse_int(key, value));
    } else if (key == "subarray_iterations") {
        config.subarray_iterations = static_cast<int>(parse_int(key, value));
    } else if (key == "antenna_particles") {
        config.antenna_particles = static_cast<int>(parse_int(key, value));
    } else if (key == "antenna_iterations") {
        config.antenna_iterations = static_cast<int>(parse_int(key, value));
    } else if (key == "inertia") {
        config.inertia = parse_double(key, value);
    } else if (key == "cognitive") {
        config.cognitive = parse_double(key, value);
    } else if (key == "social") {
        config.social = parse_double(key, value);
    } else if (key == "penalty_coefficient") {
        config.penalty_coefficient = parse_double(key, value);
    } else if (key == "velocity_clamp") {
        config.velocity_clamp = parse_double(key, value);
    } else if (key == "ao_max_rounds") {
        config.ao_max_rounds = static_cast<int>(parse_int(key, value));
    } else if (key == "ao_epsilon") {
        config.ao_epsilon = parse_double(key, value);
    } else if (key == "aao_budget_rounds") {
        config.aao_budget_rounds = static_cast<int>(parse_int(key, value));
    } else if (key == "record_pso_trace") {
        if (value == "true" || value == "1")
            config.record_pso_trace = true;
        else if (value == "false" || value == "0")
            config.record_pso_trace = false;
        else
            throw ParseError("key 'record_pso_trace': expected true/false");
    } else if (key == "num_trials") {
        config.num_trials = static_cast<int>(parse_int(key, value));
    } else if (key == "seed") {
        config.master_seed = static_cast<std::uint64_t>(parse_int(key, value));
    } else if (key == "out") {
        config.output_path = value;
    } else {
        throw ParseError("unknown config key '" + key + "'");
    }
}

ExperimentConfig load_config_file(const std::string& path, ExperimentConfig base) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open config file: " + path);
    std::string line;
    int line_number = 0;
    while (std::getline(in, line)) {
        ++line_number;
        const auto comment = line.find('#');
        if (comment != std::string::npos) line.erase(comment);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ParseError(path + ":" + std::to_string(line_number) +
                             ": expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        try {
            set_key(base, key, value);
        } catch (const ParseError& e) {
            throw ParseError(path + ":" + std::to_string(line_number) + ": " + e.what());
        }
    }
    return base;
}

std::string get_key(const ExperimentConfig& config, const std::string& key) {
    if (key == "carrier_ghz") return format_double(config.carrier_ghz);
    if (key == "snr_db") return format_double(config.snr_db);
    if (key == "num_antennas") return std::to_string(config.num_antennas);
    if (key == "num_users") return std::to_string(config.num_users);
    if (key == "num_paths") return std::to_string(config.num_paths);
    if (key == "subarray_counts") return join_ints(config.subarray_counts);
    if (key == "alphas") return join_doubles(config.alphas);
    if (key == "lengths") return join_doubles(config.lengths);
    if (key == "schemes") {
        std::string out;
        for (std::size_t i = 0; i < config.schemes.size(); ++i) {
            if (i) out += ',';
            out += to_string(config.schemes[i]);
        }
        return out;
    }
    if (key == "subarray_particles") return std::to_string(config.subarray_particles);
    if (key == "subarray_iterations") return std::to_string(config.subarray_iterations);
    if (key == "antenna_particles") return std::to_string(config.antenna_particles);
    if (key == "antenna_iterations") return std::to_string(config.antenna_iterations);
    if (key == "inertia") return format_double(config.inertia);
    if (key == "cognitive") return format_double(config.cognitive);
    if (key == "social") return format_double(config.social);
    if (key == "penalty_coefficient") return format_double(config.penalty_coefficient);
    if (key == "velocity_clamp") return format_double(config.velocity_clamp);
    if (key == "ao_max_rounds") return std::to_string(config.ao_max_rounds);
    if (key == "ao_epsilon") return format_double(config.ao_epsilon);
    if (key == "aao_budget_rounds") return std::to_string(config.aao_budget_rounds);
    if (key == "record_pso_trace") return config.record_pso_trace ? "true" : "false";
    if (key == "num_trials") return std::to_string(config.num_trials);
    if (key == "seed") return std::to_string(config.master_seed);
    if (key == "out") return config.output_path;
    throw ParseError("unknown config key '" + key + "'");
}

void validate(const ExperimentConfig& config) {
    if (config.num_antennas < 1) throw std::invalid_argument("num_antennas must be positive");
    if (config.num_users < 1) throw std::invalid_argument("num_users must be positive");
    if (config.num_paths < 1) throw std::invalid_argument("num_paths must be positive");
    if (config.num_trials < 1) throw std::invalid_argument("num_trials must be positive");
    if (config.subarray_particles < 1 || config.antenna_particles < 1)
        throw std::invalid_argument("particle counts must be positive");
    if (config.subarray_iterations < 1 || config.antenna_iterations < 1)
        throw std::invalid_argument("iteration counts must be positive");
    if (config.ao_max_rounds < 1) throw std::invalid_argument("ao_max_rounds must be positive");
    if (config.ao_epsilon < 0.0) throw std::invalid_argument("ao_epsilon must be >= 0");
    if (config.aao_budget_rounds < 1)
        throw std::invalid_argument("aao_budget_rounds must be positive");
    if (config.penalty_coefficient < 0.0)
        throw std::invalid_argument("penalty_coefficient must be >= 0");
    if (!(config.velocity_clamp > 0.0) || config.velocity_clamp > 1.0)
        throw std::invalid_argument("velocity_clamp must be in (0, 1]");
    if (config.subarray_counts.empty() || config.alphas.empty() || config.lengths.empty())
        throw std::invalid_argument("sweep lists must be non-empty");
    if (config.schemes.empty()) throw std::invalid_argument("scheme list must be non-empty");

    int multi = 0;
    multi += config.subarray_counts.size() > 1;
    multi += config.alphas.size() > 1;
    multi += config.lengths.size() > 1;
    if (multi > 1)
        throw std::invalid_argument(
            "only one of subarray_counts/alphas/lengths may sweep multiple values");

    for (int subs : config.subarray_counts) {
        if (subs < 1) throw std::invalid_argument("subarray count must be positive");
        if (config.num_antennas % subs != 0)
            throw std::invalid_argument("num_antennas " + std::to_string(config.num_antennas) +
                                        " is not divisible by subarray count " +
                                        std::to_string(subs));
    }
    for (double length : config.lengths) {
        if (!(length > 0.0)) throw std::invalid_argument("region length must be positive");
        const double min_alpha = config.num_antennas / (2.0 * length);
        for (double alpha : config.alphas) {
            if (alpha < min_alpha - 1e-12)
                throw std::invalid_argument(
                    "alpha " + format_double(alpha) + " below the minimum " +
                    format_double(min_alpha) + " = M*lambda/(2L) at L = " +
                    format_double(length) +
                    " (subarrays could not host their antennas)");
            if (alpha > 1.0)
                throw std::invalid_argument("alpha " + format_double(alpha) +
                                            " above 1 (subarrays could not be packed)");
        }
    }
    // Every sweep point must produce a valid architecture.
    const SweepPlan plan = plan_sweep(config);
    for (double value : plan.values)
        architecture_at(config, plan.axis, value);
}

const char* to_string(SweepAxis axis) {
    switch (axis) {
    case SweepAxis::SubarrayCount: return "M_S";
    case SweepAxis::Alpha: return "alpha";
    case SweepAxis::RegionLength: return "L";
    }
    return "unknown";
}

SweepPlan plan_sweep(const ExperimentConfig& config) {
    SweepPlan plan;
    if (config.alphas.size() > 1) {
        plan.axis = SweepAxis::Alpha;
        plan.values = config.alphas;
    } else if (config.lengths.size() > 1) {
        plan.axis = SweepAxis::RegionLength;
        plan.values = config.lengths;
    } else {
        plan.axis = SweepAxis::SubarrayCount;
        plan.values.assign(config.subarray_counts.begin(), config.subarray_counts.end());
    }
    return plan;
}

ArrayArchitecture architecture_at(const ExperimentConfig& config, SweepAxis axis, double value) {
    int subs = config.subarray_counts.front();
    double alpha = config.alphas.front();
    double length = config.lengths.front();
    switch (axis) {
    case SweepAxis::SubarrayCount: subs = static_cast<int>(value); break;
    case SweepAxis::Alpha: alpha = value; break;
    case SweepAxis::RegionLength: length = value; break;
    }
    if (subs < 1 || config.num_antennas % subs != 0)
        throw std::invalid_argument("num_antennas is not divisible by subarray count " +
                                    std::to_string(subs));
    const double min_alpha = config.num_antennas / (2.0 * length);
    // Clamp ulp-level drift onto the exact array-wise bound so the packed
    // case stays the packed case.
    if (std::abs(alpha - min_alpha) <= 1e-12)
        return ArrayArchitecture::array_wise(subs, config.num_antennas / subs, length);
    return ArrayArchitecture::from_alpha(subs, config.num_antennas / subs, length, alpha);
}

Scenario sample_trial_scenario(const ExperimentConfig& config, std::uint64_t trial) {
    // Scheme id 0 marks scenario sampling; every scheme of the trial shares
    // the draw, and the scenario does not depend on the sweep value.
    RngStream rng(seed_derivation(config.master_seed, trial, 0, 0, 0, 0));
    return sample_scenario(config.num_users, config.num_paths, 1.0, config.snr_linear(), rng);
}

SchemeResult run_scheme(Scheme scheme, const Scenario& scenario, const ArrayArchitecture& arch,
                        const ExperimentConfig& config, std::uint64_t trial) {
    switch (scheme) {
    case Scheme::TwoLayer:
        return ao_optimize(scenario, arch, config.ao_config(), config.master_seed, trial);
    case Scheme::SingleLayer:
        return sl_ma_optimize(scenario, arch, config.subarray_swarm(), config.master_seed, trial,
                              config.record_pso_trace);
    case Scheme::ArrayWise:
        return array_wise_optimize(scenario, arch, config.subarray_swarm(), config.master_seed,
                                   trial, config.record_pso_trace);
    case Scheme::FixedArray:
        return fpa_layout(scenario, arch);
    case Scheme::AllAtOnce:
        return all_at_once_optimize(scenario, arch, config.subarray_swarm(), config.aao_budget(),
                                    config.master_seed, trial, config.record_pso_trace);
    }
    throw std::invalid_argument("unknown scheme");
}

std::vector<DetailRow> run_sweep_rows(const ExperimentConfig& config) {
    validate(config);
    const SweepPlan plan = plan_sweep(config);
    const int points = static_cast<int>(plan.values.size());
    const int trials = config.num_trials;
    const int schemes = static_cast<int>(config.schemes.size());

    std::vector<DetailRow> rows(static_cast<std::size_t>(points) * trials * schemes);

    // Trials are the unit of parallelism; every task writes into its own row
    // slots, so the output order is independent of scheduling.
    const int tasks = points * trials;
#pragma omp parallel for schedule(dynamic)
    for (int task = 0; task < tasks; ++task) {
        const int point = task / trials;
        const int trial = task % trials;
        const double value = plan.values[point];

        Scenario scenario;
        std::string scenario_error;
        try {
            scenario = sample_trial_scenario(config, trial);
        } catch (const std::exception& e) {
            scenario_error = e.what();
        }

        for (int s = 0; s < schemes; ++s) {
            const Scheme scheme = config.schemes[s];
            DetailRow& row =
                rows[(static_cast<std::size_t>(point) * trials + trial) * schemes + s];
            row.sweep_axis = to_string(plan.axis);
            row.sweep_value = value;
            row.trial = trial;
            row.scheme = to_string(scheme);
            row.seed = scheme_stream_key(config.master_seed, trial, scheme, 0);
            if (!scenario_error.empty()) {
                row.status = "error: " + scenario_error;
                row.sum_rate = std::nan("");
                continue;
            }
            try {
                const ArrayArchitecture arch = architecture_at(config, plan.axis, value);
                const SchemeResult result = run_scheme(scheme, scenario, arch, config, trial);
                row.sum_rate = result.sum_rate;
                row.subarray_displacement = result.subarray_displacement;
                row.antenna_displacement = result.antenna_displacement;
                row.ao_rounds = result.rounds;
                row.evaluations = result.evaluations;
                row.status = "ok";
            } catch (const std::exception& e) {
                row.status = "error: " + sanitize_cell(e.what());
                row.sum_rate = std::nan("");
            }
        }
    }
    return rows;
}

std::string detail_csv(const std::vector<DetailRow>& rows) {
    std::string out = kDetailSchema;
    out += "\nsweep_axis,sweep_value,trial,scheme,seed,sum_rate_bps_hz,C_S_wavelengths,"
           "C_A_wavelengths,ao_rounds,evaluations,status\n";
    char seed_buf[24];
    for (const auto& row : rows) {
        std::snprintf(seed_buf, sizeof(seed_buf), "%016" PRIx64, row.seed);
        out += row.sweep_axis;
        out += ',';
        out += format_double(row.sweep_value);
        out += ',';
        out += std::to_string(row.trial);
        out += ',';
        out += row.scheme;
        out += ',';
        out += seed_buf;
        out += ',';
        out += format_double(row.sum_rate);
        out += ',';
        out += format_double(row.subarray_displacement);
        out += ',';
        out += format_double(row.antenna_displacement);
        out += ',';
        out += std::to_string(row.ao_rounds);
        out += ',';
        out += std::to_string(row.evaluations);
        out += ',';
        out += sanitize_cell(row.status);
        out += '\n';
    }
    return out;
}

std::string aggregate_csv(const std::vector<DetailRow>& rows) {
    struct Key {
        std::string axis;
        double value;
        std::string scheme;
        bool operator<(const Key& other) const {
            return std::tie(axis, value, scheme) <
                   std::tie(other.axis, other.value, other.scheme);
        }
    };
    struct Stats {
        std::vector<double> rates;
        std::vector<double> totals;
        double sum_cs = 0.0;
        double sum_ca = 0.0;
        long long sum_evals = 0;
    };
    // Preserve first-appearance order of groups (deterministic row order).
    std::vector<Key> order;
    std::map<Key, Stats> groups;
    for (const auto& row : rows) {
        if (row.status != "ok") continue;
        const Key key{row.sweep_axis, row.sweep_value, row.scheme};
        auto [it, inserted] = groups.try_emplace(key);
        if (inserted) order.push_back(key);
        it->second.rates.push_back(row.sum_rate);
        it->second.totals.push_back(row.subarray_displacement + row.antenna_displacement);
        it->second.sum_cs += row.subarray_displacement;
        it->second.sum_ca += row.antenna_displacement;
        it->second.sum_evals += row.evaluations;
    }

    auto mean_of = [](const std::vector<double>& xs) {
        double sum = 0.0;
        for (double x : xs) sum += x;
        return sum / static_cast<double>(xs.size());
    };
    auto stderr_of = [&](const std::vector<double>& xs) {
        if (xs.size() < 2) return 0.0;
        const double mean = mean_of(xs);
        double ss = 0.0;
        for (double x : xs) ss += (x - mean) * (x - mean);
        return std::sqrt(ss / static_cast<double>(xs.size() - 1)) /
               std::sqrt(static_cast<double>(xs.size()));
    };

    std::string out = kAggregateSchema;
    out += "\nsweep_axis,sweep_value,scheme,trials_ok,mean_sum_rate_bps_hz,"
           "stderr_sum_rate_bps_hz,mean_C_S_wavelengths,mean_C_A_wavelengths,"
           "mean_total_displacement_wavelengths,stderr_total_displacement_wavelengths,"
           "mean_evaluations\n";
    for (const auto& key : order) {
        const Stats& stats = groups.at(key);
        const double n = static_cast<double>(stats.rates.size());
        out += key.axis;
        out += ',';
        out += format_double(key.value);
        out += ',';
        out += key.scheme;
        out += ',';
        out += std::to_string(stats.rates.size());
        out += ',';
        out += format_double(mean_of(stats.rates));
        out += ',';
        out += format_double(stderr_of(stats.rates));
        out += ',';
        out += format_double(stats.sum_cs / n);
        out += ',';
        out += format_double(stats.sum_ca / n);
        out += ',';
        out += format_double(mean_of(stats.totals));
        out += ',';
        out += format_double(stderr_of(stats.totals));
        out += ',';
        out += format_double(static_cast<double>(stats.sum_evals) / n);
        out += '\n';
    }
    return out;
}

SweepOutput run_sweep(const ExperimentConfig& config) {
    const auto rows = run_sweep_rows(config);
    SweepOutput output;
    output.detail_path = config.output_path + "_detail.csv";
    output.aggregate_path = config.output_path + "_aggregate.csv";
    {
        std::ofstream out(output.detail_path, std::ios::binary);
        if (!out) throw IoError("cannot open output file: " + output.detail_path);
        out << detail_csv(rows);
    }
    {
        std::ofstream out(output.aggregate_path, std::ios::binary);
        if (!out) throw IoError("cannot open output file: " + output.aggregate_path);
        out << aggregate_csv(rows);
    }
    return output;
}

SchemeResult replay(const std::string& scenario_path, Scheme scheme,
                    const ExperimentConfig& config, std::uint64_t trial) {
    validate(config);
    if (config.subarray_counts.size() > 1 || config.alphas.size() > 1 ||
        config.lengths.size() > 1)
        throw std::invalid_argument("replay requires a single sweep point");
    const Scenario scenario = load_scenario(scenario_path);
    if (scenario.num_users != config.num_users)
        throw std::invalid_argument(
            "stored scenario has " + std::to_string(scenario.num_users) +
            " users, config expects " + std::to_string(config.num_users));
    if (scenario.num_paths != config.num_paths)
        throw std::invalid_argument(
            "stored scenario has " + std::to_string(scenario.num_paths) +
            " paths, config expects " + std::to_string(config.num_paths));
    const SweepPlan plan = plan_sweep(config);
    const ArrayArchitecture arch = architecture_at(config, plan.axis, plan.values.front());
    return run_scheme(scheme, scenario, arch, config, trial);
}

}  // namespace tlma
