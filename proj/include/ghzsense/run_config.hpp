#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "ghzsense/noise_models.hpp"
#include "ghzsense/scaling.hpp"

namespace ghzsense {

/// Malformed or out-of-range configuration; the CLI maps it to exit status 2.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class OutputFormat { csv, json };

struct ModelConfig {
    std::string kind = "classical";  // classical | bosonic | markov | one_over_f
    ClassicalNoiseParams classical;
    BosonicBathParams bosonic;

    DephasingModel to_model() const;
    friend bool operator==(const ModelConfig&, const ModelConfig&) = default;
};

struct DecoherenceCurveConfig {
    double t_min = 0.0;
    double t_max = 5.0;
    std::size_t points = 501;
    bool include_bosonic = false;
    friend bool operator==(const DecoherenceCurveConfig&, const DecoherenceCurveConfig&) = default;
};

struct ScalingConfig {
    SchedulePolicy schedule;
    int L_min_exp = 4;
    int L_max_exp = 14;
    double T_total = 1.0;
    double tail_fraction = 0.5;
    friend bool operator==(const ScalingConfig&, const ScalingConfig&) = default;
};

struct McVerifyConfig {
    std::vector<double> times{0.05, 0.2, 1.0, 5.0};
    std::size_t trajectories = 100000;
    std::size_t min_steps = 32;
    std::vector<long long> ghz_sizes{1};
    std::size_t dump_trajectories = 0;  // > 0 writes the first N paths of each ensemble
    friend bool operator==(const McVerifyConfig&, const McVerifyConfig&) = default;
};

struct McEstimateConfig {
    long long L = 4;
    double t = 0.5;
    double T_total = 1000.0;
    std::optional<double> delta;  // unset: operating point L t delta = pi/2
    std::size_t repetitions = 1000;
    friend bool operator==(const McEstimateConfig&, const McEstimateConfig&) = default;
};

struct OptimalTimeConfig {
    std::vector<long long> L_values{16, 64, 256, 1024, 4096, 16384};
    double T_total = 1.0;
    friend bool operator==(const OptimalTimeConfig&, const OptimalTimeConfig&) = default;
};

struct BoundsCheckConfig {
    SchedulePolicy schedule;
    std::vector<int> L_exponents{1, 2, 3, 4, 5, 6};  // L = 10^k
    std::size_t random_configs = 1000;
    friend bool operator==(const BoundsCheckConfig&, const BoundsCheckConfig&) = default;
};

struct RunConfig {
    ModelConfig model;
    std::uint64_t seed = 20100315;
    unsigned threads = 0;
    OutputFormat format = OutputFormat::csv;
    DecoherenceCurveConfig decoherence_curve;
    ScalingConfig scaling;
    McVerifyConfig mc_verify;
    McEstimateConfig mc_estimate;
    OptimalTimeConfig optimal_time;
    BoundsCheckConfig bounds_check;

    /// Checks every value against the invariants of the modules it feeds.
    void validate() const;
    friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

/// Parses a configuration object. Missing keys keep their defaults; unknown keys are rejected.
RunConfig parse_run_config(const nlohmann::json& j);
RunConfig load_run_config(const std::string& path);
nlohmann::json to_json(const RunConfig& cfg);

/// FNV-1a 64 of the canonical JSON, excluding the worker count.
std::string config_hash(const RunConfig& cfg);

}  // namespace ghzsense
