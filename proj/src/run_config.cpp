#include "ghzsense/run_config.hpp"

#include <cstdio>
#include <fstream>
#include <initializer_list>

#include "ghzsense/estimation.hpp"
#include "ghzsense/stochastic_sim.hpp"

namespace ghzsense {

using nlohmann::json;

namespace {

void check_keys(const json& j, std::initializer_list<std::string_view> allowed, std::string_view section) {
    if (!j.is_object()) throw ConfigError(std::string(section) + ": expected an object");
    for (const auto& [key, value] : j.items()) {
        bool known = false;
        for (auto a : allowed) known = known || key == a;
        if (!known) throw ConfigError(std::string(section) + ": unknown key '" + key + "'");
    }
}

template <class T>
void read(const json& j, const char* key, T& out, std::string_view section) {
    if (!j.contains(key)) return;
    try {
        out = j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string(section) + "." + key + ": " + e.what());
    }
}

void read_schedule(const json& j, SchedulePolicy& out, std::string_view section) {
    read(j, "s", out.s, section);
    read(j, "z", out.z, section);
}

template <class Fn>
void guarded(std::string_view section, Fn&& fn) {
    try {
        fn();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string(section) + ": " + e.what());
    }
}

}  // namespace

DephasingModel ModelConfig::to_model() const {
    if (kind == "classical") return classical;
    if (kind == "bosonic") return bosonic;
    if (kind == "markov") return MarkovianLimit{classical};
    if (kind == "one_over_f") return OneOverFLimit{classical};
    throw ConfigError("model.kind: unknown model '" + kind + "'");
}

void RunConfig::validate() const {
    guarded("model", [&] { ghzsense::validate(model.to_model()); });
    guarded("model", [&] { model.classical.validate(); model.bosonic.validate(); });

    const auto& dc = decoherence_curve;
    if (!(dc.t_min >= 0.0) || !(dc.t_max > dc.t_min) || dc.points < 2)
        throw ConfigError("decoherence_curve: need 0 <= t_min < t_max and points >= 2");

    guarded("scaling", [&] { scaling.schedule.validate(); });
    if (scaling.L_min_exp < 0 || scaling.L_max_exp < scaling.L_min_exp || scaling.L_max_exp > 40)
        throw ConfigError("scaling: need 0 <= L_min_exp <= L_max_exp <= 40");
    if (!(scaling.T_total > 0.0)) throw ConfigError("scaling: T_total must be > 0");
    if (!(scaling.tail_fraction > 0.0 && scaling.tail_fraction <= 1.0))
        throw ConfigError("scaling: tail_fraction must be in (0, 1]");

    const auto& mv = mc_verify;
    if (mv.times.empty()) throw ConfigError("mc_verify: times must not be empty");
    for (double t : mv.times)
        if (!(t > 0.0)) throw ConfigError("mc_verify: times must be > 0");
    if (mv.trajectories < 100) throw ConfigError("mc_verify: trajectories must be >= 100");
    for (long long L : mv.ghz_sizes)
        if (L < 1 || mv.trajectories / static_cast<std::size_t>(L) < 100)
            throw ConfigError("mc_verify: ghz_sizes need L >= 1 and trajectories / L >= 100");
    if (mv.dump_trajectories > mv.trajectories) throw ConfigError("mc_verify: dump_trajectories exceeds trajectories");

    const auto& me = mc_estimate;
    ExperimentConfig exp{me.L, me.t, me.T_total, me.delta.value_or(1.0)};
    guarded("mc_estimate", [&] { exp.validate(); });
    if (me.repetitions < 100) throw ConfigError("mc_estimate: repetitions must be >= 100");

    if (optimal_time.L_values.empty()) throw ConfigError("optimal_time: L_values must not be empty");
    for (long long L : optimal_time.L_values)
        if (L < 1) throw ConfigError("optimal_time: L_values must be >= 1");
    if (!(optimal_time.T_total > 0.0)) throw ConfigError("optimal_time: T_total must be > 0");

    guarded("bounds_check", [&] { bounds_check.schedule.validate(); });
    for (int k : bounds_check.L_exponents)
        if (k < 0 || k > 15) throw ConfigError("bounds_check: L_exponents must lie in [0, 15]");
}

RunConfig parse_run_config(const json& j) {
    RunConfig cfg;
    check_keys(j, {"model", "seed", "threads", "format", "decoherence_curve", "scaling", "mc_verify", "mc_estimate",
                   "optimal_time", "bounds_check"},
               "config");
    read(j, "seed", cfg.seed, "config");
    read(j, "threads", cfg.threads, "config");
    if (j.contains("format")) {
        std::string fmt;
        read(j, "format", fmt, "config");
        if (fmt == "csv")
            cfg.format = OutputFormat::csv;
        else if (fmt == "json")
            cfg.format = OutputFormat::json;
        else
            throw ConfigError("config.format: expected 'csv' or 'json'");
    }
    if (j.contains("model")) {
        const auto& m = j["model"];
        check_keys(m, {"kind", "lambda", "tau_c", "temperature", "omega_c"}, "model");
        read(m, "kind", cfg.model.kind, "model");
        read(m, "lambda", cfg.model.classical.lambda, "model");
        read(m, "tau_c", cfg.model.classical.tau_c, "model");
        read(m, "temperature", cfg.model.bosonic.temperature, "model");
        read(m, "omega_c", cfg.model.bosonic.omega_c, "model");
    }
    if (j.contains("decoherence_curve")) {
        const auto& s = j["decoherence_curve"];
        check_keys(s, {"t_min", "t_max", "points", "include_bosonic"}, "decoherence_curve");
        read(s, "t_min", cfg.decoherence_curve.t_min, "decoherence_curve");
        read(s, "t_max", cfg.decoherence_curve.t_max, "decoherence_curve");
        read(s, "points", cfg.decoherence_curve.points, "decoherence_curve");
        read(s, "include_bosonic", cfg.decoherence_curve.include_bosonic, "decoherence_curve");
    }
    if (j.contains("scaling")) {
        const auto& s = j["scaling"];
        check_keys(s, {"s", "z", "L_min_exp", "L_max_exp", "T_total", "tail_fraction"}, "scaling");
        read_schedule(s, cfg.scaling.schedule, "scaling");
        read(s, "L_min_exp", cfg.scaling.L_min_exp, "scaling");
        read(s, "L_max_exp", cfg.scaling.L_max_exp, "scaling");
        read(s, "T_total", cfg.scaling.T_total, "scaling");
        read(s, "tail_fraction", cfg.scaling.tail_fraction, "scaling");
    }
    if (j.contains("mc_verify")) {
        const auto& s = j["mc_verify"];
        check_keys(s, {"times", "trajectories", "min_steps", "ghz_sizes", "dump_trajectories"}, "mc_verify");
        read(s, "times", cfg.mc_verify.times, "mc_verify");
        read(s, "trajectories", cfg.mc_verify.trajectories, "mc_verify");
        read(s, "min_steps", cfg.mc_verify.min_steps, "mc_verify");
        read(s, "ghz_sizes", cfg.mc_verify.ghz_sizes, "mc_verify");
        read(s, "dump_trajectories", cfg.mc_verify.dump_trajectories, "mc_verify");
    }
    if (j.contains("mc_estimate")) {
        const auto& s = j["mc_estimate"];
        check_keys(s, {"L", "t", "T_total", "delta", "repetitions"}, "mc_estimate");
        read(s, "L", cfg.mc_estimate.L, "mc_estimate");
        read(s, "t", cfg.mc_estimate.t, "mc_estimate");
        read(s, "T_total", cfg.mc_estimate.T_total, "mc_estimate");
        if (s.contains("delta") && !s["delta"].is_null()) {
            double delta = 0.0;
            read(s, "delta", delta, "mc_estimate");
            cfg.mc_estimate.delta = delta;
        }
        read(s, "repetitions", cfg.mc_estimate.repetitions, "mc_estimate");
    }
    if (j.contains("optimal_time")) {
        const auto& s = j["optimal_time"];
        check_keys(s, {"L_values", "T_total"}, "optimal_time");
        read(s, "L_values", cfg.optimal_time.L_values, "optimal_time");
        read(s, "T_total", cfg.optimal_time.T_total, "optimal_time");
    }
    if (j.contains("bounds_check")) {
        const auto& s = j["bounds_check"];
        check_keys(s, {"s", "z", "L_exponents", "random_configs"}, "bounds_check");
        read_schedule(s, cfg.bounds_check.schedule, "bounds_check");
        read(s, "L_exponents", cfg.bounds_check.L_exponents, "bounds_check");
        read(s, "random_configs", cfg.bounds_check.random_configs, "bounds_check");
    }
    return cfg;
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw ConfigError("config file '" + path + "': " + e.what());
    }
    return parse_run_config(j);
}

json to_json(const RunConfig& cfg) {
    json j;
    j["model"] = {{"kind", cfg.model.kind},
                  {"lambda", cfg.model.classical.lambda},
                  {"tau_c", cfg.model.classical.tau_c},
                  {"temperature", cfg.model.bosonic.temperature},
                  {"omega_c", cfg.model.bosonic.omega_c}};
    j["seed"] = cfg.seed;
    j["threads"] = cfg.threads;
    j["format"] = cfg.format == OutputFormat::csv ? "csv" : "json";
    const auto& dc = cfg.decoherence_curve;
    j["decoherence_curve"] = {
        {"t_min", dc.t_min}, {"t_max", dc.t_max}, {"points", dc.points}, {"include_bosonic", dc.include_bosonic}};
    const auto& sc = cfg.scaling;
    j["scaling"] = {{"s", sc.schedule.s},       {"z", sc.schedule.z},   {"L_min_exp", sc.L_min_exp},
                    {"L_max_exp", sc.L_max_exp}, {"T_total", sc.T_total}, {"tail_fraction", sc.tail_fraction}};
    const auto& mv = cfg.mc_verify;
    j["mc_verify"] = {{"times", mv.times},
                      {"trajectories", mv.trajectories},
                      {"min_steps", mv.min_steps},
                      {"ghz_sizes", mv.ghz_sizes},
                      {"dump_trajectories", mv.dump_trajectories}};
    const auto& me = cfg.mc_estimate;
    j["mc_estimate"] = {{"L", me.L},
                        {"t", me.t},
                        {"T_total", me.T_total},
                        {"delta", me.delta ? json(*me.delta) : json(nullptr)},
                        {"repetitions", me.repetitions}};
    j["optimal_time"] = {{"L_values", cfg.optimal_time.L_values}, {"T_total", cfg.optimal_time.T_total}};
    const auto& bc = cfg.bounds_check;
    j["bounds_check"] = {{"s", bc.schedule.s},
                         {"z", bc.schedule.z},
                         {"L_exponents", bc.L_exponents},
                         {"random_configs", bc.random_configs}};
    return j;
}

std::string config_hash(const RunConfig& cfg) {
    json j = to_json(cfg);
    j.erase("threads");
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : j.dump()) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace ghzsense
