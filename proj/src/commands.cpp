#include "ghzsense/commands.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "ghzsense/estimation.hpp"
#include "ghzsense/random.hpp"
#include "ghzsense/scaling.hpp"
#include "ghzsense/stochastic_sim.hpp"

namespace ghzsense {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

json provenance(const RunConfig& cfg) {
    return {{"tool", kToolName}, {"version", kToolVersion}, {"config_hash", config_hash(cfg)}};
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::ios_base::failure("cannot open '" + path.string() + "' for writing");
    out << text;
    if (!out) throw std::ios_base::failure("write failed for '" + path.string() + "'");
}

void write_json(const fs::path& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

// Writes <stem>.csv or <stem>.json depending on the configured format.
fs::path write_table(const RunConfig& cfg, const fs::path& out_dir, const std::string& stem, const Table& table) {
    if (cfg.format == OutputFormat::json) {
        json j;
        j["provenance"] = provenance(cfg);
        j["columns"] = table.columns;
        j["rows"] = table.rows;
        const fs::path path = out_dir / (stem + ".json");
        write_json(path, j);
        return path;
    }
    std::ostringstream os;
    os << "# " << kToolName << ' ' << kToolVersion << " config_hash=" << config_hash(cfg) << '\n';
    for (std::size_t i = 0; i < table.columns.size(); ++i) os << (i ? "," : "") << table.columns[i];
    os << '\n';
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << format_number(row[i]);
        os << '\n';
    }
    const fs::path path = out_dir / (stem + ".csv");
    write_text(path, os.str());
    return path;
}

json fit_to_json(const ExponentFit& fit) {
    return {{"slope", fit.slope},
            {"intercept", fit.intercept},
            {"stderr", fit.stderr_slope},
            {"r_squared", fit.r_squared},
            {"points", fit.points}};
}

}  // namespace

std::vector<std::string_view> command_names() {
    return {"decoherence-curve", "scaling", "mc-verify", "mc-estimate", "optimal-time", "bounds-check"};
}

CommandResult cmd_decoherence_curve(const RunConfig& cfg, const fs::path& out_dir) {
    const auto& dc = cfg.decoherence_curve;
    const auto& p = cfg.model.classical;
    Table table{{"t", "gamma_classical", "gamma_1f_limit", "gamma_markov_limit"}, {}};
    if (dc.include_bosonic) table.columns.push_back("gamma_bosonic");
    for (std::size_t i = 0; i < dc.points; ++i) {
        const double t = dc.t_min + (dc.t_max - dc.t_min) * static_cast<double>(i) / static_cast<double>(dc.points - 1);
        std::vector<double> row{t, gamma_classical(t, p), gamma_limit_one_over_f(t, p), gamma_limit_markov(p)};
        if (dc.include_bosonic) row.push_back(gamma_bosonic(t, cfg.model.bosonic));
        table.rows.push_back(std::move(row));
    }
    CommandResult result;
    result.outputs.push_back(write_table(cfg, out_dir, "decoherence_curve", table));
    result.summary = std::to_string(dc.points) + " rows";
    return result;
}

CommandResult cmd_scaling(const RunConfig& cfg, const fs::path& out_dir) {
    const auto& sc = cfg.scaling;
    const auto model = cfg.model.to_model();
    const auto grid = geometric_grid(sc.L_min_exp, sc.L_max_exp);
    const auto series = uncertainty_curve(grid, sc.schedule, model, sc.T_total, cfg.threads);

    Table table{{"L", "t", "delta", "variance", "uncertainty"}, {}};
    for (const auto& e : series.entries)
        table.rows.push_back({static_cast<double>(e.L), e.t, e.delta, e.variance, e.uncertainty});

    CommandResult result;
    result.outputs.push_back(write_table(cfg, out_dir, "scaling_series", table));

    json sidecar;
    sidecar["provenance"] = provenance(cfg);
    sidecar["model"] = std::string(model_tag(model));
    sidecar["s"] = sc.schedule.s;
    sidecar["z"] = sc.schedule.z;
    sidecar["T_total"] = sc.T_total;
    sidecar["tail_fraction"] = sc.tail_fraction;
    sidecar["predicted_slope"] = sc.schedule.z >= 0.5 ? json(-(2.0 - sc.schedule.z) / 2.0) : json(nullptr);
    sidecar["fit"] = fit_to_json(fit_exponent(series, sc.tail_fraction));
    if (series.entries.size() >= 5) {
        const auto probe = divergence_probe(sc.schedule, model, sc.T_total, grid);
        sidecar["diverging"] = probe.eventually_increasing;
        sidecar["decreasing_tail"] = probe.eventually_decreasing;
    } else {
        sidecar["diverging"] = nullptr;
        sidecar["decreasing_tail"] = nullptr;
    }
    const fs::path path = out_dir / "scaling_fit.json";
    write_json(path, sidecar);
    result.outputs.push_back(path);
    result.summary = "slope " + format_number(sidecar["fit"]["slope"].get<double>());
    return result;
}

CommandResult cmd_mc_verify(const RunConfig& cfg, const fs::path& out_dir) {
    if (cfg.model.kind != "classical") throw ConfigError("mc-verify samples the classical Gaussian model only");
    const auto& mv = cfg.mc_verify;
    const auto& p = cfg.model.classical;
    const DephasingModel model = p;

    Table verify{{"t", "mc_coherence", "mc_stderr", "analytic_coherence", "z_score"}, {}};
    Table summary{{"t_max", "L", "coherence", "std_error", "analytic_value"}, {}};
    CommandResult result;
    double worst = 0.0;
    for (std::size_t i = 0; i < mv.times.size(); ++i) {
        const double t = mv.times[i];
        TrajectoryConfig tc{t, default_grid_points(t, p.tau_c, mv.min_steps), mv.trajectories, derive_seed(cfg.seed, i)};
        const auto ens = sample_trajectories(p, tc, {cfg.threads, false});
        for (long long L : mv.ghz_sizes) {
            const auto est = ghz_ensemble_coherence(ens, L);
            const double analytic = coherence(t, L, model);
            const double diff = est.magnitude - analytic;
            const double z = diff == 0.0 ? 0.0 : diff / est.std_error;
            if (L == 1) {
                verify.rows.push_back({t, est.magnitude, est.std_error, analytic, z});
                worst = std::max(worst, std::abs(z));
            }
            summary.rows.push_back({t, static_cast<double>(L), est.magnitude, est.std_error, analytic});
        }
        if (mv.dump_trajectories > 0) {
            TrajectoryConfig small = tc;
            small.num_trajectories = mv.dump_trajectories;
            const auto kept = sample_trajectories(p, small, {cfg.threads, true});
            std::ostringstream os;
            os << "# " << kToolName << ' ' << kToolVersion << " config_hash=" << config_hash(cfg) << '\n';
            write_trajectory_dump(os, kept);
            const fs::path path = out_dir / ("trajectories_t" + std::to_string(i) + ".csv");
            write_text(path, os.str());
            result.outputs.push_back(path);
        }
    }
    result.outputs.push_back(write_table(cfg, out_dir, "mc_verify", verify));
    result.outputs.push_back(write_table(cfg, out_dir, "mc_summary", summary));
    result.summary = "max |z| = " + format_number(worst);
    if (worst > 5.0) result.exit_code = exit_verification_failure;
    return result;
}

CommandResult cmd_mc_estimate(const RunConfig& cfg, const fs::path& out_dir) {
    const auto& me = cfg.mc_estimate;
    const auto model = cfg.model.to_model();
    const double delta = me.delta.value_or(std::numbers::pi / (2.0 * static_cast<double>(me.L) * me.t));
    const ExperimentConfig exp{me.L, me.t, me.T_total, delta};
    const auto mse = empirical_mse(exp, model, me.repetitions, cfg.seed, cfg.threads);
    const double analytic = variance_ghz(exp, model);

    Table table{{"L", "t", "T_total", "delta", "shots", "repetitions", "mse", "mse_stderr", "variance_ghz",
                 "relative_error", "clamp_fraction", "saturated"},
                {}};
    table.rows.push_back({static_cast<double>(me.L), me.t, me.T_total, delta,
                          static_cast<double>(exp.repetitions()), static_cast<double>(me.repetitions), mse.mse,
                          mse.std_error, analytic, mse.mse / analytic - 1.0, mse.clamp_fraction,
                          mse.saturated ? 1.0 : 0.0});
    CommandResult result;
    result.outputs.push_back(write_table(cfg, out_dir, "mc_estimate", table));
    result.summary = "mse/variance_ghz - 1 = " + format_number(mse.mse / analytic - 1.0) +
                     (mse.saturated ? " (estimator saturated)" : "");
    return result;
}

CommandResult cmd_optimal_time(const RunConfig& cfg, const fs::path& out_dir) {
    const auto model = cfg.model.to_model();
    Table table{{"L", "t_star", "variance_star", "t_star_times_sqrtL", "monotone"}, {}};
    std::size_t monotone = 0;
    for (long long L : cfg.optimal_time.L_values) {
        const auto opt = optimal_exposure(L, model, cfg.optimal_time.T_total);
        monotone += opt.interior ? 0 : 1;
        table.rows.push_back({static_cast<double>(L), opt.t_star, opt.variance_star,
                              opt.t_star * std::sqrt(static_cast<double>(L)), opt.interior ? 0.0 : 1.0});
    }
    CommandResult result;
    result.outputs.push_back(write_table(cfg, out_dir, "optimal_time", table));
    result.summary = std::to_string(monotone) + " of " + std::to_string(table.rows.size()) + " rows monotone";
    return result;
}

CommandResult cmd_bounds_check(const RunConfig& cfg, const fs::path& out_dir) {
    const auto& bc = cfg.bounds_check;
    const auto model = cfg.model.to_model();
    std::size_t failures = 0;

    Table gamma_table{{"L", "residual", "bound", "holds"}, {}};
    if (cfg.model.kind == "classical") {
        for (int k : bc.L_exponents) {
            long long L = 1;
            for (int i = 0; i < k; ++i) L *= 10;
            const auto check = gamma_bound_check(L, bc.schedule, cfg.model.classical);
            failures += check.holds ? 0 : 1;
            gamma_table.rows.push_back({static_cast<double>(L), check.residual, check.bound, check.holds ? 1.0 : 0.0});
        }
    }

    // random configurations with 0 < L t delta <= pi/2
    Table sandwich{{"L", "t", "T_total", "delta", "lower", "excess", "upper", "holds"}, {}};
    std::mt19937_64 engine(derive_seed(cfg.seed, 0));
    std::uniform_int_distribution<long long> pick_L(1, 64);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (std::size_t i = 0; i < bc.random_configs; ++i) {
        ExperimentConfig exp;
        exp.L = pick_L(engine);
        exp.t = 0.01 + 1.99 * unit(engine);
        exp.T_total = exp.t * (1.0 + 999.0 * unit(engine));
        const double theta = std::numbers::pi / 2 * (0.01 + 0.99 * unit(engine));
        exp.delta = theta / (static_cast<double>(exp.L) * exp.t);
        const auto bounds = variance_bounds(exp, model);
        const double v = variance_ghz(exp, model);
        const double excess = v - variance_ideal(exp);
        const double slack = 8.0 * std::numeric_limits<double>::epsilon() * v;
        const bool holds = bounds.lower <= excess + slack && excess <= bounds.upper + slack;
        failures += holds ? 0 : 1;
        sandwich.rows.push_back({static_cast<double>(exp.L), exp.t, exp.T_total, exp.delta, bounds.lower, excess,
                                 bounds.upper, holds ? 1.0 : 0.0});
    }

    CommandResult result;
    if (!gamma_table.rows.empty()) result.outputs.push_back(write_table(cfg, out_dir, "bounds_gamma", gamma_table));
    result.outputs.push_back(write_table(cfg, out_dir, "bounds_sandwich", sandwich));
    result.summary = std::to_string(failures) + " bound violations";
    if (failures > 0) result.exit_code = exit_verification_failure;
    return result;
}

CommandResult run_command(std::string_view name, const RunConfig& cfg, const fs::path& out_dir) {
    try {
        cfg.validate();
        fs::create_directories(out_dir);
        write_json(out_dir / "effective_config.json", to_json(cfg));
        if (name == "decoherence-curve") return cmd_decoherence_curve(cfg, out_dir);
        if (name == "scaling") return cmd_scaling(cfg, out_dir);
        if (name == "mc-verify") return cmd_mc_verify(cfg, out_dir);
        if (name == "mc-estimate") return cmd_mc_estimate(cfg, out_dir);
        if (name == "optimal-time") return cmd_optimal_time(cfg, out_dir);
        if (name == "bounds-check") return cmd_bounds_check(cfg, out_dir);
        return {exit_config_error, {}, "unknown command '" + std::string(name) + "'"};
    } catch (const ConfigError& e) {
        return {exit_config_error, {}, e.what()};
    } catch (const std::ios_base::failure& e) {
        return {exit_io_error, {}, e.what()};
    } catch (const fs::filesystem_error& e) {
        return {exit_io_error, {}, e.what()};
    } catch (const std::invalid_argument& e) {
        return {exit_config_error, {}, e.what()};
    } catch (const std::exception& e) {
        // factorization failures, fringe nodes, overflow
        return {exit_numerical_failure, {}, e.what()};
    }
}

}  // namespace ghzsense
