// Acceptance gate: one PASS/FAIL line per criterion, all tolerances fixed here.
//
//   acceptance                 run every criterion
//   acceptance --only NAME     run a single criterion (used by ctest)

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "ghzsense/estimation.hpp"
#include "ghzsense/scaling.hpp"
#include "ghzsense/stochastic_sim.hpp"

using namespace ghzsense;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

struct Criterion {
    const char* name;
    const char* title;
    std::function<Outcome()> run;
};

const ClassicalNoiseParams kFig1{0.25, 1.0};

std::string fmt(const char* format, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, format, args...);
    return buf;
}

// 1/f line within 1e-3 for t <= 0.01; Markov plateau within 1e-3 for t >= 20.
Outcome fig1() {
    double worst_short = 0.0;
    for (double t = 0.01; t > 1e-9; t *= 0.9) {
        const double line = gamma_limit_one_over_f(t, kFig1);
        worst_short = std::max(worst_short, std::abs(gamma_classical(t, kFig1) - line) / line);
    }
    double worst_long = 0.0, worst_long_t = 0.0;
    const double plateau = gamma_limit_markov(kFig1);
    for (double t = 20.0; t <= 1e4; t *= 1.05) {
        const double rel = std::abs(gamma_classical(t, kFig1) - plateau) / plateau;
        if (rel > worst_long) {
            worst_long = rel;
            worst_long_t = t;
        }
    }
    const bool short_ok = worst_short <= 1e-3;
    const bool long_ok = worst_long <= 1e-3;
    return {short_ok && long_ok,
            fmt("1/f line: max rel dev %.3e for t<=0.01 (%s); Markov plateau 0.25: max rel dev %.3e at t=%.4g for "
                "t>=20 (%s)",
                worst_short, short_ok ? "ok" : "exceeds 1e-3", worst_long, worst_long_t,
                long_ok ? "ok" : "exceeds 1e-3; gamma(t) = 0.25 (1 - 1/(sqrt(pi) t)) approaches the plateau as 1/t")};
}

Outcome mc_oracle() {
    bool pass = true;
    std::string detail;
    std::uint64_t stream = 0;
    for (double t : {0.05, 0.2, 1.0, 5.0, 20.0}) {
        const TrajectoryConfig cfg{t, default_grid_points(t, kFig1.tau_c), 100000, 0xACCE97 + stream++};
        const auto est = ensemble_coherence(sample_trajectories(kFig1, cfg));
        const double analytic = coherence(t, 1, kFig1);
        const double z = (est.magnitude - analytic) / est.std_error;
        pass = pass && std::abs(est.magnitude - analytic) <= 3.0 * est.std_error;
        detail += fmt("t=%g: mc=%.6f analytic=%.6f z=%+.2f; ", t, est.magnitude, analytic, z);
    }
    return {pass, detail};
}

Outcome scaling_law() {
    const auto grid = geometric_grid(4, 14);
    const SchedulePolicy policy{0.1, 0.5};
    const auto classical = fit_exponent(uncertainty_curve(grid, policy, kFig1, 1.0), 0.5);
    const auto bosonic = fit_exponent(uncertainty_curve(grid, policy, BosonicBathParams{0.05, 1.0}, 1.0), 0.5);
    const bool pass = std::abs(classical.slope + 0.75) <= 0.02 && std::abs(bosonic.slope + 0.75) <= 0.02;
    return {pass, fmt("classical slope %.6f, bosonic slope %.6f (target -0.75 +- 0.02)", classical.slope, bosonic.slope)};
}

Outcome generalized_exponent() {
    const auto grid = geometric_grid(4, 14);
    bool pass = true;
    std::string detail;
    for (double z : {0.5, 0.6, 0.8, 1.0}) {
        const auto fit = fit_exponent(uncertainty_curve(grid, {0.1, z}, kFig1, 1.0), 0.5);
        const double target = -(2.0 - z) / 2.0;
        pass = pass && std::abs(fit.slope - target) <= 0.02;
        detail += fmt("z=%.1f: %.6f vs %.3f; ", z, fit.slope, target);
    }
    return {pass, detail};
}

// Schedule constant s = 1; with s = 0.1 the z = 1/4 turn-around lies beyond 2^20.
Outcome divergence() {
    const auto grid = geometric_grid(4, 20);
    const auto quarter = divergence_probe({1.0, 0.25}, kFig1, 1.0, grid);
    const auto half = divergence_probe({1.0, 0.5}, kFig1, 1.0, grid);
    const bool pass = quarter.eventually_increasing && half.eventually_decreasing;
    return {pass, fmt("s=1, L=2^4..2^20: z=0.25 increasing over last 5: %s; z=0.5 decreasing over last 5: %s",
                      quarter.eventually_increasing ? "yes" : "no", half.eventually_decreasing ? "yes" : "no")};
}

Outcome bound_sandwich() {
    std::mt19937_64 rng(1012);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double ratio = std::numbers::pi * std::numbers::pi / 4.0;
    const double ulp = std::numeric_limits<double>::epsilon() * ratio;
    int violations = 0, ratio_misses = 0;
    for (int i = 0; i < 1000; ++i) {
        DephasingModel model = (i % 2 == 0) ? DephasingModel{ClassicalNoiseParams{0.05 + 0.5 * u(rng), 0.2 + 2.0 * u(rng)}}
                                            : DephasingModel{BosonicBathParams{0.2 * u(rng), 0.2 + 2.0 * u(rng)}};
        ExperimentConfig cfg;
        cfg.L = 1 + static_cast<long long>(rng() % 64);
        cfg.t = 0.01 + 1.99 * u(rng);
        cfg.T_total = cfg.t * (1.0 + 999.0 * u(rng));
        cfg.delta = std::numbers::pi / 2 * (0.01 + 0.99 * u(rng)) / (static_cast<double>(cfg.L) * cfg.t);
        const auto b = variance_bounds(cfg, model);
        const double v = variance_ghz(cfg, model);
        const double excess = v - variance_ideal(cfg);
        const double slack = 8.0 * std::numeric_limits<double>::epsilon() * v;
        if (!(b.lower <= excess + slack && excess <= b.upper + slack)) ++violations;
        if (!(b.lower > 0.0) || std::abs(b.upper / b.lower - ratio) > 2.0 * ulp) ++ratio_misses;
    }
    return {violations == 0 && ratio_misses == 0,
            fmt("1000 configs: %d sandwich violations, %d ratios off pi^2/4 by > 2 ulp", violations, ratio_misses)};
}

Outcome gamma_bound() {
    bool pass = true;
    std::string detail;
    long long L = 10;
    for (int k = 1; k <= 6; ++k, L *= 10) {
        const auto c = gamma_bound_check(L, {0.1, 0.5}, kFig1);
        pass = pass && c.holds;
        detail += fmt("L=1e%d: %.2e<=%.2e; ", k, c.residual, c.bound);
    }
    return {pass, detail};
}

}  // namespace

int main(int argc, char** argv) {
    const std::vector<Criterion> criteria{
        {"fig1", "Fig.-1 limits of the decoherence rate", fig1},
        {"mc_oracle", "Monte Carlo oracle for the decoherence rate", mc_oracle},
        {"scaling_law", "L^{-3/4} uncertainty scaling", scaling_law},
        {"generalized_exponent", "slope -(2-z)/2 for z >= 1/2", generalized_exponent},
        {"divergence", "divergence for z < 1/2", divergence},
        {"bound_sandwich", "two-sided variance bounds", bound_sandwich},
        {"gamma_bound", "decoherence-rate remainder bound", gamma_bound},
    };

    std::string only;
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        if (arg == "--only" && i + 1 < argc) only = argv[++i];
    }

    int failures = 0, ran = 0;
    for (const auto& c : criteria) {
        if (!only.empty() && only != c.name) continue;
        ++ran;
        const auto start = std::chrono::steady_clock::now();
        Outcome outcome;
        try {
            outcome = c.run();
        } catch (const std::exception& e) {
            outcome = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("[%s] %-20s %s (%.2fs)\n       %s\n", outcome.pass ? "PASS" : "FAIL", c.name, c.title, secs,
                    outcome.detail.c_str());
        failures += outcome.pass ? 0 : 1;
    }
    if (ran == 0) {
        std::fprintf(stderr, "unknown criterion '%s'\n", only.c_str());
        return 2;
    }
    std::printf("%d of %d criteria passed\n", ran - failures, ran);
    return failures == 0 ? 0 : 1;
}
