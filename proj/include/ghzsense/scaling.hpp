#pragma once

#include <optional>
#include <span>
#include <vector>

#include "ghzsense/noise_models.hpp"

namespace ghzsense {

/// Exposure-time rule t = s * L^{-z}.
struct SchedulePolicy {
    double s = 0.1;
    double z = 0.5;

    void validate() const;
    friend bool operator==(const SchedulePolicy&, const SchedulePolicy&) = default;
};

struct ScalingEntry {
    long long L = 0;
    double t = 0.0;
    double delta = 0.0;  // operating point, L t delta = pi/2
    double variance = 0.0;
    double uncertainty = 0.0;
};

struct ScalingSeries {
    std::vector<ScalingEntry> entries;
    SchedulePolicy policy;
    DephasingModel model;
    double T_total = 1.0;
};

struct ExponentFit {
    double slope = 0.0;
    double intercept = 0.0;
    double stderr_slope = 0.0;
    double r_squared = 0.0;
    std::size_t points = 0;
};

struct GammaBoundCheck {
    double residual = 0.0;
    double bound = 0.0;
    bool holds = false;
};

struct OptimalExposure {
    double t_star = 0.0;
    double variance_star = 0.0;
    bool interior = false;  // false: objective monotone over the bracket, t_star sits on an end
    double bracket_upper = 0.0;
};

struct DivergenceProbe {
    bool eventually_increasing = false;
    bool eventually_decreasing = false;
    ScalingSeries series;
};

struct FidelityEstimate {
    double fidelity = 1.0;
    double infidelity = 0.0;
    std::optional<double> quadratic_prediction;  // 1 - C L t^2, absent for the Markov limit
};

double exposure_time(long long L, const SchedulePolicy& policy);

/// Powers of two 2^lo .. 2^hi.
std::vector<long long> geometric_grid(int lo_exponent, int hi_exponent);

/// Compares gamma(s L^{-z}) with its leading term 4 s lam^2 / (sqrt(pi) L^z) against the
/// analytic remainder bound. Requires L^{2z} > s^2 / tau_c^2.
GammaBoundCheck gamma_bound_check(long long L, const SchedulePolicy& policy, const ClassicalNoiseParams& p);

/// Variance e^{2 gamma(t) L t} / (T_total L^2 t) at the optimal fringe point for each L.
ScalingSeries uncertainty_curve(std::span<const long long> L_values, const SchedulePolicy& policy,
                                const DephasingModel& model, double T_total, unsigned threads = 1);

/// Least squares of log y on log x.
ExponentFit fit_power_law(std::span<const double> x, std::span<const double> y);

/// Fits log(uncertainty) against log(L) over the last tail_fraction of the series (at least 4 points).
ExponentFit fit_exponent(const ScalingSeries& series, double tail_fraction = 0.5);

/// Minimizes e^{2 gamma(t) L t} / (T_total L^2 t) by golden-section search in log t.
OptimalExposure optimal_exposure(long long L, const DephasingModel& model, double T_total);

/// Uncertainty curve plus monotonicity flags over the last five grid points.
DivergenceProbe divergence_probe(const SchedulePolicy& policy, const DephasingModel& model, double T_total,
                                 std::span<const long long> L_values);

/// GHZ self-overlap 1/2 (1 + e^{-L gamma t}) and its short-time quadratic form.
FidelityEstimate fidelity_smalltime(double t, long long L, const DephasingModel& model);

}  // namespace ghzsense
