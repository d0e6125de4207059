#include "ghzsense/scaling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "ghzsense/estimation.hpp"
#include "ghzsense/parallel.hpp"

namespace ghzsense {

namespace {

constexpr double kInvSqrtPi = std::numbers::inv_sqrtpi;

// Natural upper end of the exposure-time search for each model.
double exposure_bracket(long long L, const DephasingModel& model) {
    const double sqrtL = std::sqrt(static_cast<double>(L));
    return std::visit(
        [&](const auto& m) -> double {
            using M = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<M, ClassicalNoiseParams>) {
                if (m.lambda == 0.0) return 10.0 * m.tau_c;
                return 10.0 * std::max(m.tau_c, 1.0 / (m.lambda * sqrtL));
            } else if constexpr (std::is_same_v<M, BosonicBathParams>) {
                return 10.0 / m.omega_c;
            } else if constexpr (std::is_same_v<M, MarkovianLimit>) {
                const double rate = gamma_limit_markov(m.params) * static_cast<double>(L);
                return rate == 0.0 ? 10.0 * m.params.tau_c : 10.0 / rate;
            } else {
                if (m.params.lambda == 0.0) return 10.0;
                return 10.0 / (m.params.lambda * sqrtL);
            }
        },
        model);
}

// log of e^{2 gamma L t} / (T L^2 t)
double log_objective(double t, long long L, const DephasingModel& model, double T_total) {
    const double Ld = static_cast<double>(L);
    return 2.0 * Ld * decoherence_exponent(t, model) - std::log(T_total * Ld * Ld * t);
}

bool strictly_monotone_tail(const ScalingSeries& series, bool increasing) {
    const auto& e = series.entries;
    if (e.size() < 5) throw std::invalid_argument("divergence check needs at least 5 grid points");
    for (std::size_t i = e.size() - 4; i < e.size(); ++i) {
        if (increasing && !(e[i].variance > e[i - 1].variance)) return false;
        if (!increasing && !(e[i].variance < e[i - 1].variance)) return false;
    }
    return true;
}

}  // namespace

void SchedulePolicy::validate() const {
    if (!(s > 0.0) || !std::isfinite(s)) throw std::invalid_argument("schedule constant s must be > 0");
    if (!(z >= 0.0) || !std::isfinite(z)) throw std::invalid_argument("schedule exponent z must be >= 0");
}

double exposure_time(long long L, const SchedulePolicy& policy) {
    if (L < 1) throw std::invalid_argument("L must be >= 1");
    policy.validate();
    return policy.s * std::pow(static_cast<double>(L), -policy.z);
}

std::vector<long long> geometric_grid(int lo_exponent, int hi_exponent) {
    if (lo_exponent < 0 || hi_exponent < lo_exponent || hi_exponent > 62)
        throw std::invalid_argument("invalid geometric grid exponents");
    std::vector<long long> grid;
    for (int k = lo_exponent; k <= hi_exponent; ++k) grid.push_back(1LL << k);
    return grid;
}

GammaBoundCheck gamma_bound_check(long long L, const SchedulePolicy& policy, const ClassicalNoiseParams& p) {
    p.validate();
    const double t = exposure_time(L, policy);
    const double Lz = std::pow(static_cast<double>(L), policy.z);
    const double gap = Lz * Lz - policy.s * policy.s / (p.tau_c * p.tau_c);
    if (!(gap > 0.0)) throw std::domain_error("gamma bound needs L^{2z} > s^2 / tau_c^2");
    const double lam2 = p.lambda * p.lambda;
    const double leading = 4.0 * policy.s * lam2 * kInvSqrtPi / Lz;
    const double residual = std::abs(gamma_classical(t, p) - leading);
    const double bound = 12.0 * policy.s * policy.s * lam2 * kInvSqrtPi / (p.tau_c * Lz * gap);
    return {residual, bound, residual <= bound};
}

ScalingSeries uncertainty_curve(std::span<const long long> L_values, const SchedulePolicy& policy,
                                const DephasingModel& model, double T_total, unsigned threads) {
    if (L_values.empty()) throw std::invalid_argument("L grid must not be empty");
    for (std::size_t i = 1; i < L_values.size(); ++i)
        if (L_values[i] <= L_values[i - 1]) throw std::invalid_argument("L grid must be strictly increasing");
    if (!(T_total > 0.0)) throw std::invalid_argument("T_total must be > 0");
    policy.validate();
    validate(model);

    ScalingSeries series{std::vector<ScalingEntry>(L_values.size()), policy, model, T_total};
    parallel_for(L_values.size(), threads, [&](std::size_t i) {
        const long long L = L_values[i];
        const double t = exposure_time(L, policy);
        const double variance = std::exp(log_objective(t, L, model, T_total));
        if (!std::isfinite(variance) || !(variance > 0.0))
            throw std::overflow_error("variance is not finite at L = " + std::to_string(L));
        series.entries[i] = {L, t, std::numbers::pi / (2.0 * static_cast<double>(L) * t), variance,
                             std::sqrt(variance)};
    });
    return series;
}

ExponentFit fit_power_law(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw std::invalid_argument("fit inputs differ in length");
    const std::size_t n = x.size();
    if (n < 3) throw std::invalid_argument("fit needs at least 3 points");
    std::vector<double> lx(n), ly(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!(x[i] > 0.0) || !(y[i] > 0.0) || !std::isfinite(x[i]) || !std::isfinite(y[i]))
            throw std::invalid_argument("fit needs finite positive data");
        lx[i] = std::log(x[i]);
        ly[i] = std::log(y[i]);
    }
    const double nd = static_cast<double>(n);
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += lx[i];
        my += ly[i];
    }
    mx /= nd;
    my /= nd;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
        syy += (ly[i] - my) * (ly[i] - my);
    }
    if (!(sxx > 0.0)) throw std::invalid_argument("fit abscissae are constant");

    ExponentFit fit;
    fit.points = n;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double sse = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = ly[i] - fit.intercept - fit.slope * lx[i];
        sse += r * r;
    }
    fit.stderr_slope = std::sqrt(sse / (nd - 2.0) / sxx);
    fit.r_squared = syy > 0.0 ? std::clamp(1.0 - sse / syy, 0.0, 1.0) : 1.0;
    return fit;
}

ExponentFit fit_exponent(const ScalingSeries& series, double tail_fraction) {
    if (!(tail_fraction > 0.0 && tail_fraction <= 1.0)) throw std::invalid_argument("tail_fraction must be in (0, 1]");
    const std::size_t n = series.entries.size();
    const auto tail = static_cast<std::size_t>(std::ceil(tail_fraction * static_cast<double>(n) - 1e-9));
    if (tail < 4) throw std::invalid_argument("fit tail needs at least 4 entries");
    std::vector<double> x, y;
    for (std::size_t i = n - tail; i < n; ++i) {
        x.push_back(static_cast<double>(series.entries[i].L));
        y.push_back(series.entries[i].uncertainty);
    }
    return fit_power_law(x, y);
}

OptimalExposure optimal_exposure(long long L, const DephasingModel& model, double T_total) {
    if (L < 1) throw std::invalid_argument("L must be >= 1");
    if (!(T_total > 0.0)) throw std::invalid_argument("T_total must be > 0");
    validate(model);

    const double upper = exposure_bracket(L, model);
    double a = std::log(upper) - std::log(1e9);
    double b = std::log(upper);
    auto f = [&](double u) { return log_objective(std::exp(u), L, model, T_total); };

    constexpr double kInvPhi = 0.6180339887498949;  // 1/golden ratio
    double c = b - kInvPhi * (b - a);
    double d = a + kInvPhi * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > 1e-7) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - kInvPhi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + kInvPhi * (b - a);
            fd = f(d);
        }
    }
    const double u_star = 0.5 * (a + b);
    const double t_star = std::exp(u_star);
    const double lo = upper * 1e-9;
    const bool interior = t_star > lo * (1.0 + 1e-4) && t_star < upper * (1.0 - 1e-4);
    return {t_star, std::exp(f(u_star)), interior, upper};
}

DivergenceProbe divergence_probe(const SchedulePolicy& policy, const DephasingModel& model, double T_total,
                                 std::span<const long long> L_values) {
    DivergenceProbe probe;
    probe.series = uncertainty_curve(L_values, policy, model, T_total);
    probe.eventually_increasing = strictly_monotone_tail(probe.series, true);
    probe.eventually_decreasing = strictly_monotone_tail(probe.series, false);
    return probe;
}

FidelityEstimate fidelity_smalltime(double t, long long L, const DephasingModel& model) {
    if (L < 1) throw std::invalid_argument("L must be >= 1");
    validate(model);
    const double Ld = static_cast<double>(L);
    FidelityEstimate est;
    est.infidelity = -0.5 * std::expm1(-Ld * decoherence_exponent(t, model));
    est.fidelity = 1.0 - est.infidelity;
    const std::optional<double> coefficient = std::visit(
        [](const auto& m) -> std::optional<double> {
            using M = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<M, ClassicalNoiseParams>)
                return 2.0 * m.lambda * m.lambda * kInvSqrtPi;
            else if constexpr (std::is_same_v<M, OneOverFLimit>)
                return 2.0 * m.params.lambda * m.params.lambda * kInvSqrtPi;
            else if constexpr (std::is_same_v<M, BosonicBathParams>)
                return 0.5 * (m.omega_c * m.omega_c + std::numbers::pi * std::numbers::pi * m.temperature *
                                                          m.temperature / 3.0);
            else
                return std::nullopt;
        },
        model);
    if (coefficient) est.quadratic_prediction = 1.0 - *coefficient * Ld * t * t;
    return est;
}

}  // namespace ghzsense
