#include "ghzsense/noise_models.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace ghzsense {

namespace {

constexpr double kInvSqrtPi = std::numbers::inv_sqrtpi;

// Below this t / tau_c the closed form is replaced by its power series.
constexpr double kSeriesSwitch = 1e-4;
// Above this pi T t, sinh overflows long before log(sinh x / x) does.
constexpr double kSinhSwitch = 30.0;

void require_time(double t) {
    if (!(t >= 0.0) || !std::isfinite(t)) throw std::invalid_argument("time must be finite and >= 0");
}

// log(sinh(x) / x) for x >= 0.
double log_sinhc(double x) {
    if (x == 0.0) return 0.0;
    if (x < 0.1) {
        // sum_n 4^n B_2n x^2n / (2n (2n)!)
        const double x2 = x * x;
        return x2 * (1.0 / 6.0 + x2 * (-1.0 / 180.0 + x2 * (1.0 / 2835.0 + x2 * (-1.0 / 37800.0 + x2 / 467775.0))));
    }
    if (x > kSinhSwitch) return x - std::log(2.0 * x) + std::log1p(-std::exp(-2.0 * x));
    return std::log(std::sinh(x) / x);
}

// gamma(t) * t for the classical Gaussian kernel.
double classical_exponent(double t, const ClassicalNoiseParams& p) {
    require_time(t);
    if (t == 0.0 || p.lambda == 0.0) return 0.0;
    const double x = t / p.tau_c;
    const double scale = 4.0 * p.lambda * p.lambda * p.tau_c;
    if (x < kSeriesSwitch) {
        // sum_n (-1)^n x^{2n+1} / ((n+1)! (2n+1)), truncated where x^6 drops below round-off
        const double x2 = x * x;
        return scale * kInvSqrtPi * x * t * (1.0 - x2 / 6.0 + x2 * x2 / 30.0);
    }
    return scale * (p.tau_c * kInvSqrtPi * std::expm1(-x * x) + t * std::erf(x));
}

double bosonic_exponent(double t, const BosonicBathParams& p) {
    require_time(t);
    if (t == 0.0) return 0.0;
    const double wt = p.omega_c * t;
    double value = std::log1p(wt * wt);
    if (p.temperature > 0.0) value += 2.0 * log_sinhc(std::numbers::pi * p.temperature * t);
    return value;
}

}  // namespace

void ClassicalNoiseParams::validate() const {
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw std::invalid_argument("lambda must be finite and >= 0");
    if (!(tau_c > 0.0) || !std::isfinite(tau_c)) throw std::invalid_argument("tau_c must be finite and > 0");
}

void BosonicBathParams::validate() const {
    if (!(temperature >= 0.0) || !std::isfinite(temperature))
        throw std::invalid_argument("temperature must be finite and >= 0");
    if (!(omega_c > 0.0) || !std::isfinite(omega_c)) throw std::invalid_argument("omega_c must be finite and > 0");
}

void validate(const DephasingModel& model) {
    std::visit(
        [](const auto& m) {
            using M = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<M, MarkovianLimit> || std::is_same_v<M, OneOverFLimit>)
                m.params.validate();
            else
                m.validate();
        },
        model);
}

std::string_view model_tag(const DephasingModel& model) {
    switch (model.index()) {
        case 0: return "classical";
        case 1: return "bosonic";
        case 2: return "markov";
        default: return "one_over_f";
    }
}

double correlation(double t1, double t2, const ClassicalNoiseParams& p) {
    const double u = (t1 - t2) / p.tau_c;
    return 2.0 * kInvSqrtPi * std::exp(-u * u);
}

double gamma_classical(double t, const ClassicalNoiseParams& p) {
    require_time(t);
    if (t == 0.0 || p.lambda == 0.0) return 0.0;
    const double x = t / p.tau_c;
    const double scale = 4.0 * p.lambda * p.lambda * p.tau_c;
    if (x < kSeriesSwitch) {
        const double x2 = x * x;
        return scale * kInvSqrtPi * x * (1.0 - x2 / 6.0 + x2 * x2 / 30.0);
    }
    return scale * (kInvSqrtPi * std::expm1(-x * x) / x + std::erf(x));
}

double gamma_limit_markov(const ClassicalNoiseParams& p) { return 4.0 * p.lambda * p.lambda * p.tau_c; }

double gamma_limit_one_over_f(double t, const ClassicalNoiseParams& p) {
    require_time(t);
    return 4.0 * kInvSqrtPi * p.lambda * p.lambda * t;
}

double gamma_bosonic(double t, const BosonicBathParams& p) {
    if (t == 0.0) return 0.0;
    return bosonic_exponent(t, p) / t;
}

double decoherence_exponent(double t, const DephasingModel& model) {
    require_time(t);
    return std::visit(
        [t](const auto& m) -> double {
            using M = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<M, ClassicalNoiseParams>)
                return classical_exponent(t, m);
            else if constexpr (std::is_same_v<M, BosonicBathParams>)
                return bosonic_exponent(t, m);
            else if constexpr (std::is_same_v<M, MarkovianLimit>)
                return gamma_limit_markov(m.params) * t;
            else
                return gamma_limit_one_over_f(t, m.params) * t;
        },
        model);
}

double decoherence_rate(double t, const DephasingModel& model) {
    return std::visit(
        [t](const auto& m) -> double {
            using M = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<M, ClassicalNoiseParams>)
                return gamma_classical(t, m);
            else if constexpr (std::is_same_v<M, BosonicBathParams>)
                return gamma_bosonic(t, m);
            else if constexpr (std::is_same_v<M, MarkovianLimit>)
                return gamma_limit_markov(m.params);
            else
                return gamma_limit_one_over_f(t, m.params);
        },
        model);
}

double coherence(double t, long long L, const DephasingModel& model) {
    if (L < 1) throw std::invalid_argument("L must be >= 1");
    return std::exp(-static_cast<double>(L) * decoherence_exponent(t, model));
}

}  // namespace ghzsense
