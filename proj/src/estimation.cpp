#include "ghzsense/estimation.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace ghzsense {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// sin^2(theta), rejecting float images of k*pi.
double fringe_factor(double theta) {
    const double s = std::sin(theta);
    if (std::abs(s) <= 64.0 * kEps * std::max(1.0, std::abs(theta)))
        throw FringeNodeError("sin(L t delta) = 0: fringe node, variance is infinite");
    return s * s;
}

}  // namespace

void ExperimentConfig::validate() const {
    if (L < 1) throw std::invalid_argument("L must be >= 1");
    if (!(t > 0.0) || !std::isfinite(t)) throw std::invalid_argument("exposure time must be finite and > 0");
    if (!(T_total >= t) || !std::isfinite(T_total)) throw std::invalid_argument("T_total must be finite and >= t");
    if (!std::isfinite(delta)) throw std::invalid_argument("delta must be finite");
}

long long ExperimentConfig::repetitions() const { return static_cast<long long>(std::floor(T_total / t)); }

double signal_probability(const ExperimentConfig& cfg, const DephasingModel& model) {
    cfg.validate();
    const double decay = coherence(cfg.t, cfg.L, model);
    return 0.5 + 0.5 * decay * std::cos(cfg.phase());
}

double signal_slope(const ExperimentConfig& cfg, const DephasingModel& model) {
    cfg.validate();
    const double Lt = static_cast<double>(cfg.L) * cfg.t;
    return -0.5 * coherence(cfg.t, cfg.L, model) * Lt * std::sin(cfg.phase());
}

double variance_ghz(const ExperimentConfig& cfg, const DephasingModel& model) {
    cfg.validate();
    const double L = static_cast<double>(cfg.L);
    const double excess = std::expm1(2.0 * L * decoherence_exponent(cfg.t, model));
    return (excess / fringe_factor(cfg.phase()) + 1.0) / (cfg.T_total * L * L * cfg.t);
}

double variance_ideal(const ExperimentConfig& cfg) {
    cfg.validate();
    const double L = static_cast<double>(cfg.L);
    return 1.0 / (cfg.T_total * L * L * cfg.t);
}

double variance_separable(const ExperimentConfig& cfg, const DephasingModel& model) {
    cfg.validate();
    const double L = static_cast<double>(cfg.L);
    const double excess = std::expm1(2.0 * decoherence_exponent(cfg.t, model));
    return (excess / fringe_factor(cfg.t * cfg.delta) + 1.0) / (cfg.T_total * L * cfg.t);
}

double variance(ProbeStrategy strategy, const ExperimentConfig& cfg, const DephasingModel& model) {
    switch (strategy) {
        case ProbeStrategy::ghz: return variance_ghz(cfg, model);
        case ProbeStrategy::separable: return variance_separable(cfg, model);
        case ProbeStrategy::ideal_ghz: return variance_ideal(cfg);
    }
    throw std::invalid_argument("unknown probe strategy");
}

VarianceBounds variance_bounds(const ExperimentConfig& cfg, const DephasingModel& model) {
    cfg.validate();
    const double theta = cfg.phase();
    // a few ulps of slack so that delta = pi / (2 L t) is accepted
    if (!(theta > 0.0) || theta > std::numbers::pi / 2 * (1.0 + 4.0 * kEps))
        throw std::domain_error("variance bounds need 0 < L t delta <= pi/2");
    const double L = static_cast<double>(cfg.L);
    const double excess = std::expm1(2.0 * L * decoherence_exponent(cfg.t, model));
    const double lower = excess / (cfg.T_total * L * L * L * L * cfg.t * cfg.t * cfg.t * cfg.delta * cfg.delta);
    return {lower, std::numbers::pi * std::numbers::pi / 4.0 * lower};
}

}  // namespace ghzsense
