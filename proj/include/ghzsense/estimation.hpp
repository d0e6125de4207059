#pragma once

#include <stdexcept>

#include "ghzsense/noise_models.hpp"

namespace ghzsense {

/// Thrown when the fringe factor sin(L t delta) vanishes and the variance is infinite.
class FringeNodeError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

struct ExperimentConfig {
    long long L = 1;
    double t = 1.0;        // exposure time
    double T_total = 1.0;  // total time budget
    double delta = 0.0;    // true detuning

    void validate() const;
    /// floor(T_total / t); analytic formulas use the real ratio instead.
    long long repetitions() const;
    double phase() const { return static_cast<double>(L) * t * delta; }

    friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

enum class ProbeStrategy { ghz, separable, ideal_ghz };

struct VarianceBounds {
    double lower = 0.0;
    double upper = 0.0;
};

/// Probability of finding the initial GHZ state: 1/2 + 1/2 e^{-L gamma t} cos(L t delta).
double signal_probability(const ExperimentConfig& cfg, const DephasingModel& model);

/// Analytic dP/d(delta).
double signal_slope(const ExperimentConfig& cfg, const DephasingModel& model);

/// Variance of the delta estimate for a GHZ probe. Throws FringeNodeError at sin(L t delta) = 0.
double variance_ghz(const ExperimentConfig& cfg, const DephasingModel& model);

/// Heisenberg-limited variance 1/(T L^2 t).
double variance_ideal(const ExperimentConfig& cfg);

/// L independent single-qubit probes measured in parallel (standard quantum limit baseline).
double variance_separable(const ExperimentConfig& cfg, const DephasingModel& model);

/// Dispatch over ProbeStrategy.
double variance(ProbeStrategy strategy, const ExperimentConfig& cfg, const DephasingModel& model);

/// Two-sided bounds on variance_ghz - variance_ideal, valid for 0 < L t delta <= pi/2.
VarianceBounds variance_bounds(const ExperimentConfig& cfg, const DephasingModel& model);

}  // namespace ghzsense
