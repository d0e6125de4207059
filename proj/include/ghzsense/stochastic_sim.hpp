#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <vector>

#include "ghzsense/estimation.hpp"
#include "ghzsense/noise_models.hpp"

namespace ghzsense {

/// Covariance factorization failed even after the largest diagonal jitter.
class FactorizationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct TrajectoryConfig {
    double t_max = 1.0;
    std::size_t grid_points = 21;
    std::size_t num_trajectories = 100000;
    std::uint64_t seed = 0;

    double step() const { return t_max / static_cast<double>(grid_points - 1); }
    /// Requires step() <= tau_c / 20.
    void validate(const ClassicalNoiseParams& p) const;

    friend bool operator==(const TrajectoryConfig&, const TrajectoryConfig&) = default;
};

/// Smallest uniform grid over [0, t_max] with at least `min_steps` steps and step <= tau_c / 20.
std::size_t default_grid_points(double t_max, double tau_c, std::size_t min_steps = 32);

struct SamplerOptions {
    unsigned threads = 0;     // 0 = hardware concurrency
    bool keep_paths = false;  // store f(t_i) for every trajectory
};

struct TrajectoryEnsemble {
    std::vector<double> phases;  // accumulated relative phase per trajectory
    TrajectoryConfig meta;
    std::vector<double> paths;   // row-major [trajectory][grid index], empty unless kept
    double jitter = 0.0;         // diagonal jitter that made the factorization succeed

    double path_value(std::size_t trajectory, std::size_t grid_index) const {
        return paths[trajectory * meta.grid_points + grid_index];
    }
};

struct CoherenceEstimate {
    double magnitude = 0.0;
    double std_error = 0.0;
};

/// Draws stationary Gaussian noise paths with the model correlation kernel and
/// accumulates phi = 2 lam * integral of f by the trapezoidal rule.
TrajectoryEnsemble sample_trajectories(const ClassicalNoiseParams& p, const TrajectoryConfig& cfg,
                                       const SamplerOptions& opts = {});

/// |mean e^{i phi}| with a delete-one jackknife standard error. Needs >= 100 trajectories.
CoherenceEstimate ensemble_coherence(const TrajectoryEnsemble& ens);

/// Sums consecutive blocks of L independent phases (one per spin) before averaging,
/// i.e. the coherence of an L-qubit GHZ state under independent noise.
CoherenceEstimate ghz_ensemble_coherence(const TrajectoryEnsemble& ens, long long L);

/// Writes (trajectory_id, grid_index, time, f_value). Requires kept paths.
void write_trajectory_dump(std::ostream& out, const TrajectoryEnsemble& ens);

struct EstimationRun {
    long long counts = 0;
    long long shots = 0;
    double delta_hat = 0.0;
    bool clamped = false;  // arccos argument left [-1, 1]
};

struct DetuningEstimate {
    double delta_hat = 0.0;
    bool clamped = false;
};

/// Inverts an observed probability: arccos((2 p - 1) e^{L gamma t}) / (L t), argument clamped.
DetuningEstimate estimate_detuning(double p_hat, const ExperimentConfig& cfg, const DephasingModel& model);

/// counts ~ Binomial(floor(T_total/t), P) followed by estimate_detuning.
EstimationRun simulate_measurements(const ExperimentConfig& cfg, const DephasingModel& model, std::uint64_t seed);

struct MseResult {
    double mse = 0.0;
    double std_error = 0.0;
    double clamp_fraction = 0.0;
    bool saturated = false;  // more than 1% of runs hit the clamp
};

MseResult empirical_mse(const ExperimentConfig& cfg, const DephasingModel& model, std::size_t repetitions,
                        std::uint64_t seed, unsigned threads = 0);

}  // namespace ghzsense
