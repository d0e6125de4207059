#include "ghzsense/stochastic_sim.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <numbers>
#include <random>
#include <span>
#include <string>

#include "ghzsense/parallel.hpp"
#include "ghzsense/random.hpp"

namespace ghzsense {

namespace {

constexpr double kJitterFirst = 1e-12;
constexpr double kJitterLast = 1e-8;

struct Factor {
    Eigen::MatrixXd lower;
    double jitter = 0.0;
};

// Lower-triangular square root of the kernel matrix; jitter escalates by decades
// relative to the diagonal value.
Factor factor_covariance(const ClassicalNoiseParams& p, const TrajectoryConfig& cfg) {
    const auto n = static_cast<Eigen::Index>(cfg.grid_points);
    const double dt = cfg.step();
    Eigen::MatrixXd cov(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j <= i; ++j)
            cov(i, j) = cov(j, i) = correlation(static_cast<double>(i) * dt, static_cast<double>(j) * dt, p);
    const double diag = cov(0, 0);
    for (double jitter = kJitterFirst; jitter <= kJitterLast * 1.0001; jitter *= 10.0) {
        Eigen::MatrixXd shifted = cov;
        shifted.diagonal().array() += jitter * diag;
        Eigen::LLT<Eigen::MatrixXd> llt(shifted);
        if (llt.info() == Eigen::Success) return {llt.matrixL(), jitter * diag};
    }
    throw FactorizationError("noise covariance is not positive definite even with jitter 1e-8; grid of " +
                             std::to_string(cfg.grid_points) + " points over t_max = " + std::to_string(cfg.t_max) +
                             " is too ill-conditioned");
}

CoherenceEstimate jackknife_coherence(std::span<const double> phases) {
    const std::size_t n = phases.size();
    if (n < 100) throw std::invalid_argument("coherence estimate needs at least 100 trajectories");
    double sum_c = 0.0, sum_s = 0.0;
    for (double phi : phases) {
        sum_c += std::cos(phi);
        sum_s += std::sin(phi);
    }
    const double nd = static_cast<double>(n);
    const double magnitude = std::hypot(sum_c, sum_s) / nd;

    // delete-one replicates |(S - x_k) / (n - 1)|
    std::vector<double> replicates(n);
    double mean_rep = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        replicates[k] = std::hypot(sum_c - std::cos(phases[k]), sum_s - std::sin(phases[k])) / (nd - 1.0);
        mean_rep += replicates[k];
    }
    mean_rep /= nd;
    double ss = 0.0;
    for (double r : replicates) ss += (r - mean_rep) * (r - mean_rep);
    return {magnitude, std::sqrt((nd - 1.0) / nd * ss)};
}

}  // namespace

void TrajectoryConfig::validate(const ClassicalNoiseParams& p) const {
    p.validate();
    if (!(t_max > 0.0) || !std::isfinite(t_max)) throw std::invalid_argument("t_max must be finite and > 0");
    if (grid_points < 2) throw std::invalid_argument("grid_points must be >= 2");
    if (num_trajectories < 1) throw std::invalid_argument("num_trajectories must be >= 1");
    if (step() > p.tau_c / 20.0 * (1.0 + 1e-12))
        throw std::invalid_argument("time step must not exceed tau_c / 20");
}

std::size_t default_grid_points(double t_max, double tau_c, std::size_t min_steps) {
    const auto steps = static_cast<std::size_t>(std::ceil(20.0 * t_max / tau_c - 1e-9));
    return std::max(steps, min_steps) + 1;
}

TrajectoryEnsemble sample_trajectories(const ClassicalNoiseParams& p, const TrajectoryConfig& cfg,
                                       const SamplerOptions& opts) {
    cfg.validate(p);
    const std::size_t n = cfg.grid_points;
    const Factor factor = factor_covariance(p, cfg);

    // trapezoid weights folded through the factor: phi = 2 lam w^T (L z) = 2 lam (L^T w) . z
    Eigen::VectorXd weights = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(n), cfg.step());
    weights(0) *= 0.5;
    weights(static_cast<Eigen::Index>(n) - 1) *= 0.5;
    const Eigen::VectorXd projected = factor.lower.transpose() * weights;
    const double coupling = 2.0 * p.lambda;

    TrajectoryEnsemble ens;
    ens.meta = cfg;
    ens.jitter = factor.jitter;
    ens.phases.resize(cfg.num_trajectories);
    if (opts.keep_paths) ens.paths.resize(cfg.num_trajectories * n);

    parallel_for(cfg.num_trajectories, opts.threads, [&](std::size_t k) {
        std::mt19937_64 engine(derive_seed(cfg.seed, k));
        std::normal_distribution<double> normal;
        Eigen::VectorXd z(static_cast<Eigen::Index>(n));
        for (Eigen::Index i = 0; i < z.size(); ++i) z(i) = normal(engine);
        ens.phases[k] = coupling * projected.dot(z);
        if (opts.keep_paths) {
            Eigen::Map<Eigen::VectorXd> row(ens.paths.data() + k * n, static_cast<Eigen::Index>(n));
            row.noalias() = factor.lower.triangularView<Eigen::Lower>() * z;
        }
    });
    return ens;
}

CoherenceEstimate ensemble_coherence(const TrajectoryEnsemble& ens) { return jackknife_coherence(ens.phases); }

CoherenceEstimate ghz_ensemble_coherence(const TrajectoryEnsemble& ens, long long L) {
    if (L < 1) throw std::invalid_argument("L must be >= 1");
    const auto block = static_cast<std::size_t>(L);
    const std::size_t shots = ens.phases.size() / block;
    std::vector<double> summed(shots, 0.0);
    for (std::size_t k = 0; k < shots; ++k)
        for (std::size_t l = 0; l < block; ++l) summed[k] += ens.phases[k * block + l];
    return jackknife_coherence(summed);
}

void write_trajectory_dump(std::ostream& out, const TrajectoryEnsemble& ens) {
    const std::size_t n = ens.meta.grid_points;
    if (ens.paths.size() != ens.phases.size() * n)
        throw std::invalid_argument("trajectory dump needs an ensemble sampled with keep_paths");
    out << "trajectory_id,grid_index,time,f_value\n";
    out << std::setprecision(17);
    const double dt = ens.meta.step();
    for (std::size_t k = 0; k < ens.phases.size(); ++k)
        for (std::size_t i = 0; i < n; ++i)
            out << k << ',' << i << ',' << static_cast<double>(i) * dt << ',' << ens.paths[k * n + i] << '\n';
}

DetuningEstimate estimate_detuning(double p_hat, const ExperimentConfig& cfg, const DephasingModel& model) {
    cfg.validate();
    const double L = static_cast<double>(cfg.L);
    const double arg = (2.0 * p_hat - 1.0) * std::exp(L * decoherence_exponent(cfg.t, model));
    const bool clamped = arg > 1.0 || arg < -1.0;
    return {std::acos(std::clamp(arg, -1.0, 1.0)) / (L * cfg.t), clamped};
}

EstimationRun simulate_measurements(const ExperimentConfig& cfg, const DephasingModel& model, std::uint64_t seed) {
    cfg.validate();
    const long long shots = cfg.repetitions();
    const double p = std::clamp(signal_probability(cfg, model), 0.0, 1.0);
    std::mt19937_64 engine(derive_seed(seed, 0));
    std::binomial_distribution<long long> binomial(shots, p);
    const long long counts = binomial(engine);
    const auto est = estimate_detuning(static_cast<double>(counts) / static_cast<double>(shots), cfg, model);
    return {counts, shots, est.delta_hat, est.clamped};
}

MseResult empirical_mse(const ExperimentConfig& cfg, const DephasingModel& model, std::size_t repetitions,
                        std::uint64_t seed, unsigned threads) {
    cfg.validate();
    if (repetitions < 100) throw std::invalid_argument("empirical MSE needs at least 100 repetitions");
    const double theta = cfg.phase();
    if (!(theta > 0.0 && theta < std::numbers::pi) || std::sin(theta) < 1e-3)
        throw std::domain_error("L t delta must lie inside (0, pi), away from the endpoints");

    std::vector<double> sq_err(repetitions);
    std::vector<char> clamped(repetitions);
    parallel_for(repetitions, threads, [&](std::size_t r) {
        const auto run = simulate_measurements(cfg, model, derive_seed(seed, r));
        const double err = run.delta_hat - cfg.delta;
        sq_err[r] = err * err;
        clamped[r] = run.clamped ? 1 : 0;
    });

    const double n = static_cast<double>(repetitions);
    double mean = 0.0;
    for (double e : sq_err) mean += e;
    mean /= n;
    double ss = 0.0;
    for (double e : sq_err) ss += (e - mean) * (e - mean);
    const double clamp_fraction = static_cast<double>(std::count(clamped.begin(), clamped.end(), 1)) / n;
    return {mean, std::sqrt(ss / (n - 1.0) / n), clamp_fraction, clamp_fraction > 0.01};
}

}  // namespace ghzsense
