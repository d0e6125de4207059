#pragma once

#include <string_view>
#include <variant>

namespace ghzsense {

/// Gaussian classical dephasing field: coupling strength and correlation time.
struct ClassicalNoiseParams {
    double lambda = 0.25;
    double tau_c = 1.0;

    void validate() const;
    friend bool operator==(const ClassicalNoiseParams&, const ClassicalNoiseParams&) = default;
};

/// Quantized bosonic environment. Temperature is in frequency units (k_B = 1).
struct BosonicBathParams {
    double temperature = 0.05;
    double omega_c = 1.0;

    void validate() const;
    friend bool operator==(const BosonicBathParams&, const BosonicBathParams&) = default;
};

/// Constant-rate limit t >> tau_c of the classical model.
struct MarkovianLimit {
    ClassicalNoiseParams params;
    friend bool operator==(const MarkovianLimit&, const MarkovianLimit&) = default;
};

/// Short-time (infinite correlation time) limit of the classical model.
struct OneOverFLimit {
    ClassicalNoiseParams params;
    friend bool operator==(const OneOverFLimit&, const OneOverFLimit&) = default;
};

using DephasingModel = std::variant<ClassicalNoiseParams, BosonicBathParams, MarkovianLimit, OneOverFLimit>;

void validate(const DephasingModel& model);
std::string_view model_tag(const DephasingModel& model);

/// Noise correlation <f(t1) f(t2)> = (2/sqrt(pi)) exp(-(t1-t2)^2 / tau_c^2).
double correlation(double t1, double t2, const ClassicalNoiseParams& p);

/// Single-qubit decoherence rate of the classical Gaussian model.
///
/// gamma(t) = 4 lam^2 tau_c^2 (e^{-t^2/tau_c^2} - 1) / (sqrt(pi) t) + 4 lam^2 tau_c erf(t / tau_c).
/// The t -> 0 singularity is removable; below t = 1e-4 tau_c the power series is used.
double gamma_classical(double t, const ClassicalNoiseParams& p);

/// Long-time plateau 4 lam^2 tau_c.
double gamma_limit_markov(const ClassicalNoiseParams& p);

/// Short-time line (4/sqrt(pi)) lam^2 t.
double gamma_limit_one_over_f(double t, const ClassicalNoiseParams& p);

/// Bosonic-bath rate Gamma(t) = log(1 + w_c^2 t^2)/t + (2/t) log(sinh(pi T t)/(pi T t)).
double gamma_bosonic(double t, const BosonicBathParams& p);

/// Rate of whichever model variant is active.
double decoherence_rate(double t, const DephasingModel& model);

/// gamma(t) * t, evaluated without dividing by t. This is the single-qubit
/// coherence exponent; an L-qubit GHZ state decays as exp(-L * exponent).
double decoherence_exponent(double t, const DephasingModel& model);

/// Magnitude of the GHZ off-diagonal coherence, exp(-L gamma(t) t).
double coherence(double t, long long L, const DephasingModel& model);

}  // namespace ghzsense
