#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "ghzsense/commands.hpp"
#include "ghzsense/estimation.hpp"
#include "ghzsense/scaling.hpp"
#include "ghzsense/stochastic_sim.hpp"

namespace py = pybind11;
using namespace ghzsense;

namespace {

void bind_noise_models(py::module_& m) {
    py::class_<ClassicalNoiseParams>(m, "ClassicalNoiseParams")
        .def(py::init([](double lambda, double tau_c) {
                 ClassicalNoiseParams p{lambda, tau_c};
                 p.validate();
                 return p;
             }),
             py::arg("lam") = 0.25, py::arg("tau_c") = 1.0)
        .def_readwrite("lam", &ClassicalNoiseParams::lambda)
        .def_readwrite("tau_c", &ClassicalNoiseParams::tau_c)
        .def("__repr__", [](const ClassicalNoiseParams& p) {
            return "ClassicalNoiseParams(lam=" + std::to_string(p.lambda) + ", tau_c=" + std::to_string(p.tau_c) + ")";
        });

    py::class_<BosonicBathParams>(m, "BosonicBathParams")
        .def(py::init([](double temperature, double omega_c) {
                 BosonicBathParams p{temperature, omega_c};
                 p.validate();
                 return p;
             }),
             py::arg("temperature") = 0.05, py::arg("omega_c") = 1.0)
        .def_readwrite("temperature", &BosonicBathParams::temperature)
        .def_readwrite("omega_c", &BosonicBathParams::omega_c);

    py::class_<MarkovianLimit>(m, "MarkovianLimit")
        .def(py::init<ClassicalNoiseParams>(), py::arg("params"))
        .def_readwrite("params", &MarkovianLimit::params);
    py::class_<OneOverFLimit>(m, "OneOverFLimit")
        .def(py::init<ClassicalNoiseParams>(), py::arg("params"))
        .def_readwrite("params", &OneOverFLimit::params);

    m.def("model_tag", [](const DephasingModel& model) { return std::string(model_tag(model)); });
    m.def("correlation", &correlation, py::arg("t1"), py::arg("t2"), py::arg("params"));
    m.def("gamma_classical", &gamma_classical, py::arg("t"), py::arg("params"));
    m.def("gamma_limit_markov", &gamma_limit_markov, py::arg("params"));
    m.def("gamma_limit_one_over_f", &gamma_limit_one_over_f, py::arg("t"), py::arg("params"));
    m.def("gamma_bosonic", &gamma_bosonic, py::arg("t"), py::arg("params"));
    m.def("decoherence_rate", &decoherence_rate, py::arg("t"), py::arg("model"));
    m.def("decoherence_exponent", &decoherence_exponent, py::arg("t"), py::arg("model"));
    m.def("coherence", &coherence, py::arg("t"), py::arg("L"), py::arg("model"));
}

void bind_estimation(py::module_& m) {
    py::register_exception<FringeNodeError>(m, "FringeNodeError", PyExc_ValueError);

    py::class_<ExperimentConfig>(m, "ExperimentConfig")
        .def(py::init([](long long L, double t, double T_total, double delta) {
                 ExperimentConfig cfg{L, t, T_total, delta};
                 cfg.validate();
                 return cfg;
             }),
             py::arg("L"), py::arg("t"), py::arg("T_total"), py::arg("delta"))
        .def_readwrite("L", &ExperimentConfig::L)
        .def_readwrite("t", &ExperimentConfig::t)
        .def_readwrite("T_total", &ExperimentConfig::T_total)
        .def_readwrite("delta", &ExperimentConfig::delta)
        .def_property_readonly("repetitions", &ExperimentConfig::repetitions);

    py::class_<VarianceBounds>(m, "VarianceBounds")
        .def_readonly("lower", &VarianceBounds::lower)
        .def_readonly("upper", &VarianceBounds::upper);

    m.def("signal_probability", &signal_probability, py::arg("cfg"), py::arg("model"));
    m.def("variance_ghz", &variance_ghz, py::arg("cfg"), py::arg("model"));
    m.def("variance_ideal", &variance_ideal, py::arg("cfg"));
    m.def("variance_separable", &variance_separable, py::arg("cfg"), py::arg("model"));
    m.def("variance_bounds", &variance_bounds, py::arg("cfg"), py::arg("model"));
}

void bind_stochastic(py::module_& m) {
    py::class_<TrajectoryConfig>(m, "TrajectoryConfig")
        .def(py::init<double, std::size_t, std::size_t, std::uint64_t>(), py::arg("t_max"), py::arg("grid_points"),
             py::arg("num_trajectories"), py::arg("seed"))
        .def_readwrite("t_max", &TrajectoryConfig::t_max)
        .def_readwrite("grid_points", &TrajectoryConfig::grid_points)
        .def_readwrite("num_trajectories", &TrajectoryConfig::num_trajectories)
        .def_readwrite("seed", &TrajectoryConfig::seed);

    py::class_<CoherenceEstimate>(m, "CoherenceEstimate")
        .def_readonly("magnitude", &CoherenceEstimate::magnitude)
        .def_readonly("std_error", &CoherenceEstimate::std_error);

    py::class_<TrajectoryEnsemble>(m, "TrajectoryEnsemble")
        .def_property_readonly("phases",
                               [](const TrajectoryEnsemble& e) { return py::array_t<double>(e.phases.size(), e.phases.data()); })
        .def_readonly("meta", &TrajectoryEnsemble::meta)
        .def_readonly("jitter", &TrajectoryEnsemble::jitter);

    py::class_<EstimationRun>(m, "EstimationRun")
        .def_readonly("counts", &EstimationRun::counts)
        .def_readonly("shots", &EstimationRun::shots)
        .def_readonly("delta_hat", &EstimationRun::delta_hat)
        .def_readonly("clamped", &EstimationRun::clamped);

    py::class_<MseResult>(m, "MseResult")
        .def_readonly("mse", &MseResult::mse)
        .def_readonly("std_error", &MseResult::std_error)
        .def_readonly("clamp_fraction", &MseResult::clamp_fraction)
        .def_readonly("saturated", &MseResult::saturated);

    m.def("default_grid_points", &default_grid_points, py::arg("t_max"), py::arg("tau_c"), py::arg("min_steps") = 32);
    m.def(
        "sample_trajectories",
        [](const ClassicalNoiseParams& p, const TrajectoryConfig& cfg, unsigned threads) {
            py::gil_scoped_release release;
            return sample_trajectories(p, cfg, {threads, false});
        },
        py::arg("params"), py::arg("cfg"), py::arg("threads") = 0);
    m.def("ensemble_coherence", &ensemble_coherence, py::arg("ensemble"));
    m.def("ghz_ensemble_coherence", &ghz_ensemble_coherence, py::arg("ensemble"), py::arg("L"));
    m.def("simulate_measurements", &simulate_measurements, py::arg("cfg"), py::arg("model"), py::arg("seed"));
    m.def(
        "empirical_mse",
        [](const ExperimentConfig& cfg, const DephasingModel& model, std::size_t repetitions, std::uint64_t seed,
           unsigned threads) {
            py::gil_scoped_release release;
            return empirical_mse(cfg, model, repetitions, seed, threads);
        },
        py::arg("cfg"), py::arg("model"), py::arg("repetitions"), py::arg("seed"), py::arg("threads") = 0);
}

void bind_scaling(py::module_& m) {
    py::class_<SchedulePolicy>(m, "SchedulePolicy")
        .def(py::init([](double s, double z) {
                 SchedulePolicy p{s, z};
                 p.validate();
                 return p;
             }),
             py::arg("s") = 0.1, py::arg("z") = 0.5)
        .def_readwrite("s", &SchedulePolicy::s)
        .def_readwrite("z", &SchedulePolicy::z);

    py::class_<ScalingEntry>(m, "ScalingEntry")
        .def_readonly("L", &ScalingEntry::L)
        .def_readonly("t", &ScalingEntry::t)
        .def_readonly("delta", &ScalingEntry::delta)
        .def_readonly("variance", &ScalingEntry::variance)
        .def_readonly("uncertainty", &ScalingEntry::uncertainty);

    py::class_<ScalingSeries>(m, "ScalingSeries")
        .def_readonly("entries", &ScalingSeries::entries)
        .def_readonly("policy", &ScalingSeries::policy)
        .def_readonly("T_total", &ScalingSeries::T_total);

    py::class_<ExponentFit>(m, "ExponentFit")
        .def_readonly("slope", &ExponentFit::slope)
        .def_readonly("intercept", &ExponentFit::intercept)
        .def_readonly("stderr", &ExponentFit::stderr_slope)
        .def_readonly("r_squared", &ExponentFit::r_squared);

    py::class_<GammaBoundCheck>(m, "GammaBoundCheck")
        .def_readonly("residual", &GammaBoundCheck::residual)
        .def_readonly("bound", &GammaBoundCheck::bound)
        .def_readonly("holds", &GammaBoundCheck::holds);

    py::class_<OptimalExposure>(m, "OptimalExposure")
        .def_readonly("t_star", &OptimalExposure::t_star)
        .def_readonly("variance_star", &OptimalExposure::variance_star)
        .def_readonly("interior", &OptimalExposure::interior);

    py::class_<DivergenceProbe>(m, "DivergenceProbe")
        .def_readonly("eventually_increasing", &DivergenceProbe::eventually_increasing)
        .def_readonly("eventually_decreasing", &DivergenceProbe::eventually_decreasing)
        .def_readonly("series", &DivergenceProbe::series);

    py::class_<FidelityEstimate>(m, "FidelityEstimate")
        .def_readonly("fidelity", &FidelityEstimate::fidelity)
        .def_readonly("infidelity", &FidelityEstimate::infidelity)
        .def_readonly("quadratic_prediction", &FidelityEstimate::quadratic_prediction);

    m.def("exposure_time", &exposure_time, py::arg("L"), py::arg("policy"));
    m.def("geometric_grid", &geometric_grid, py::arg("lo_exponent"), py::arg("hi_exponent"));
    m.def("gamma_bound_check", &gamma_bound_check, py::arg("L"), py::arg("policy"), py::arg("params"));
    m.def(
        "uncertainty_curve",
        [](const std::vector<long long>& Ls, const SchedulePolicy& policy, const DephasingModel& model,
           double T_total) { return uncertainty_curve(Ls, policy, model, T_total); },
        py::arg("L_values"), py::arg("policy"), py::arg("model"), py::arg("T_total") = 1.0);
    m.def("fit_exponent", &fit_exponent, py::arg("series"), py::arg("tail_fraction") = 0.5);
    m.def("optimal_exposure", &optimal_exposure, py::arg("L"), py::arg("model"), py::arg("T_total") = 1.0);
    m.def(
        "divergence_probe",
        [](const SchedulePolicy& policy, const DephasingModel& model, double T_total, const std::vector<long long>& Ls) {
            return divergence_probe(policy, model, T_total, Ls);
        },
        py::arg("policy"), py::arg("model"), py::arg("T_total"), py::arg("L_values"));
    m.def("fidelity_smalltime", &fidelity_smalltime, py::arg("t"), py::arg("L"), py::arg("model"));
}

void bind_cli(py::module_& m) {
    m.def("command_names", [] {
        std::vector<std::string> names;
        for (auto n : command_names()) names.emplace_back(n);
        return names;
    });
    m.def(
        "run_command",
        [](const std::string& name, const std::string& config_json, const std::filesystem::path& out_dir) {
            const RunConfig cfg = parse_run_config(nlohmann::json::parse(config_json.empty() ? "{}" : config_json));
            const auto result = run_command(name, cfg, out_dir);
            return py::make_tuple(result.exit_code, result.outputs, result.summary);
        },
        py::arg("name"), py::arg("config_json") = "", py::arg("out_dir") = ".",
        "Runs a CLI command in-process; returns (exit_code, output_paths, summary).");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "GHZ-state field sensing under independent dephasing";
    m.attr("__version__") = std::string(kToolVersion);
    bind_noise_models(m);
    bind_estimation(m);
    bind_stochastic(m);
    bind_scaling(m);
    bind_cli(m);
}
