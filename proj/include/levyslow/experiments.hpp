#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "levyslow/config.hpp"
#include "levyslow/fastslow_system.hpp"
#include "levyslow/slow_manifold.hpp"
#include "levyslow/tracking.hpp"

namespace levyslow {

/// A wired system plus its nominal scalar Lipschitz constants.
/// `spec.K` is the constant the code certifies by sampling; `reference_K` is the nominal
/// value used for the closed-form constants.
struct ExampleSystem {
    SystemSpec spec;
    double reference_K = 0.0;
    double reference_Lf = 0.0;
    double reference_Lg = 0.0;
    std::string name;
};

/// f = (1/6) y^2, g = (1/3) sin(int x), J = +1.
ExampleSystem make_example1(double alpha, std::size_t n_modes, double epsilon, double gamma_J);
/// f = 0.01 (sqrt(y^2 + 5) - sqrt 5), g = 0.01 b sin(int x), J = -1.
ExampleSystem make_example2(double alpha, std::size_t n_modes, double epsilon, double b,
                            double gamma_J);
/// f = c Y e1, g = 0: the graph is c y0 / (lambda1 + eps J) e1 in closed form.
ExampleSystem make_linear_system(double alpha, std::size_t n_modes, double epsilon, double c,
                                 double J, double gamma_J);

/// System selected by the config, with its noise settings applied.
ExampleSystem build_system(const ExperimentConfig& cfg);
ExampleSystem build_system(const ExperimentConfig& cfg, double epsilon);

ManifoldConfig manifold_config(const ExperimentConfig& cfg, const SystemSpec& spec);

/// Noise paths long enough for manifold solves on [-T, 0] (plus stationary history)
/// and forward runs up to `t_future`.
Omega omega_for(const SystemSpec& spec, const ManifoldConfig& mc, double t_future,
                std::uint64_t seed);

struct RunResult {
    std::vector<std::string> artifacts;  // file names relative to the output directory
    nlohmann::json manifest;
};

/// Each command writes its artifacts plus manifest.json into cfg.output_dir.
RunResult run_example(const ExperimentConfig& cfg);
RunResult run_manifold(const ExperimentConfig& cfg);
RunResult run_tracking(const ExperimentConfig& cfg);
RunResult run_approx_order(const ExperimentConfig& cfg);
RunResult run_simulate(const ExperimentConfig& cfg);
RunResult run_diagnostics_command(const ExperimentConfig& cfg);

/// %.17g formatting used for every CSV value.
std::string format_number(double v);

}  // namespace levyslow
