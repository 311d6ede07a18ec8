#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "levyslow/config.hpp"
#include "levyslow/errors.hpp"
#include "levyslow/experiments.hpp"

namespace {

using levyslow::ExperimentConfig;
using levyslow::RunResult;

struct Overrides {
    std::string config_path;
    std::map<std::string, std::string> values;
};

void add_common_flags(CLI::App* sub, Overrides& o) {
    sub->add_option("--config", o.config_path, "JSON configuration file");
    for (const char* key : {"epsilon", "alpha", "seed", "out", "dt", "modes"}) {
        sub->add_option_function<std::string>(
            std::string("--") + key, [&o, key](const std::string& v) { o.values[key] = v; },
            std::string("override ") + key);
    }
}

ExperimentConfig resolve(const Overrides& o, std::optional<levyslow::ExampleId> forced) {
    ExperimentConfig cfg = levyslow::default_config(forced.value_or(levyslow::ExampleId::example2));
    if (!o.config_path.empty()) cfg = levyslow::parse_config_file(o.config_path, cfg);
    if (forced) cfg.example = *forced;
    for (const auto& [k, v] : o.values) levyslow::apply_override(cfg, k, v);
    cfg.validate();
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Random slow manifolds of nonlocal fast-slow systems with stable Levy noise"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(LEVYSLOW_VERSION));

    using Runner = std::function<RunResult(const ExperimentConfig&)>;
    struct Command {
        const char* name;
        const char* help;
        std::optional<levyslow::ExampleId> forced;
        Runner run;
    };
    const Command commands[] = {
        {"example1", "graph, tracking and approximation artifacts for the first example",
         levyslow::ExampleId::example1, levyslow::run_example},
        {"example2", "graph, tracking and approximation artifacts for the second example",
         levyslow::ExampleId::example2, levyslow::run_example},
        {"manifold", "manifold graph CSV per seed", std::nullopt, levyslow::run_manifold},
        {"tracking", "exponential tracking report", std::nullopt, levyslow::run_tracking},
        {"approx-order", "graph vs its small-eps expansion over a range of eps", std::nullopt,
         levyslow::run_approx_order},
        {"diagnostics", "property suites with pass/fail per property", std::nullopt,
         levyslow::run_diagnostics_command},
        {"simulate", "one stochastic trajectory and its driving path", std::nullopt,
         levyslow::run_simulate},
    };

    Overrides overrides;
    std::map<CLI::App*, const Command*> by_app;
    for (const Command& c : commands) {
        CLI::App* sub = app.add_subcommand(c.name, c.help);
        add_common_flags(sub, overrides);
        by_app[sub] = &c;
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    const Command* cmd = nullptr;
    for (const auto& [sub, c] : by_app) {
        if (sub->parsed()) cmd = c;
    }

    try {
        const ExperimentConfig cfg = resolve(overrides, cmd->forced);
        const RunResult r = cmd->run(cfg);
        std::cout << "manifest_hash=" << r.manifest["manifest_hash"].get<std::string>() << '\n';
        for (const auto& a : r.artifacts) std::cout << cfg.output_dir << '/' << a << '\n';
        return 0;
    } catch (const levyslow::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 1;
    } catch (const levyslow::InvalidArgument& e) {
        std::cerr << "invalid argument: " << e.what() << '\n';
        return 1;
    } catch (const levyslow::NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
}
