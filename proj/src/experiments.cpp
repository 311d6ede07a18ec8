#include "levyslow/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "levyslow/approximation.hpp"
#include "levyslow/diagnostics.hpp"
#include "levyslow/errors.hpp"
#include "levyslow/stationary_ou.hpp"

namespace levyslow {

using nlohmann::json;

std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

SpectralOperator checked_operator(double alpha, std::size_t n_modes) {
    return build_operator(alpha, n_modes);
}

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

}  // namespace

ExampleSystem make_example1(double alpha, std::size_t n_modes, double epsilon, double gamma_J) {
    ExampleSystem ex;
    ex.name = "example1";
    SystemSpec& s = ex.spec;
    s.op = checked_operator(alpha, n_modes);
    s.epsilon = epsilon;
    s.slow_dim = 1;
    s.J = {1.0};
    s.gamma_J = gamma_J;
    const SpatialField profile_field = s.op.constant_profile();
    const std::vector<double> profile(profile_field.coefficients().begin(),
                                      profile_field.coefficients().end());
    const std::vector<double> integrals(s.op.mode_integrals().begin(), s.op.mode_integrals().end());
    s.f = [profile](std::span<const double>, std::span<const double> y, std::span<double> out) {
        const double v = y[0] * y[0] / 6.0;
        for (std::size_t k = 0; k < out.size(); ++k) out[k] = v * profile[k];
    };
    s.g = [integrals](std::span<const double> x, std::span<const double>, std::span<double> out) {
        out[0] = std::sin(dot(integrals, x)) / 3.0;
    };
    // On the sampling box |y| <= box: |d f / d y| <= (box / 3) ||P 1||, |d g / d x| <= ||P 1|| / 3.
    const double p = euclidean_norm(profile);
    s.K = p * std::max(s.lipschitz_box / 3.0, 1.0 / 3.0);
    ex.reference_K = s.K;
    ex.reference_Lf = p * s.lipschitz_box / 3.0;
    ex.reference_Lg = p / 3.0;
    return ex;
}

ExampleSystem make_example2(double alpha, std::size_t n_modes, double epsilon, double b,
                            double gamma_J) {
    ExampleSystem ex;
    ex.name = "example2";
    SystemSpec& s = ex.spec;
    s.op = checked_operator(alpha, n_modes);
    s.epsilon = epsilon;
    s.slow_dim = 1;
    s.J = {-1.0};
    s.gamma_J = gamma_J;
    const SpatialField profile_field = s.op.constant_profile();
    const std::vector<double> profile(profile_field.coefficients().begin(),
                                      profile_field.coefficients().end());
    const std::vector<double> integrals(s.op.mode_integrals().begin(), s.op.mode_integrals().end());
    const double root5 = std::sqrt(5.0);
    s.f = [profile, root5](std::span<const double>, std::span<const double> y, std::span<double> out) {
        const double v = 0.01 * (std::sqrt(y[0] * y[0] + 5.0) - root5);
        for (std::size_t k = 0; k < out.size(); ++k) out[k] = v * profile[k];
    };
    s.g = [integrals, b](std::span<const double> x, std::span<const double>, std::span<double> out) {
        out[0] = 0.01 * b * std::sin(dot(integrals, x));
    };
    // Scalar Lipschitz constants 0.01 and 0.01 b, times ||P 1|| from the spatial profile
    // and from the mode integrals.
    const double p = euclidean_norm(profile);
    s.K = 0.01 * p * std::max(1.0, b);
    ex.reference_K = 0.01 * std::max(1.0, b);
    ex.reference_Lf = 0.01;
    ex.reference_Lg = 0.01 * b;
    return ex;
}

ExampleSystem make_linear_system(double alpha, std::size_t n_modes, double epsilon, double c,
                                 double J, double gamma_J) {
    ExampleSystem ex;
    ex.name = "custom";
    SystemSpec& s = ex.spec;
    s.op = checked_operator(alpha, n_modes);
    s.epsilon = epsilon;
    s.slow_dim = 1;
    s.J = {J};
    s.gamma_J = gamma_J;
    s.f = [c](std::span<const double>, std::span<const double> y, std::span<double> out) {
        std::fill(out.begin(), out.end(), 0.0);
        out[0] = c * y[0];
    };
    s.g = [](std::span<const double>, std::span<const double>, std::span<double> out) {
        std::fill(out.begin(), out.end(), 0.0);
    };
    s.K = std::abs(c);
    ex.reference_K = s.K;
    ex.reference_Lf = s.K;
    ex.reference_Lg = 0.0;
    return ex;
}

ExampleSystem build_system(const ExperimentConfig& cfg, double epsilon) {
    cfg.validate();
    const auto n = static_cast<std::size_t>(cfg.n_modes);
    ExampleSystem ex;
    switch (cfg.example) {
        case ExampleId::example1: ex = make_example1(cfg.alpha, n, epsilon, cfg.gamma_J); break;
        case ExampleId::example2: ex = make_example2(cfg.alpha, n, epsilon, cfg.b, cfg.gamma_J); break;
        case ExampleId::custom:
            ex = make_linear_system(cfg.alpha, n, epsilon, cfg.custom_c, cfg.custom_J, cfg.gamma_J);
            break;
    }
    ex.spec.sigma1 = cfg.sigma1;
    ex.spec.sigma2 = cfg.sigma2;
    ex.spec.alpha1 = cfg.alpha_fast();
    ex.spec.alpha2 = cfg.alpha_slow();
    try {
        validate_system(ex.spec);
    } catch (const InvalidArgument& e) {
        throw ConfigError("example", e.what());
    }
    return ex;
}

ExampleSystem build_system(const ExperimentConfig& cfg) { return build_system(cfg, cfg.epsilon); }

ManifoldConfig manifold_config(const ExperimentConfig& cfg, const SystemSpec& spec) {
    ManifoldConfig mc = ManifoldConfig::defaults(spec, cfg.dt);
    mc.max_iter = 500;
    if (cfg.horizon > 0.0) mc.horizon = std::ceil(cfg.horizon / cfg.dt - 1e-9) * cfg.dt;
    try {
        mc.validate(spec);
    } catch (const InvalidArgument& e) {
        throw ConfigError("horizon", e.what());
    }
    return mc;
}

Omega omega_for(const SystemSpec& spec, const ManifoldConfig& mc, double t_future,
                std::uint64_t seed) {
    const double dt = mc.dt;
    if (spec.noiseless()) return quiet_omega(dt);
    double back = mc.horizon + 2.0 * dt;
    if (spec.sigma1 > 0.0) {
        back += StationarySpec::fast(spec.op.lambda1(), spec.sigma1, spec.epsilon, spec.alpha1).t_trunc;
    }
    if (spec.sigma2 > 0.0) {
        double longest = 0.0;
        for (double j : spec.J) {
            longest = std::max(longest, StationarySpec::slow(j, spec.sigma2, spec.alpha2).t_trunc);
        }
        back += longest;
    }
    const double lo = -std::ceil(back / dt) * dt;
    const double hi = (std::ceil(std::max(t_future, 0.0) / dt) + 2.0) * dt;
    return sample_omega(spec.alpha1, spec.alpha2, lo, hi, dt, seed);
}

namespace {

class ArtifactWriter {
public:
    ArtifactWriter(const ExperimentConfig& cfg, std::string command)
        : cfg_(cfg), hash_(manifest_hash(cfg)), command_(std::move(command)), dir_(cfg.output_dir) {
        std::error_code ec;
        std::filesystem::create_directories(dir_, ec);
        if (ec) throw Error("cannot create output directory '" + cfg.output_dir + "': " + ec.message());
    }

    const std::string& hash() const { return hash_; }

    void csv(const std::string& name, const std::vector<std::string>& header,
             const std::vector<std::vector<double>>& rows) {
        std::ofstream out = open(name);
        out << "# manifest_hash=" << hash_ << '\n';
        for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
        out << '\n';
        for (const auto& row : rows) {
            for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_number(row[i]);
            out << '\n';
        }
        finish(out, name);
    }

    void json_file(const std::string& name, json j) {
        j["manifest_hash"] = hash_;
        std::ofstream out = open(name);
        out << j.dump(2) << '\n';
        finish(out, name);
    }

    RunResult manifest(const ExampleSystem& ex, json extra = json::object()) {
        json m;
        m["manifest_hash"] = hash_;
        m["version"] = LEVYSLOW_VERSION;
        m["command"] = command_;
        m["config"] = json::parse(canonical_json(cfg_));
        m["artifacts"] = artifacts_;
        m["system"] = describe(ex);
        for (auto it = extra.begin(); it != extra.end(); ++it) m[it.key()] = it.value();
        std::ofstream out = open("manifest.json");
        out << m.dump(2) << '\n';
        finish(out, "manifest.json");
        RunResult r;
        r.artifacts = artifacts_;
        r.manifest = std::move(m);
        return r;
    }

private:
    std::ofstream open(const std::string& name) {
        std::ofstream out(dir_ / name, std::ios::binary);
        if (!out) throw Error("cannot write '" + (dir_ / name).string() + "'");
        return out;
    }

    void finish(std::ofstream& out, const std::string& name) {
        out.flush();
        if (!out) throw Error("write failed for '" + name + "'");
        artifacts_.push_back(name);
    }

    static json describe(const ExampleSystem& ex) {
        const SystemSpec& s = ex.spec;
        const ConditionReport r = check_conditions(s);
        json j;
        j["name"] = ex.name;
        j["epsilon"] = s.epsilon;
        j["n_modes"] = s.n_modes();
        j["J"] = s.J;
        j["K_certified"] = s.K;
        j["reference_K"] = ex.reference_K;
        j["reference_Lf"] = ex.reference_Lf;
        j["reference_Lg"] = ex.reference_Lg;
        j["conditions"] = {{"lambda1", r.lambda1},
                           {"gamma_J", r.gamma_J},
                           {"s3_threshold", r.s3_threshold},
                           {"s3_pass", r.s3_pass},
                           {"gamma", r.gamma},
                           {"k_below_gamma_lambda1", r.k_below_gamma_lambda1},
                           {"gap_exceeds_k", r.gap_exceeds_k},
                           {"s1_pass", r.s1_pass},
                           {"warnings", r.warnings}};
        j["contraction_factor"] = contraction_factor(s);
        j["contraction_factor_reference"] =
            contraction_factor(s.op.lambda1(), s.gamma_J, ex.reference_K, s.epsilon);
        try {
            j["lipschitz_bound"] = lipschitz_bound(s);
        } catch (const InvalidArgument&) {
            j["lipschitz_bound"] = nullptr;
        }
        try {
            j["lipschitz_bound_reference"] =
                lipschitz_bound(s.op.lambda1(), s.gamma_J, ex.reference_K, s.epsilon);
        } catch (const InvalidArgument&) {
            j["lipschitz_bound_reference"] = nullptr;
        }
        return j;
    }

    const ExperimentConfig& cfg_;
    std::string hash_;
    std::string command_;
    std::filesystem::path dir_;
    std::vector<std::string> artifacts_;
};

std::vector<std::string> graph_header(std::size_t n, std::size_t m) {
    std::vector<std::string> h;
    for (std::size_t i = 1; i <= m; ++i) h.push_back("y0_" + std::to_string(i));
    for (std::size_t k = 1; k <= n; ++k) h.push_back("h_coeff_" + std::to_string(k));
    h.push_back("iterations");
    h.push_back("final_residual");
    return h;
}

void write_graphs(ArtifactWriter& w, const ExperimentConfig& cfg, const ExampleSystem& ex,
                  const ManifoldConfig& mc) {
    std::vector<SlowVector> y0s;
    for (double y : cfg.y0_grid) y0s.push_back({y});
    for (std::uint64_t seed : cfg.seeds) {
        const Omega omega = omega_for(ex.spec, mc, 0.0, seed);
        const auto graph = solve_manifold_graph(ex.spec, omega, y0s, mc);
        std::vector<std::vector<double>> rows;
        for (const auto& p : graph) {
            std::vector<double> row(p.y0.begin(), p.y0.end());
            for (double c : p.h_value.coefficients()) row.push_back(c);
            row.push_back(static_cast<double>(p.iterations));
            row.push_back(p.residuals.back());
            rows.push_back(std::move(row));
        }
        w.csv("manifold_graph_seed" + std::to_string(seed) + ".csv",
              graph_header(ex.spec.n_modes(), ex.spec.slow_dim), rows);
    }
}

void write_tracking(ArtifactWriter& w, const ExperimentConfig& cfg, const ExampleSystem& ex) {
    TrackingConfig tc = TrackingConfig::defaults(ex.spec, cfg.dt);
    tc.manifold = manifold_config(cfg, ex.spec);
    const std::uint64_t seed = cfg.seeds.front();
    const Omega omega = omega_for(ex.spec, tc.manifold, tc.horizon, seed);
    StateZ z0{SpatialField::mode(ex.spec.n_modes(), 0, cfg.tracking_offset), {cfg.tracking_y0}};
    const TrackingReport rep = solve_tracking_point(ex.spec, omega, z0, tc);
    json j;
    j["seed"] = seed;
    j["decay_rate"] = rep.decay_rate;
    j["predicted_rate"] = rep.predicted_rate;
    j["prefactor"] = rep.prefactor;
    j["fitted"] = rep.fitted;
    j["window"] = {rep.window_start, rep.window_end};
    j["iterations"] = rep.iterations;
    j["z_checked"] = {{"x", std::vector<double>(rep.z_checked.x.coefficients().begin(),
                                                rep.z_checked.x.coefficients().end())},
                      {"y", rep.z_checked.y}};
    w.json_file("tracking.json", j);
}

void write_approx(ArtifactWriter& w, const ExperimentConfig& cfg) {
    const double eps_max = *std::max_element(cfg.approx_epsilons.begin(), cfg.approx_epsilons.end());
    const ExampleSystem widest = build_system(cfg, eps_max);
    const Omega omega = omega_for(widest.spec, manifold_config(cfg, widest.spec), 0.0, cfg.seeds.front());
    const SlowVector y0{cfg.tracking_y0};
    std::vector<std::vector<double>> rows;
    for (double eps : cfg.approx_epsilons) {
        const ExampleSystem ex = build_system(cfg, eps);
        const ManifoldConfig mc = manifold_config(cfg, ex.spec);
        const ManifoldPoint p = solve_manifold_point(ex.spec, omega, y0, mc);
        const ApproxTerms t = approx_manifold_terms(ex.spec, omega, y0, mc);
        rows.push_back({eps, p.h_value.norm(), t.h0.norm(), t.h1.norm(),
                        (p.h_value - t.order(0)).norm(), (p.h_value - t.order(1)).norm()});
    }
    w.csv("approximation.csv",
          {"epsilon", "h_eps_norm", "h0_norm", "h1_norm", "error_order0", "error_order1"}, rows);
}

}  // namespace

RunResult run_example(const ExperimentConfig& cfg) {
    const ExampleSystem ex = build_system(cfg);
    const ManifoldConfig mc = manifold_config(cfg, ex.spec);
    ArtifactWriter w(cfg, "example" + to_string(cfg.example));
    write_graphs(w, cfg, ex, mc);
    write_tracking(w, cfg, ex);
    write_approx(w, cfg);
    return w.manifest(ex);
}

RunResult run_manifold(const ExperimentConfig& cfg) {
    const ExampleSystem ex = build_system(cfg);
    ArtifactWriter w(cfg, "manifold");
    write_graphs(w, cfg, ex, manifold_config(cfg, ex.spec));
    return w.manifest(ex);
}

RunResult run_tracking(const ExperimentConfig& cfg) {
    const ExampleSystem ex = build_system(cfg);
    ArtifactWriter w(cfg, "tracking");
    write_tracking(w, cfg, ex);
    return w.manifest(ex);
}

RunResult run_approx_order(const ExperimentConfig& cfg) {
    const ExampleSystem ex = build_system(cfg);
    ArtifactWriter w(cfg, "approx-order");
    write_approx(w, cfg);
    return w.manifest(ex);
}

RunResult run_simulate(const ExperimentConfig& cfg) {
    const ExampleSystem ex = build_system(cfg);
    const SystemSpec& s = ex.spec;
    const ManifoldConfig mc = manifold_config(cfg, s);
    const double t1 = 1.0;
    const Omega omega = omega_for(s, mc, t1, cfg.seeds.front());
    ArtifactWriter w(cfg, "simulate");
    const StateZ z0{SpatialField(s.n_modes()), {cfg.tracking_y0}};
    const Trajectory tr = integrate_stochastic_system(s, omega, z0, 0.0, t1, cfg.dt);
    std::vector<std::string> header{"t"};
    for (std::size_t k = 1; k <= s.n_modes(); ++k) header.push_back("x_coeff_" + std::to_string(k));
    for (std::size_t i = 1; i <= s.slow_dim; ++i) header.push_back("y_" + std::to_string(i));
    std::vector<std::vector<double>> rows;
    for (std::size_t j = 0; j < tr.size(); ++j) {
        std::vector<double> row{static_cast<double>(j) * cfg.dt};
        for (double v : tr.x(j)) row.push_back(v);
        for (double v : tr.y(j)) row.push_back(v);
        rows.push_back(std::move(row));
    }
    w.csv("trajectory.csv", header, rows);

    if (!s.noiseless()) {
        std::vector<std::vector<double>> prow;
        const std::size_t steps = step_count(0.0, t1, cfg.dt, "simulate");
        for (std::size_t j = 0; j <= steps; ++j) {
            const auto n = static_cast<std::int64_t>(j);
            prow.push_back({static_cast<double>(j) * cfg.dt, omega.fast.value_at_index(n),
                            omega.fast.increment_at_index(n)});
        }
        w.csv("noise_fast.csv", {"t", "cumulative", "increment"}, prow);
    }
    return w.manifest(ex);
}

RunResult run_diagnostics_command(const ExperimentConfig& cfg) {
    const ExampleSystem ex = build_system(cfg);
    ArtifactWriter w(cfg, "diagnostics");
    w.json_file("diagnostics.json", run_diagnostics(cfg));
    return w.manifest(ex);
}

}  // namespace levyslow
