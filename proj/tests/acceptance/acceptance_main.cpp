// Acceptance checks. Each criterion prints one PASS/FAIL line with its measured value
// and wall time; the process exits nonzero if any line fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "levyslow/approximation.hpp"
#include "levyslow/experiments.hpp"
#include "levyslow/ks_test.hpp"
#include "levyslow/levy_noise.hpp"
#include "levyslow/stationary_ou.hpp"
#include "levyslow/tracking.hpp"

using namespace levyslow;
namespace fs = std::filesystem;

namespace {

struct Verdict {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

int failures = 0;

void criterion(int id, const char* title, double limit_s, const std::function<Verdict()>& body) {
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
        v = body();
    } catch (const std::exception& e) {
        v = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = secs < limit_s;
    const bool ok = v.pass && in_time;
    if (!ok) ++failures;
    std::printf("criterion %2d %-34s %s  %s; %.1f s (limit %.0f s)%s\n", id, title, ok ? "PASS" : "FAIL",
                v.detail.c_str(), secs, limit_s, in_time ? "" : " TOO SLOW");
    std::fflush(stdout);
}

ExampleSystem noisy_example2(double eps = 0.01) {
    ExampleSystem ex = make_example2(1.5, 8, eps, 1.0, 1.0);
    ex.spec.sigma1 = 0.1;
    return ex;
}

double reference_rho(const ExampleSystem& ex) {
    return contraction_factor(ex.spec.op.lambda1(), ex.spec.gamma_J, ex.reference_K, ex.spec.epsilon);
}

double log_log_slope(const std::vector<double>& x, const std::vector<double>& y) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double lx = std::log(x[i]), ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

double approx_slope(const std::function<ExampleSystem(double)>& make, double y0) {
    const std::vector<double> eps{0.1, 0.05, 0.025, 0.0125};
    std::vector<double> err;
    for (double e : eps) {
        const ExampleSystem ex = make(e);
        const double dt = e * 1e-3;
        const ManifoldConfig mc = ManifoldConfig::defaults(ex.spec, dt);
        const std::vector<double> y{y0};
        const ManifoldPoint p = solve_manifold_point(ex.spec, quiet_omega(dt), y, mc);
        const ApproxTerms t = approx_manifold_terms(ex.spec, quiet_omega(dt), y, mc);
        err.push_back((p.h_value - t.order(1)).norm());
    }
    return log_log_slope(eps, err);
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

}  // namespace

int main() {
    criterion(1, "stable sampler law", 10, [] {
        double worst = 0.0;
        for (double a : {1.2, 1.5, 1.8}) {
            RngStream rng(2024, static_cast<std::uint64_t>(a * 10));
            std::vector<double> xs(100000);
            for (double& x : xs) x = sample_standard_stable(a, rng);
            for (double theta : {0.5, 1.0, 2.0}) {
                double c = 0.0;
                for (double x : xs) c += std::cos(theta * x);
                worst = std::max(worst, std::abs(c / xs.size() - std::exp(-std::pow(theta, a))));
            }
        }
        return Verdict{worst <= 0.01, fmt("max |ecf - exp(-|theta|^alpha)| = %.4f <= 0.01", worst)};
    });

    criterion(2, "self-similarity KS", 10, [] {
        double worst = 1.0;
        for (double a : {1.2, 1.5, 1.8}) {
            for (double c : {0.25, 4.0}) {
                RngStream rng(77, static_cast<std::uint64_t>(a * 100 + c * 4));
                worst = std::min(worst, self_similarity_statistic(StableParams(a, 1.0), c, 10000, rng).p_value);
            }
        }
        return Verdict{worst > 0.001, fmt("min KS p = %.4f > 0.001", worst)};
    });

    criterion(3, "eigenvalue oracle", 60, [] {
        double worst = 0.0;
        for (double a : {1.2, 1.5, 1.8}) {
            const QuadratureSpectrum q = quadrature_spectrum(a, 512, 5);
            for (int l = 1; l <= 5; ++l) {
                const double ref = q.eigenvalues[l - 1];
                worst = std::max(worst, std::abs(eigenvalue_asymptotic(l, a) - ref) / ref);
            }
        }
        double exact_gap = 0.0;
        for (int l = 1; l <= 5; ++l) {
            const double e = std::pow(l * std::numbers::pi / 2.0, 2);
            exact_gap = std::max(exact_gap, std::abs(eigenvalue_asymptotic(l, 2.0) - e) / e);
        }
        return Verdict{worst <= 0.05 && exact_gap <= 1e-14,
                       fmt("max rel gap %.4f <= 0.05; alpha = 2 rel gap %.1e", worst, exact_gap)};
    });

    criterion(4, "stationary law rescaling KS", 60, [] {
        const double lam = build_operator(1.5, 1).lambda1();
        const double t = 0.5;
        double worst = 1.0;
        for (double eps : {0.1, 0.01}) {
            const auto fast = StationarySpec::fast(lam, 1.0, eps, 1.5);
            const auto unit = StationarySpec::fast(lam, 1.0, 1.0, 1.5);
            const double dt = eps * 2e-3;
            const double dt_unit = dt / eps;
            const double ts = t / eps;
            RngStream rng(31, static_cast<std::uint64_t>(1.0 / eps));
            std::vector<double> a(1000), b(1000);
            for (std::size_t i = 0; i < a.size(); ++i) {
                const double lo = t - std::ceil(fast.t_trunc / dt + 2) * dt;
                a[i] = eta_eps(sample_path(StableParams(1.5, 1.0), lo, t, dt, rng), t, fast);
                const double lo2 = ts - std::ceil(unit.t_trunc / dt_unit + 2) * dt_unit;
                b[i] = delta_stat(sample_path(StableParams(1.5, 1.0), lo2, ts, dt_unit, rng), ts, unit);
            }
            worst = std::min(worst, ks_two_sample(a, b).p_value);
        }
        return Verdict{worst > 0.001, fmt("min KS p = %.4f > 0.001", worst)};
    });

    criterion(5, "linear analytic oracle", 10, [] {
        struct Case { double c, J, eps, alpha; };
        double worst = 0.0;
        for (const Case k : {Case{0.1, 1.0, 0.05, 1.5}, Case{0.2, 2.0, 0.02, 1.2}, Case{0.05, 1.0, 0.1, 1.8}}) {
            const ExampleSystem ex = make_linear_system(k.alpha, 4, k.eps, k.c, k.J, 1.0);
            const ManifoldConfig mc = ManifoldConfig::defaults(ex.spec, 1e-4);
            const double y0 = 1.3;
            const ManifoldPoint p = solve_manifold_point(ex.spec, quiet_omega(1e-4), std::vector<double>{y0}, mc);
            const double exact = k.c * y0 / (ex.spec.op.lambda1() + k.eps * k.J);
            worst = std::max(worst, std::abs(p.h_value[0] - exact) / exact);
        }
        return Verdict{worst <= 1e-4, fmt("max relative error %.2e <= 1e-4", worst)};
    });

    criterion(6, "contraction certification", 30, [] {
        const ExampleSystem ex = noisy_example2();
        const double rho = reference_rho(ex);
        const ManifoldConfig mc = ManifoldConfig::defaults(ex.spec, 1e-4);
        double worst = 0.0;
        for (std::uint64_t seed : {1, 2, 3}) {
            const Omega omega = omega_for(ex.spec, mc, 0.0, seed);
            for (const auto& p : solve_manifold_graph(ex.spec, omega, {{-2.0}, {-0.5}, {1.0}, {2.0}}, mc)) {
                for (double r : p.ratios) worst = std::max(worst, r);
            }
        }
        const bool closed_form = std::abs(rho - 0.00768) < 5e-6;
        return Verdict{worst <= rho + 0.05 && closed_form,
                       fmt("max ratio %.4f <= rho + 0.05, rho = %.6f", worst, rho)};
    });

    criterion(7, "Lipschitz bound", 60, [] {
        const ExampleSystem ex = noisy_example2();
        const double bound = lipschitz_bound(ex.spec.op.lambda1(), 1.0, ex.reference_K, 0.01);
        const ManifoldConfig mc = ManifoldConfig::defaults(ex.spec, 1e-4);
        std::vector<SlowVector> ys;
        for (int i = -4; i <= 4; ++i) ys.push_back({0.5 * i});
        double worst = 0.0;
        for (std::uint64_t seed : {4, 5}) {
            const auto g = solve_manifold_graph(ex.spec, omega_for(ex.spec, mc, 0.0, seed), ys, mc);
            for (std::size_t i = 0; i < g.size(); ++i) {
                for (std::size_t j = i + 1; j < g.size(); ++j) {
                    worst = std::max(worst, (g[i].h_value - g[j].h_value).norm() / std::abs(ys[i][0] - ys[j][0]));
                }
            }
        }
        return Verdict{worst <= 1.1 * bound && std::abs(bound - 0.00733) < 5e-6,
                       fmt("max quotient %.5f <= 1.1 x %.6f", worst, bound)};
    });

    criterion(8, "invariance", 120, [] {
        const ExampleSystem ex = noisy_example2();
        const double dt = 1e-4;
        const ManifoldConfig mc = ManifoldConfig::defaults(ex.spec, dt);
        double worst = 0.0;
        for (std::uint64_t seed : {6, 7}) {
            const Omega omega = omega_for(ex.spec, mc, 0.6, seed);
            const std::vector<double> y0{1.0};
            const ManifoldPoint p = solve_manifold_point(ex.spec, omega, y0, mc);
            for (double t : {0.1, 0.5}) {
                const Trajectory tr = integrate_random_system(ex.spec, omega, StateZ{p.h_value, y0}, 0.0, t, dt);
                const StateZ zt = tr.state(tr.size() - 1);
                const ManifoldPoint q = solve_manifold_point(ex.spec, shift_omega(omega, t), zt.y, mc);
                worst = std::max(worst, (zt.x - q.h_value).norm() / q.h_value.norm());
            }
        }
        return Verdict{worst <= 0.05, fmt("max relative distance to the shifted graph %.2e <= 0.05", worst)};
    });

    criterion(9, "exponential tracking", 120, [] {
        const ExampleSystem ex = noisy_example2();
        const TrackingConfig tc = TrackingConfig::defaults(ex.spec, 1e-4);
        const Omega omega = omega_for(ex.spec, tc.manifold, tc.horizon, 9);
        const StateZ z0{SpatialField::mode(8, 0, 0.05), {1.0}};
        const TrackingReport r = solve_tracking_point(ex.spec, omega, z0, tc);
        const double need = 0.8 * r.predicted_rate;
        return Verdict{r.fitted && r.decay_rate >= need,
                       fmt("fitted rate %.2f >= %.2f (gamma / eps = %.2f)", r.decay_rate, need, r.predicted_rate)};
    });

    criterion(10, "asymptotic order", 300, [] {
        const double lin = approx_slope([](double e) { return make_linear_system(1.5, 4, e, 0.1, 1.0, 1.0); }, 1.0);
        const double ex2 = approx_slope([](double e) { return make_example2(1.5, 8, e, 1.0, 1.0); }, 2.0);
        const bool ok = lin >= 1.6 && lin <= 2.4 && ex2 >= 1.6 && ex2 <= 2.4;
        return Verdict{ok, fmt("slopes %.3f (linear), %.3f (second example) in [1.6, 2.4]", lin, ex2)};
    });

    criterion(11, "cocycle property", 60, [] {
        const ExampleSystem ex = noisy_example2();
        const double dt = 1e-4;
        const ManifoldConfig mc = ManifoldConfig::defaults(ex.spec, dt);
        const Omega omega = omega_for(ex.spec, mc, 0.6, 11);
        const StateZ z0{SpatialField::mode(8, 0, 0.1), {1.0}};
        double worst = 0.0;
        for (auto [s, t] : {std::pair{0.1, 0.2}, std::pair{0.25, 0.25}, std::pair{0.05, 0.4}}) {
            const Trajectory whole = integrate_random_system(ex.spec, omega, z0, 0.0, s + t, dt);
            const Trajectory first = integrate_random_system(ex.spec, omega, z0, 0.0, s, dt);
            const Trajectory second = integrate_random_system(ex.spec, shift_omega(omega, s),
                                                              first.state(first.size() - 1), 0.0, t, dt);
            const StateZ a = whole.state(whole.size() - 1);
            const StateZ b = second.state(second.size() - 1);
            worst = std::max(worst, (a.x - b.x).norm() + std::abs(a.y[0] - b.y[0]));
        }
        return Verdict{worst <= 10 * dt, fmt("max state-norm gap %.2e <= %.0e", worst, 10 * dt)};
    });

    criterion(12, "solution difference bound", 60, [] {
        const ExampleSystem ex = noisy_example2();
        const double rho = reference_rho(ex);
        const ManifoldConfig mc = ManifoldConfig::defaults(ex.spec, 1e-4);
        const Omega omega = omega_for(ex.spec, mc, 0.0, 12);
        const LyapunovPerron lp(ex.spec, omega, mc);
        const std::vector<double> ys{-2.0, -0.7, 0.4, 1.5};
        std::vector<ManifoldPoint> pts;
        for (double y : ys) pts.push_back(lp.solve(std::vector<double>{y}));
        double worst = 0.0;
        for (std::size_t i = 0; i < pts.size(); ++i) {
            for (std::size_t j = i + 1; j < pts.size(); ++j) {
                const double d = lp.weighted_distance(pts[i].trajectory, pts[j].trajectory);
                worst = std::max(worst, d * (1.0 - rho) / std::abs(ys[i] - ys[j]));
            }
        }
        return Verdict{worst <= 1.05, fmt("max distance / (|dy0| / (1 - rho)) = %.4f <= 1.05", worst)};
    });

    criterion(13, "CLI determinism", 60, [] {
        const fs::path root = fs::temp_directory_path() / "levyslow_acceptance_cli";
        fs::remove_all(root);
        fs::create_directories(root);
        {
            std::ofstream cfg(root / "config.json");
            cfg << R"({"epsilon": 0.05, "dt": 0.0005, "n_modes": 4, "seeds": [1, 2],)"
                << R"( "y0_grid": [-1.0, 0.0, 1.0], "approx_epsilons": [0.1, 0.05]})";
        }
        std::vector<fs::path> dirs{root / "run_a", root / "run_b"};
        for (const auto& d : dirs) {
            const std::string cmd = std::string("\"") + LEVYSLOW_CLI_PATH + "\" example2 --config \"" +
                                    (root / "config.json").string() + "\" --out \"" + d.string() +
                                    "\" > \"" + d.string() + ".log\" 2>&1";
            if (std::system(cmd.c_str()) != 0) return Verdict{false, "CLI run failed: " + cmd};
        }
        std::size_t files = 0;
        for (const auto& entry : fs::directory_iterator(dirs[0])) {
            const fs::path other = dirs[1] / entry.path().filename();
            if (!fs::exists(other) || slurp(entry.path()) != slurp(other)) {
                return Verdict{false, "mismatch in " + entry.path().filename().string()};
            }
            ++files;
        }
        std::size_t files_b = std::distance(fs::directory_iterator(dirs[1]), fs::directory_iterator{});
        return Verdict{files > 0 && files == files_b, fmt("%.0f artifacts byte-identical", double(files))};
    });

    std::printf("%s: %d failing criteria\n", failures ? "FAIL" : "PASS", failures);
    return failures ? 1 : 0;
}
