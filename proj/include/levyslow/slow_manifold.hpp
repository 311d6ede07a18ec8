#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "levyslow/fastslow_system.hpp"
#include "levyslow/kernels.hpp"

namespace levyslow {

/// Discretisation of the backward window [-T, 0] for the Lyapunov-Perron iteration.
struct ManifoldConfig {
    double horizon = 1.0;
    double dt = 1e-4;
    std::size_t max_iter = 200;
    double tol = 1e-12;  // absolute, in the weighted sup-norm

    /// horizon = 1.5 (eps / gamma) ln(1e8), rounded up to a multiple of dt.
    static ManifoldConfig defaults(const SystemSpec& spec, double dt);
    /// Requires the weight e^{-gamma T / eps} at the far end to be <= 1e-8.
    void validate(const SystemSpec& spec) const;
};

/// Weight exponent gamma / eps of the backward space (beta = -gamma / eps).
double weight_rate(const SystemSpec& spec);

/// K / (lambda1 + eps beta) + K / (-beta + gamma_J) with beta = -gamma / eps.
double contraction_factor(double lambda1, double gamma_J, double K, double epsilon);
double contraction_factor(const SystemSpec& spec);

/// K / ((lambda1 - gamma) [1 - K (1 / (lambda1 - gamma) + eps / (gamma + eps gamma_J))]).
double lipschitz_bound(double lambda1, double gamma_J, double K, double epsilon);
double lipschitz_bound(const SystemSpec& spec);

/// Contraction constant of the forward tracking operator.
double tracking_rho(double lambda1, double gamma_J, double K, double epsilon);

struct ManifoldPoint {
    SlowVector y0;
    SpatialField h_value;
    SpatialField eq18_value;  // direct quadrature of the graph integral on the final iterate
    std::size_t iterations = 0;
    std::vector<double> residuals;
    std::vector<double> ratios;  // residual ratios above the rounding floor
    bool certified = true;       // contraction factor < 1
    Trajectory trajectory;       // converged iterate on [-T, 0]
};

/// Fixed-point machinery on [-T, 0] for one noise realisation. The noise samples are
/// computed once; solve() is const and may be called concurrently.
class LyapunovPerron {
public:
    LyapunovPerron(const SystemSpec& spec, const Omega& omega, const ManifoldConfig& config);

    const SystemSpec& spec() const noexcept { return spec_; }
    const ManifoldConfig& config() const noexcept { return config_; }
    const NoiseSamples& noise() const noexcept { return noise_; }
    std::size_t points() const noexcept { return points_; }
    double time(std::size_t j) const noexcept;

    Trajectory seed(std::span<const double> y0) const;
    Trajectory step(const Trajectory& in, std::span<const double> y0) const;

    /// X_j = (1/eps) * trapezoid of e^{A (t_j - s)/eps} F(s) over [-T, t_j]; F and X are
    /// points x n_modes, row-major.
    void convolve_fast(std::span<const double> F, std::span<double> X) const;
    /// Y_j = e^{J t_j} y0 - trapezoid of e^{J (t_j - s)} G(s) over [t_j, 0].
    void convolve_slow(std::span<const double> G, std::span<const double> y0,
                       std::span<double> Y) const;

    double weighted_distance(const Trajectory& a, const Trajectory& b) const;
    double weighted_norm(const Trajectory& a) const;

    SpatialField graph_integral(const Trajectory& tr) const;
    ManifoldPoint solve(std::span<const double> y0) const;

private:
    const SystemSpec& spec_;
    ManifoldConfig config_;
    NoiseSamples noise_;
    std::size_t points_ = 0;
    std::vector<double> ax_;  // e^{-lambda_k dt / eps}
    std::vector<double> ay_;  // e^{-J_i dt}
};

Trajectory lp_step(const Trajectory& traj, const Omega& omega, const SystemSpec& spec,
                   std::span<const double> y0, const ManifoldConfig& config);

ManifoldPoint solve_manifold_point(const SystemSpec& spec, const Omega& omega,
                                   std::span<const double> y0, const ManifoldConfig& config);

/// Independent solves over a list of slow values.
std::vector<ManifoldPoint> solve_manifold_graph(const SystemSpec& spec, const Omega& omega,
                                                const std::vector<SlowVector>& y0s,
                                                const ManifoldConfig& config,
                                                kernels::Backend backend = kernels::Backend::openmp);

/// h_value + sigma1 eta e1, with eta the unit-intensity fast stationary value.
SpatialField back_transform_manifold(const ManifoldPoint& point, double eta,
                                     const SystemSpec& spec);

}  // namespace levyslow
