#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "levyslow/fractional_laplacian.hpp"
#include "levyslow/kernels.hpp"
#include "levyslow/levy_noise.hpp"

namespace levyslow {

using SlowVector = std::vector<double>;

/// Nonlinearities take mode coefficients of X and the slow vector Y and write into `out`
/// (n_modes entries for the fast map, slow_dim entries for the slow map).
using FastMap =
    std::function<void(std::span<const double> x, std::span<const double> y, std::span<double> out)>;
using SlowMap = FastMap;

double euclidean_norm(std::span<const double> v);

/// Point of the product space; norm is ||x|| + ||y||.
struct StateZ {
    SpatialField x;
    SlowVector y;

    double norm() const { return x.norm() + euclidean_norm(y); }
};

/// Pair of driving paths: `fast` enters through eta, `slow` through xi.
struct Omega {
    NoisePath fast;
    NoisePath slow;
};

Omega shift_omega(const Omega& omega, double l);
/// Independent paths on [t_start, t_end] from streams (seed, 1) and (seed, 2).
Omega sample_omega(double alpha1, double alpha2, double t_start, double t_end, double dt,
                   std::uint64_t seed);
/// Empty paths; usable whenever both noise intensities are zero.
Omega quiet_omega(double dt);

struct SystemSpec {
    double epsilon = 0.01;
    SpectralOperator op{1.5, 8};
    std::size_t slow_dim = 1;
    std::vector<double> J{1.0};  // diagonal of the slow linear part
    double gamma_J = 1.0;
    FastMap f;
    SlowMap g;
    double K = 0.0;
    double sigma1 = 0.0;
    double sigma2 = 0.0;
    double alpha1 = 1.5;
    double alpha2 = 1.5;
    double lipschitz_box = 2.0;  // half-width of the sampling box for K checks

    std::size_t n_modes() const noexcept { return op.n_modes(); }
    bool noiseless() const noexcept { return sigma1 == 0.0 && sigma2 == 0.0; }
};

struct ConditionReport {
    double lambda1 = 0.0;
    double gamma_J = 0.0;
    double K = 0.0;
    double s3_threshold = 0.0;
    bool s3_pass = false;
    double gamma = 0.0;
    bool k_below_gamma_lambda1 = false;
    bool gap_exceeds_k = false;
    bool s1_pass = false;
    std::vector<std::string> warnings;

    bool all_pass() const noexcept {
        return s3_pass && k_below_gamma_lambda1 && gap_exceeds_k && s1_pass;
    }
};

/// gamma = gamma_J / (2 lambda1 + gamma_J).
double gap_gamma(double lambda1, double gamma_J);
ConditionReport check_conditions(const SystemSpec& spec);

struct LipschitzEstimate {
    double f_quotient = 0.0;  // max ||f(a) - f(b)|| / (||dx|| + ||dy||)
    double g_quotient = 0.0;
    std::size_t pairs = 0;
};

LipschitzEstimate estimate_lipschitz(const SystemSpec& spec, std::size_t pairs,
                                     std::uint64_t seed);

/// Checks ranges, f(0,0) = g(0,0) = 0, and the declared K against 1000 sampled pairs.
void validate_system(const SystemSpec& spec);

/// Evaluates f and g at the noise-shifted arguments (X + eta e1, Y + xi).
/// Holds scratch buffers, so one instance per thread.
class NonlinearityEvaluator {
public:
    explicit NonlinearityEvaluator(const SystemSpec& spec);

    void fast(std::span<const double> x, std::span<const double> y, double eta,
              std::span<const double> xi, std::span<double> out);
    void slow(std::span<const double> x, std::span<const double> y, double eta,
              std::span<const double> xi, std::span<double> out);

private:
    void shift(std::span<const double> x, std::span<const double> y, double eta,
               std::span<const double> xi);

    const SystemSpec& spec_;
    std::vector<double> xs_;
    std::vector<double> ys_;
};

/// X = x - sigma1 eta e1, Y = y - sigma2 xi. eta and xi are unit-intensity values.
StateZ random_transform(const SpatialField& x, std::span<const double> y, double eta,
                        std::span<const double> xi, const SystemSpec& spec);
StateZ inverse_transform(const StateZ& z, double eta, std::span<const double> xi,
                         const SystemSpec& spec);

/// States on a uniform grid, stored flat.
class Trajectory {
public:
    Trajectory() = default;
    Trajectory(double t_start, double dt, std::size_t points, std::size_t n_modes,
               std::size_t slow_dim);

    double t_start() const noexcept { return t_start_; }
    double dt() const noexcept { return dt_; }
    double t_end() const noexcept { return time(points_ - 1); }
    double time(std::size_t j) const noexcept { return t_start_ + static_cast<double>(j) * dt_; }
    std::size_t size() const noexcept { return points_; }
    std::size_t n_modes() const noexcept { return n_modes_; }
    std::size_t slow_dim() const noexcept { return slow_dim_; }

    std::span<double> x(std::size_t j) { return {xs_.data() + j * n_modes_, n_modes_}; }
    std::span<const double> x(std::size_t j) const { return {xs_.data() + j * n_modes_, n_modes_}; }
    std::span<double> y(std::size_t j) { return {ys_.data() + j * slow_dim_, slow_dim_}; }
    std::span<const double> y(std::size_t j) const { return {ys_.data() + j * slow_dim_, slow_dim_}; }

    StateZ state(std::size_t j) const;
    void set_state(std::size_t j, const StateZ& z);
    double state_norm(std::size_t j) const;

private:
    double t_start_ = 0.0;
    double dt_ = 0.0;
    std::size_t points_ = 0;
    std::size_t n_modes_ = 0;
    std::size_t slow_dim_ = 0;
    std::vector<double> xs_;
    std::vector<double> ys_;
};

/// sigma1 eta^eps(theta_t omega) and sigma2 xi(theta_t omega) at t0 + j dt.
/// xi is stored row-major, slow_dim values per node. Zero intensities skip path access.
struct NoiseSamples {
    std::vector<double> eta;
    std::vector<double> xi;
    std::size_t slow_dim = 1;

    std::span<const double> xi_at(std::size_t j) const { return {xi.data() + j * slow_dim, slow_dim}; }
};

NoiseSamples sample_noise(const SystemSpec& spec, const Omega& omega, double t0, double dt,
                          std::size_t count,
                          kernels::Backend backend = kernels::Backend::openmp);

/// Exponential Euler stepping factors: z_{n+1} = a z_n + c rhs_n, per mode and per slow entry.
struct ExpEulerCoefficients {
    ExpEulerCoefficients(const SystemSpec& spec, double dt);

    std::vector<double> ax, cx, ay, cy;
};

/// Exponential Euler for both components on [t0, t1].
Trajectory integrate_random_system(const SystemSpec& spec, const Omega& omega, const StateZ& z0,
                                   double t0, double t1, double dt);

/// Same scheme driven by precomputed samples (steps + 1 nodes from t0).
Trajectory integrate_random_system(const SystemSpec& spec, const NoiseSamples& noise,
                                   const StateZ& z0, double t0, double dt, std::size_t steps);

/// Original variables: transform z0, integrate the random system, add the noise back.
Trajectory integrate_stochastic_system(const SystemSpec& spec, const Omega& omega,
                                       const StateZ& z0, double t0, double t1, double dt);

/// Number of dt steps in [t0, t1]; throws if the length is not a multiple of dt.
std::size_t step_count(double t0, double t1, double dt, const char* what);

}  // namespace levyslow
