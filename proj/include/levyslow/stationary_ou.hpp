#pragma once

#include <cstddef>
#include <vector>

#include "levyslow/kernels.hpp"
#include "levyslow/levy_noise.hpp"

namespace levyslow {

/// Relative size of the exponential kernel at the truncation horizon.
inline constexpr double kTruncationTolerance = 1e-8;

/// Parameters of a stationary exponential convolution against a Levy path.
///
/// Fast processes use kernel exp(-rate (t - s) / epsilon) and prefactor
/// sigma / epsilon^{1/alpha}; slow processes use exp(-J (t - s)) and prefactor sigma.
struct StationarySpec {
    double rate = 1.0;
    double sigma = 0.0;
    double epsilon = 1.0;
    double alpha = 1.5;
    double t_trunc = 0.0;

    /// t_trunc = (epsilon / rate) ln(1e8).
    static StationarySpec fast(double rate, double sigma, double epsilon, double alpha);
    /// Requires J > 0 so the backward integral converges; t_trunc = ln(1e8) / J.
    static StationarySpec slow(double j, double sigma, double alpha);

    /// Kernel decay rate per unit time.
    double decay() const noexcept { return rate / epsilon; }
    /// Throws InvalidArgument if the parameters or the truncation horizon are unusable.
    void validate() const;
};

/// sigma / eps^{1/alpha} * int_{t - T}^{t} exp(-rate (t - s) / eps) dL_s (left-point sum).
double eta_eps(const NoisePath& path, double t, const StationarySpec& spec);
/// eta_eps with epsilon = 1.
double delta_stat(const NoisePath& path, double t, const StationarySpec& spec);
/// sigma * int_{t - T}^{t} exp(-J (t - s)) dL_s.
double xi_stat(const NoisePath& path, double t, const StationarySpec& spec);

/// The same convolution evaluated at t0, t0 + step, ..., (count values). `step` must be
/// a multiple of the path's dt.
std::vector<double> stationary_on_grid(const NoisePath& path, double t0, double step,
                                       std::size_t count, const StationarySpec& spec,
                                       kernels::Backend backend = kernels::Backend::openmp);

}  // namespace levyslow
