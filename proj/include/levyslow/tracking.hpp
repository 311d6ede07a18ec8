#pragma once

#include <cstddef>
#include <vector>

#include "levyslow/slow_manifold.hpp"

namespace levyslow {

struct TrackingConfig {
    double horizon = 1.0;  // forward window [0, T_fwd]
    double dt = 1e-4;
    std::size_t max_iter = 100;
    double tol = 1e-13;
    double fit_low = 1e-10;
    double fit_high = 1e-1;
    ManifoldConfig manifold;

    /// T_fwd = (eps / gamma) ln(1e8) rounded up to dt; manifold window from its defaults.
    static TrackingConfig defaults(const SystemSpec& spec, double dt);
};

struct TrackingReport {
    StateZ z_checked;            // on-manifold partner of z0
    double decay_rate = 0.0;     // least-squares slope of -log ||difference||
    double predicted_rate = 0.0; // gamma / eps
    double prefactor = 0.0;
    bool fitted = false;         // false when the difference never enters the fit band
    double window_start = 0.0;
    double window_end = 0.0;
    std::size_t iterations = 0;
    std::vector<double> residuals;
    std::vector<double> ratios;
    std::vector<double> times;
    std::vector<double> differences;  // ||Phi(t, z_checked) - Phi(t, z0)||
};

/// Forward Lyapunov-Perron iteration for the difference (U, V) between the orbit of z0
/// and its tracking orbit, coupled through U0 = -X0 + H(omega, V0 + Y0). The
/// difference is discretised with the same exponential Euler steps as the integrator,
/// so the constructed orbit is an exact discrete orbit.
TrackingReport solve_tracking_point(const SystemSpec& spec, const Omega& omega, const StateZ& z0,
                                    const TrackingConfig& config);

}  // namespace levyslow
