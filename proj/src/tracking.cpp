#include "levyslow/tracking.hpp"

#include <cmath>

#include "levyslow/errors.hpp"
#include "levyslow/stationary_ou.hpp"

namespace levyslow {

TrackingConfig TrackingConfig::defaults(const SystemSpec& spec, double dt) {
    TrackingConfig c;
    c.dt = dt;
    const double raw = -std::log(kTruncationTolerance) / weight_rate(spec);
    c.horizon = std::ceil(raw / dt - 1e-9) * dt;
    c.manifold = ManifoldConfig::defaults(spec, dt);
    return c;
}

namespace {

struct Fit {
    bool ok = false;
    double slope = 0.0;
    double intercept = 0.0;
    double t0 = 0.0;
    double t1 = 0.0;
};

// Least squares of log(diff) on the first contiguous run inside [low, high].
Fit fit_decay(const std::vector<double>& t, const std::vector<double>& diff, double low,
              double high) {
    std::size_t a = 0;
    while (a < diff.size() && !(diff[a] >= low && diff[a] <= high)) ++a;
    std::size_t b = a;
    while (b < diff.size() && diff[b] >= low && diff[b] <= high) ++b;
    Fit f;
    if (b - a < 3) return f;
    double st = 0.0, sl = 0.0, stt = 0.0, stl = 0.0;
    const double n = static_cast<double>(b - a);
    for (std::size_t j = a; j < b; ++j) {
        const double l = std::log(diff[j]);
        st += t[j];
        sl += l;
        stt += t[j] * t[j];
        stl += t[j] * l;
    }
    const double den = n * stt - st * st;
    f.slope = (n * stl - st * sl) / den;
    f.intercept = (sl - f.slope * st) / n;
    f.ok = true;
    f.t0 = t[a];
    f.t1 = t[b - 1];
    return f;
}

}  // namespace

TrackingReport solve_tracking_point(const SystemSpec& spec, const Omega& omega, const StateZ& z0,
                                    const TrackingConfig& config) {
    const std::size_t n = spec.n_modes();
    const std::size_t m = spec.slow_dim;
    const std::size_t steps = step_count(0.0, config.horizon, config.dt, "solve_tracking_point");
    const std::size_t P = steps + 1;
    const double rate = weight_rate(spec);

    const NoiseSamples noise = sample_noise(spec, omega, 0.0, config.dt, P);
    const Trajectory ref = integrate_random_system(spec, noise, z0, 0.0, config.dt, steps);
    const LyapunovPerron lp(spec, omega, config.manifold);
    const ExpEulerCoefficients c(spec, config.dt);

    std::vector<double> U(P * n, 0.0), V(P * m, 0.0), Un(P * n), Vn(P * m);
    std::vector<double> Ft(P * n), Gt(P * m);
    std::vector<double> xs(n), ys(m), fa(n), fb(n), ga(m), gb(m), yq(m);
    NonlinearityEvaluator ev(spec);

    TrackingReport rep;
    rep.predicted_rate = rate;
    bool converged = false;
    for (std::size_t it = 1; it <= config.max_iter; ++it) {
        for (std::size_t j = 0; j < P; ++j) {
            const auto xr = ref.x(j);
            const auto yr = ref.y(j);
            for (std::size_t k = 0; k < n; ++k) xs[k] = xr[k] + U[j * n + k];
            for (std::size_t i = 0; i < m; ++i) ys[i] = yr[i] + V[j * m + i];
            ev.fast(xs, ys, noise.eta[j], noise.xi_at(j), fa);
            ev.fast(xr, yr, noise.eta[j], noise.xi_at(j), fb);
            ev.slow(xs, ys, noise.eta[j], noise.xi_at(j), ga);
            ev.slow(xr, yr, noise.eta[j], noise.xi_at(j), gb);
            for (std::size_t k = 0; k < n; ++k) Ft[j * n + k] = fa[k] - fb[k];
            for (std::size_t i = 0; i < m; ++i) Gt[j * m + i] = ga[i] - gb[i];
        }
        // Slow part: the discrete step run backward from V(T_fwd) = 0.
        for (std::size_t i = 0; i < m; ++i) Vn[steps * m + i] = 0.0;
        for (std::size_t j = steps; j-- > 0;) {
            for (std::size_t i = 0; i < m; ++i) {
                Vn[j * m + i] = (Vn[(j + 1) * m + i] - c.cy[i] * Gt[j * m + i]) / c.ay[i];
            }
        }
        for (std::size_t i = 0; i < m; ++i) yq[i] = z0.y[i] + Vn[i];
        const ManifoldPoint hp = lp.solve(yq);
        for (std::size_t k = 0; k < n; ++k) Un[k] = hp.h_value[k] - z0.x[k];
        for (std::size_t j = 0; j < steps; ++j) {
            for (std::size_t k = 0; k < n; ++k) {
                Un[(j + 1) * n + k] = c.ax[k] * Un[j * n + k] + c.cx[k] * Ft[j * n + k];
            }
        }

        double d = 0.0, scale = 0.0;
        for (std::size_t j = 0; j < P; ++j) {
            double du = 0.0, dv = 0.0, nu = 0.0, nv = 0.0;
            for (std::size_t k = 0; k < n; ++k) {
                du += (Un[j * n + k] - U[j * n + k]) * (Un[j * n + k] - U[j * n + k]);
                nu += Un[j * n + k] * Un[j * n + k];
            }
            for (std::size_t i = 0; i < m; ++i) {
                dv += (Vn[j * m + i] - V[j * m + i]) * (Vn[j * m + i] - V[j * m + i]);
                nv += Vn[j * m + i] * Vn[j * m + i];
            }
            const double w = std::exp(rate * static_cast<double>(j) * config.dt);
            d = std::max(d, w * (std::sqrt(du) + std::sqrt(dv)));
            scale = std::max(scale, w * (std::sqrt(nu) + std::sqrt(nv)));
        }
        if (!std::isfinite(d)) throw NumericalError("solve_tracking_point: non-finite iterate", static_cast<std::ptrdiff_t>(it));
        const double floor = 1e-12 * std::max(scale, 1e-300);
        if (!rep.residuals.empty() && rep.residuals.back() > floor && d > floor) {
            rep.ratios.push_back(d / rep.residuals.back());
        }
        rep.residuals.push_back(d);
        U.swap(Un);
        V.swap(Vn);
        if (d <= config.tol) {
            rep.iterations = it;
            converged = true;
            break;
        }
    }
    if (!converged) {
        throw ConvergenceError("solve_tracking_point: forward iteration did not converge",
                               rep.residuals);
    }

    rep.z_checked = z0;
    for (std::size_t k = 0; k < n; ++k) rep.z_checked.x[k] += U[k];
    for (std::size_t i = 0; i < m; ++i) rep.z_checked.y[i] += V[i];

    const Trajectory other = integrate_random_system(spec, noise, rep.z_checked, 0.0, config.dt, steps);
    rep.times.resize(P);
    rep.differences.resize(P);
    for (std::size_t j = 0; j < P; ++j) {
        rep.times[j] = static_cast<double>(j) * config.dt;
        double dx = 0.0, dy = 0.0;
        for (std::size_t k = 0; k < n; ++k) dx += std::pow(other.x(j)[k] - ref.x(j)[k], 2);
        for (std::size_t i = 0; i < m; ++i) dy += std::pow(other.y(j)[i] - ref.y(j)[i], 2);
        rep.differences[j] = std::sqrt(dx) + std::sqrt(dy);
    }
    const Fit fit = fit_decay(rep.times, rep.differences, config.fit_low, config.fit_high);
    rep.fitted = fit.ok;
    if (fit.ok) {
        rep.decay_rate = -fit.slope;
        rep.prefactor = std::exp(fit.intercept);
        rep.window_start = fit.t0;
        rep.window_end = fit.t1;
    }
    return rep;
}

}  // namespace levyslow
