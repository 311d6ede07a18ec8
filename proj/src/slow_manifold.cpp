#include "levyslow/slow_manifold.hpp"

#include <cmath>
#include <exception>
#include <sstream>

#include "levyslow/errors.hpp"
#include "levyslow/stationary_ou.hpp"

namespace levyslow {

namespace {

const double kLogInvTol = -std::log(kTruncationTolerance);

double lambda_minus_gamma(double lambda1, double gamma_J) {
    return lambda1 - gap_gamma(lambda1, gamma_J);
}

void require_finite(std::span<const double> v, const char* what, std::size_t iterate) {
    for (double a : v) {
        if (!std::isfinite(a)) throw NumericalError(what, static_cast<std::ptrdiff_t>(iterate));
    }
}

}  // namespace

ManifoldConfig ManifoldConfig::defaults(const SystemSpec& spec, double dt) {
    ManifoldConfig c;
    c.dt = dt;
    const double raw = 1.5 * kLogInvTol / weight_rate(spec);
    c.horizon = std::ceil(raw / dt - 1e-9) * dt;
    return c;
}

void ManifoldConfig::validate(const SystemSpec& spec) const {
    if (!(dt > 0.0)) throw InvalidArgument("ManifoldConfig: dt must be > 0");
    if (!(horizon > 0.0)) throw InvalidArgument("ManifoldConfig: horizon must be > 0");
    if (max_iter == 0) throw InvalidArgument("ManifoldConfig: max_iter must be >= 1");
    if (!(tol > 0.0)) throw InvalidArgument("ManifoldConfig: tol must be > 0");
    step_count(-horizon, 0.0, dt, "ManifoldConfig (horizon)");
    if (std::exp(-weight_rate(spec) * horizon) > kTruncationTolerance * (1.0 + 1e-9)) {
        std::ostringstream os;
        os << "ManifoldConfig: horizon " << horizon << " too short; need exp(-gamma T / eps) <= 1e-8";
        throw InvalidArgument(os.str());
    }
}

double weight_rate(const SystemSpec& spec) {
    return gap_gamma(spec.op.lambda1(), spec.gamma_J) / spec.epsilon;
}

double contraction_factor(double lambda1, double gamma_J, double K, double epsilon) {
    const double beta = -gap_gamma(lambda1, gamma_J) / epsilon;
    const double fast = lambda1 + epsilon * beta;
    if (!(fast > 0.0)) {
        throw InvalidArgument("contraction_factor: lambda1 + eps beta <= 0 (gamma >= lambda1)");
    }
    return K / fast + K / (-beta + gamma_J);
}

double contraction_factor(const SystemSpec& spec) {
    return contraction_factor(spec.op.lambda1(), spec.gamma_J, spec.K, spec.epsilon);
}

double lipschitz_bound(double lambda1, double gamma_J, double K, double epsilon) {
    const double gamma = gap_gamma(lambda1, gamma_J);
    const double lg = lambda_minus_gamma(lambda1, gamma_J);
    const double den = 1.0 - K * (1.0 / lg + epsilon / (gamma + epsilon * gamma_J));
    if (!(den > 0.0) || !(lg > 0.0)) {
        throw InvalidArgument("lipschitz_bound: nonpositive denominator");
    }
    return K / (lg * den);
}

double lipschitz_bound(const SystemSpec& spec) {
    return lipschitz_bound(spec.op.lambda1(), spec.gamma_J, spec.K, spec.epsilon);
}

double tracking_rho(double lambda1, double gamma_J, double K, double epsilon) {
    const double gamma = gap_gamma(lambda1, gamma_J);
    const double beta = -gamma / epsilon;
    const double lg = lambda_minus_gamma(lambda1, gamma_J);
    const double den = 1.0 - K * (1.0 / lg + epsilon / (gamma + epsilon * gamma_J));
    if (!(den > 0.0) || !(lg > 0.0)) throw InvalidArgument("tracking_rho: nonpositive denominator");
    return K / (lambda1 + epsilon * beta) + K / (-beta + gamma_J) +
           K * K / (lg * (-beta + gamma_J) * den);
}

LyapunovPerron::LyapunovPerron(const SystemSpec& spec, const Omega& omega,
                               const ManifoldConfig& config)
    : spec_(spec), config_(config) {
    config_.validate(spec_);
    points_ = step_count(-config_.horizon, 0.0, config_.dt, "LyapunovPerron") + 1;
    noise_ = sample_noise(spec_, omega, -config_.horizon, config_.dt, points_);
    for (double lam : spec_.op.eigenvalues()) ax_.push_back(std::exp(-lam * config_.dt / spec_.epsilon));
    for (double j : spec_.J) ay_.push_back(std::exp(-j * config_.dt));
}

double LyapunovPerron::time(std::size_t j) const noexcept {
    // Counted back from the right end so that t = 0 is represented exactly.
    return -static_cast<double>(points_ - 1 - j) * config_.dt;
}

Trajectory LyapunovPerron::seed(std::span<const double> y0) const {
    Trajectory tr(-config_.horizon, config_.dt, points_, spec_.n_modes(), spec_.slow_dim);
    for (std::size_t j = 0; j < points_; ++j) {
        auto y = tr.y(j);
        for (std::size_t i = 0; i < y.size(); ++i) y[i] = std::exp(spec_.J[i] * time(j)) * y0[i];
    }
    return tr;
}

void LyapunovPerron::convolve_fast(std::span<const double> F, std::span<double> X) const {
    const std::size_t n = spec_.n_modes();
    const double h = 0.5 * config_.dt;
    const double inv_eps = 1.0 / spec_.epsilon;
    for (std::size_t k = 0; k < n; ++k) {
        const double a = ax_[k];
        double acc = 0.0;
        X[k] = 0.0;
        for (std::size_t j = 1; j < points_; ++j) {
            acc = a * acc + h * (a * F[(j - 1) * n + k] + F[j * n + k]);
            X[j * n + k] = acc * inv_eps;
        }
    }
}

void LyapunovPerron::convolve_slow(std::span<const double> G, std::span<const double> y0,
                                   std::span<double> Y) const {
    const std::size_t m = spec_.slow_dim;
    const double h = 0.5 * config_.dt;
    for (std::size_t i = 0; i < m; ++i) {
        const double b = ay_[i];
        double acc = 0.0;
        Y[(points_ - 1) * m + i] = y0[i];
        for (std::size_t j = points_ - 1; j-- > 0;) {
            acc = b * acc + h * (G[j * m + i] + b * G[(j + 1) * m + i]);
            Y[j * m + i] = std::exp(spec_.J[i] * time(j)) * y0[i] - acc;
        }
    }
}

Trajectory LyapunovPerron::step(const Trajectory& in, std::span<const double> y0) const {
    const std::size_t n = spec_.n_modes();
    const std::size_t m = spec_.slow_dim;
    std::vector<double> F(points_ * n), G(points_ * m);
    NonlinearityEvaluator ev(spec_);
    for (std::size_t j = 0; j < points_; ++j) {
        ev.fast(in.x(j), in.y(j), noise_.eta[j], noise_.xi_at(j), {F.data() + j * n, n});
        ev.slow(in.x(j), in.y(j), noise_.eta[j], noise_.xi_at(j), {G.data() + j * m, m});
    }
    Trajectory out(-config_.horizon, config_.dt, points_, n, m);
    convolve_fast(F, {out.x(0).data(), points_ * n});
    convolve_slow(G, y0, {out.y(0).data(), points_ * m});
    return out;
}

double LyapunovPerron::weighted_distance(const Trajectory& a, const Trajectory& b) const {
    const double rate = weight_rate(spec_);
    double best = 0.0;
    for (std::size_t j = 0; j < points_; ++j) {
        double dx = 0.0, dy = 0.0;
        const auto ax = a.x(j), bx = b.x(j), ay = a.y(j), by = b.y(j);
        for (std::size_t k = 0; k < ax.size(); ++k) dx += (ax[k] - bx[k]) * (ax[k] - bx[k]);
        for (std::size_t i = 0; i < ay.size(); ++i) dy += (ay[i] - by[i]) * (ay[i] - by[i]);
        best = std::max(best, std::exp(rate * time(j)) * (std::sqrt(dx) + std::sqrt(dy)));
    }
    return best;
}

double LyapunovPerron::weighted_norm(const Trajectory& a) const {
    const double rate = weight_rate(spec_);
    double best = 0.0;
    for (std::size_t j = 0; j < points_; ++j) {
        best = std::max(best, std::exp(rate * time(j)) * a.state_norm(j));
    }
    return best;
}

SpatialField LyapunovPerron::graph_integral(const Trajectory& tr) const {
    const std::size_t n = spec_.n_modes();
    std::vector<double> F(n);
    SpatialField h(n);
    NonlinearityEvaluator ev(spec_);
    for (std::size_t j = 0; j < points_; ++j) {
        ev.fast(tr.x(j), tr.y(j), noise_.eta[j], noise_.xi_at(j), F);
        const double w = (j == 0 || j + 1 == points_) ? 0.5 * config_.dt : config_.dt;
        for (std::size_t k = 0; k < n; ++k) {
            const double lam = spec_.op.eigenvalue(k);
            h[k] += w * std::exp(lam * time(j) / spec_.epsilon) * F[k];
        }
    }
    h *= 1.0 / spec_.epsilon;
    return h;
}

ManifoldPoint LyapunovPerron::solve(std::span<const double> y0) const {
    if (y0.size() != spec_.slow_dim) throw InvalidArgument("solve_manifold_point: y0 has wrong size");
    ManifoldPoint p;
    p.y0.assign(y0.begin(), y0.end());
    p.certified = contraction_factor(spec_) < 1.0;

    Trajectory cur = seed(y0);
    for (std::size_t it = 1; it <= config_.max_iter; ++it) {
        Trajectory next = step(cur, y0);
        for (std::size_t j = 0; j < points_; ++j) {
            require_finite(next.x(j), "solve_manifold_point: non-finite iterate", it);
            require_finite(next.y(j), "solve_manifold_point: non-finite iterate", it);
        }
        const double d = weighted_distance(next, cur);
        const double floor = 1e-12 * std::max(weighted_norm(next), 1e-300);
        if (!p.residuals.empty() && p.residuals.back() > floor && d > floor) {
            p.ratios.push_back(d / p.residuals.back());
        }
        p.residuals.push_back(d);
        cur = std::move(next);
        if (d <= config_.tol) {
            p.iterations = it;
            const auto x0 = cur.x(points_ - 1);
            p.h_value = SpatialField(std::vector<double>(x0.begin(), x0.end()));
            p.eq18_value = graph_integral(cur);
            p.trajectory = std::move(cur);
            return p;
        }
    }
    throw ConvergenceError("solve_manifold_point: no convergence within max_iter", p.residuals);
}

Trajectory lp_step(const Trajectory& traj, const Omega& omega, const SystemSpec& spec,
                   std::span<const double> y0, const ManifoldConfig& config) {
    const LyapunovPerron lp(spec, omega, config);
    if (traj.size() != lp.points() || traj.n_modes() != spec.n_modes() ||
        traj.slow_dim() != spec.slow_dim) {
        throw InvalidArgument("lp_step: trajectory grid does not match the configuration");
    }
    return lp.step(traj, y0);
}

ManifoldPoint solve_manifold_point(const SystemSpec& spec, const Omega& omega,
                                   std::span<const double> y0, const ManifoldConfig& config) {
    return LyapunovPerron(spec, omega, config).solve(y0);
}

std::vector<ManifoldPoint> solve_manifold_graph(const SystemSpec& spec, const Omega& omega,
                                                const std::vector<SlowVector>& y0s,
                                                const ManifoldConfig& config,
                                                kernels::Backend backend) {
    const LyapunovPerron lp(spec, omega, config);
    std::vector<ManifoldPoint> out(y0s.size());
    if (backend == kernels::Backend::serial) {
        for (std::size_t i = 0; i < y0s.size(); ++i) out[i] = lp.solve(y0s[i]);
        return out;
    }
    std::vector<std::exception_ptr> errors(y0s.size());
    const auto count = static_cast<std::ptrdiff_t>(y0s.size());
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t i = 0; i < count; ++i) {
        try {
            out[i] = lp.solve(y0s[i]);
        } catch (...) {
            errors[i] = std::current_exception();
        }
    }
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    return out;
}

SpatialField back_transform_manifold(const ManifoldPoint& point, double eta,
                                     const SystemSpec& spec) {
    SpatialField h = point.h_value;
    h[0] += spec.sigma1 * eta;
    return h;
}

}  // namespace levyslow
