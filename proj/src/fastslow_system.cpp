#include "levyslow/fastslow_system.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "levyslow/errors.hpp"
#include "levyslow/stationary_ou.hpp"

namespace levyslow {

double euclidean_norm(std::span<const double> v) {
    double s = 0.0;
    for (double a : v) s += a * a;
    return std::sqrt(s);
}

Omega shift_omega(const Omega& omega, double l) {
    return Omega{shift_path(omega.fast, l), shift_path(omega.slow, l)};
}

Omega sample_omega(double alpha1, double alpha2, double t_start, double t_end, double dt,
                   std::uint64_t seed) {
    RngStream fast_rng(seed, 1);
    RngStream slow_rng(seed, 2);
    return Omega{sample_path(StableParams(alpha1, 1.0), t_start, t_end, dt, fast_rng),
                 sample_path(StableParams(alpha2, 1.0), t_start, t_end, dt, slow_rng)};
}

Omega quiet_omega(double dt) {
    return Omega{NoisePath(0, dt, {}), NoisePath(0, dt, {})};
}

double gap_gamma(double lambda1, double gamma_J) { return gamma_J / (2.0 * lambda1 + gamma_J); }

ConditionReport check_conditions(const SystemSpec& spec) {
    ConditionReport r;
    r.lambda1 = spec.op.lambda1();
    r.gamma_J = spec.gamma_J;
    r.K = spec.K;
    r.s3_threshold = r.lambda1 * r.gamma_J / (r.gamma_J + 2.0 * r.lambda1);
    r.s3_pass = spec.K < r.s3_threshold;
    r.gamma = gap_gamma(r.lambda1, r.gamma_J);
    r.k_below_gamma_lambda1 = spec.K < r.gamma * r.lambda1;
    r.gap_exceeds_k = r.lambda1 - r.gamma > spec.K;

    // ||e^{Jt} y|| <= e^{gamma_J t} ||y|| for all t <= 0 holds exactly when every
    // diagonal entry satisfies J_i >= gamma_J.
    r.s1_pass = std::all_of(spec.J.begin(), spec.J.end(),
                            [&](double j) { return j >= spec.gamma_J; });
    if (!r.s1_pass) {
        r.warnings.push_back("slow dichotomy bound ||e^{Jt}y|| <= e^{gamma_J t}||y|| (t <= 0) "
                             "fails for the configured J");
    }
    if (!r.s3_pass) {
        std::ostringstream os;
        os << "K = " << spec.K << " is not below the gap threshold " << r.s3_threshold;
        r.warnings.push_back(os.str());
    }
    return r;
}

namespace {

void uniform_fill(std::span<double> v, double box, RngStream& rng) {
    for (double& a : v) a = box * (2.0 * rng.uniform_open() - 1.0);
}

double diff_norm(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(s);
}

}  // namespace

LipschitzEstimate estimate_lipschitz(const SystemSpec& spec, std::size_t pairs,
                                     std::uint64_t seed) {
    const std::size_t n = spec.n_modes();
    const std::size_t m = spec.slow_dim;
    std::vector<double> xa(n), xb(n), ya(m), yb(m), fa(n), fb(n), ga(m), gb(m);
    RngStream rng(seed, 77);
    LipschitzEstimate est;
    est.pairs = pairs;
    for (std::size_t p = 0; p < pairs; ++p) {
        uniform_fill(xa, spec.lipschitz_box, rng);
        uniform_fill(xb, spec.lipschitz_box, rng);
        uniform_fill(ya, spec.lipschitz_box, rng);
        uniform_fill(yb, spec.lipschitz_box, rng);
        const double d = diff_norm(xa, xb) + diff_norm(ya, yb);
        if (d == 0.0) continue;
        spec.f(xa, ya, fa);
        spec.f(xb, yb, fb);
        spec.g(xa, ya, ga);
        spec.g(xb, yb, gb);
        est.f_quotient = std::max(est.f_quotient, diff_norm(fa, fb) / d);
        est.g_quotient = std::max(est.g_quotient, diff_norm(ga, gb) / d);
    }
    return est;
}

void validate_system(const SystemSpec& spec) {
    if (!(spec.epsilon > 0.0 && spec.epsilon < 1.0)) {
        throw InvalidArgument("SystemSpec: epsilon must lie in (0, 1)");
    }
    if (spec.slow_dim == 0 || spec.J.size() != spec.slow_dim) {
        throw InvalidArgument("SystemSpec: J must have slow_dim diagonal entries");
    }
    if (!(spec.gamma_J > 0.0)) throw InvalidArgument("SystemSpec: gamma_J must be > 0");
    if (!spec.f || !spec.g) throw InvalidArgument("SystemSpec: f and g must be set");
    if (!(spec.K >= 0.0)) throw InvalidArgument("SystemSpec: K must be >= 0");
    if (!(spec.sigma1 >= 0.0 && spec.sigma2 >= 0.0)) {
        throw InvalidArgument("SystemSpec: noise intensities must be >= 0");
    }
    for (double a : {spec.alpha1, spec.alpha2}) {
        if (!(a > 1.0 && a < 2.0)) throw InvalidArgument("SystemSpec: alpha1, alpha2 in (1, 2)");
    }

    const std::size_t n = spec.n_modes();
    std::vector<double> zx(n, 0.0), zy(spec.slow_dim, 0.0), fo(n), go(spec.slow_dim);
    spec.f(zx, zy, fo);
    spec.g(zx, zy, go);
    if (euclidean_norm(fo) > 1e-12 || euclidean_norm(go) > 1e-12) {
        throw InvalidArgument("SystemSpec: nonlinearities must vanish at the origin");
    }

    const LipschitzEstimate est = estimate_lipschitz(spec, 1000, 20240917);
    const double allowed = spec.K * (1.0 + 1e-9) + 1e-15;
    if (est.f_quotient > allowed || est.g_quotient > allowed) {
        std::ostringstream os;
        os << "SystemSpec: declared K = " << spec.K << " is below sampled difference quotients (f: "
           << est.f_quotient << ", g: " << est.g_quotient << ")";
        throw InvalidArgument(os.str());
    }
}

NonlinearityEvaluator::NonlinearityEvaluator(const SystemSpec& spec)
    : spec_(spec), xs_(spec.n_modes()), ys_(spec.slow_dim) {}

void NonlinearityEvaluator::shift(std::span<const double> x, std::span<const double> y,
                                  double eta, std::span<const double> xi) {
    std::copy(x.begin(), x.end(), xs_.begin());
    xs_[0] += eta;
    for (std::size_t i = 0; i < ys_.size(); ++i) ys_[i] = y[i] + (xi.empty() ? 0.0 : xi[i]);
}

void NonlinearityEvaluator::fast(std::span<const double> x, std::span<const double> y, double eta,
                                 std::span<const double> xi, std::span<double> out) {
    shift(x, y, eta, xi);
    spec_.f(xs_, ys_, out);
}

void NonlinearityEvaluator::slow(std::span<const double> x, std::span<const double> y, double eta,
                                 std::span<const double> xi, std::span<double> out) {
    shift(x, y, eta, xi);
    spec_.g(xs_, ys_, out);
}

StateZ random_transform(const SpatialField& x, std::span<const double> y, double eta,
                        std::span<const double> xi, const SystemSpec& spec) {
    StateZ z{x, SlowVector(y.begin(), y.end())};
    z.x[0] -= spec.sigma1 * eta;
    for (std::size_t i = 0; i < z.y.size(); ++i) z.y[i] -= spec.sigma2 * xi[i];
    return z;
}

StateZ inverse_transform(const StateZ& z, double eta, std::span<const double> xi,
                         const SystemSpec& spec) {
    StateZ out = z;
    out.x[0] += spec.sigma1 * eta;
    for (std::size_t i = 0; i < out.y.size(); ++i) out.y[i] += spec.sigma2 * xi[i];
    return out;
}

Trajectory::Trajectory(double t_start, double dt, std::size_t points, std::size_t n_modes,
                       std::size_t slow_dim)
    : t_start_(t_start),
      dt_(dt),
      points_(points),
      n_modes_(n_modes),
      slow_dim_(slow_dim),
      xs_(points * n_modes, 0.0),
      ys_(points * slow_dim, 0.0) {}

StateZ Trajectory::state(std::size_t j) const {
    const auto xv = x(j);
    const auto yv = y(j);
    return StateZ{SpatialField(std::vector<double>(xv.begin(), xv.end())),
                  SlowVector(yv.begin(), yv.end())};
}

void Trajectory::set_state(std::size_t j, const StateZ& z) {
    std::copy(z.x.coefficients().begin(), z.x.coefficients().end(), x(j).begin());
    std::copy(z.y.begin(), z.y.end(), y(j).begin());
}

double Trajectory::state_norm(std::size_t j) const { return euclidean_norm(x(j)) + euclidean_norm(y(j)); }

std::size_t step_count(double t0, double t1, double dt, const char* what) {
    if (!(dt > 0.0)) throw InvalidArgument(std::string(what) + ": dt must be > 0");
    if (!(t1 >= t0)) throw InvalidArgument(std::string(what) + ": need t1 >= t0");
    return static_cast<std::size_t>(aligned_index(t1 - t0, dt, what));
}

NoiseSamples sample_noise(const SystemSpec& spec, const Omega& omega, double t0, double dt,
                          std::size_t count, kernels::Backend backend) {
    NoiseSamples s;
    s.slow_dim = spec.slow_dim;
    s.eta.assign(count, 0.0);
    s.xi.assign(count * spec.slow_dim, 0.0);
    if (spec.sigma1 > 0.0) {
        const auto fs = StationarySpec::fast(spec.op.lambda1(), spec.sigma1, spec.epsilon, spec.alpha1);
        s.eta = stationary_on_grid(omega.fast, t0, dt, count, fs, backend);
    }
    if (spec.sigma2 > 0.0) {
        for (std::size_t i = 0; i < spec.slow_dim; ++i) {
            const auto ss = StationarySpec::slow(spec.J[i], spec.sigma2, spec.alpha2);
            const auto v = stationary_on_grid(omega.slow, t0, dt, count, ss, backend);
            for (std::size_t j = 0; j < count; ++j) s.xi[j * spec.slow_dim + i] = v[j];
        }
    }
    return s;
}

ExpEulerCoefficients::ExpEulerCoefficients(const SystemSpec& spec, double dt) {
    for (double lam : spec.op.eigenvalues()) {
        const double z = -lam * dt / spec.epsilon;
        ax.push_back(std::exp(z));
        cx.push_back(-std::expm1(z) / lam);  // (dt/eps) phi1(z)
    }
    for (double j : spec.J) {
        ay.push_back(std::exp(j * dt));
        cy.push_back(j == 0.0 ? dt : std::expm1(j * dt) / j);
    }
}

namespace {

void check_finite(const Trajectory& tr, std::size_t j) {
    for (double v : tr.x(j)) {
        if (!std::isfinite(v)) throw NumericalError("integrate_random_system: non-finite state", static_cast<std::ptrdiff_t>(j));
    }
    for (double v : tr.y(j)) {
        if (!std::isfinite(v)) throw NumericalError("integrate_random_system: non-finite state", static_cast<std::ptrdiff_t>(j));
    }
}

Trajectory integrate_with_noise(const SystemSpec& spec, const NoiseSamples& noise,
                                const StateZ& z0, double t0, double dt, std::size_t steps) {
    const std::size_t n = spec.n_modes();
    const std::size_t m = spec.slow_dim;
    if (z0.x.size() != n || z0.y.size() != m) {
        throw InvalidArgument("integrate_random_system: initial state has wrong dimensions");
    }
    Trajectory tr(t0, dt, steps + 1, n, m);
    tr.set_state(0, z0);
    const ExpEulerCoefficients c(spec, dt);
    NonlinearityEvaluator ev(spec);
    std::vector<double> fo(n), go(m);
    for (std::size_t j = 0; j < steps; ++j) {
        const auto xj = tr.x(j);
        const auto yj = tr.y(j);
        ev.fast(xj, yj, noise.eta[j], noise.xi_at(j), fo);
        ev.slow(xj, yj, noise.eta[j], noise.xi_at(j), go);
        auto xn = tr.x(j + 1);
        auto yn = tr.y(j + 1);
        for (std::size_t k = 0; k < n; ++k) xn[k] = c.ax[k] * xj[k] + c.cx[k] * fo[k];
        for (std::size_t i = 0; i < m; ++i) yn[i] = c.ay[i] * yj[i] + c.cy[i] * go[i];
        check_finite(tr, j + 1);
    }
    return tr;
}

}  // namespace

Trajectory integrate_random_system(const SystemSpec& spec, const NoiseSamples& noise,
                                   const StateZ& z0, double t0, double dt, std::size_t steps) {
    if (noise.eta.size() < steps + 1) {
        throw InvalidArgument("integrate_random_system: noise samples shorter than the grid");
    }
    return integrate_with_noise(spec, noise, z0, t0, dt, steps);
}

Trajectory integrate_random_system(const SystemSpec& spec, const Omega& omega, const StateZ& z0,
                                   double t0, double t1, double dt) {
    const std::size_t steps = step_count(t0, t1, dt, "integrate_random_system");
    const NoiseSamples noise = sample_noise(spec, omega, t0, dt, steps + 1);
    return integrate_with_noise(spec, noise, z0, t0, dt, steps);
}

Trajectory integrate_stochastic_system(const SystemSpec& spec, const Omega& omega,
                                       const StateZ& z0, double t0, double t1, double dt) {
    const std::size_t steps = step_count(t0, t1, dt, "integrate_stochastic_system");
    const NoiseSamples noise = sample_noise(spec, omega, t0, dt, steps + 1);
    // The samples are already scaled by the intensities.
    StateZ z = z0;
    z.x[0] -= noise.eta[0];
    for (std::size_t i = 0; i < z.y.size(); ++i) z.y[i] -= noise.xi[i];
    Trajectory tr = integrate_with_noise(spec, noise, z, t0, dt, steps);
    for (std::size_t j = 0; j < tr.size(); ++j) {
        tr.x(j)[0] += noise.eta[j];
        auto yj = tr.y(j);
        const auto xi = noise.xi_at(j);
        for (std::size_t i = 0; i < yj.size(); ++i) yj[i] += xi[i];
    }
    return tr;
}

}  // namespace levyslow
