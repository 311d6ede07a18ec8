#include "levyslow/stationary_ou.hpp"

#include <cmath>
#include <sstream>

#include "levyslow/errors.hpp"

namespace levyslow {

namespace {

const double kLogInvTol = -std::log(kTruncationTolerance);

std::size_t window_steps(const StationarySpec& spec, double dt) {
    return static_cast<std::size_t>(std::ceil(spec.t_trunc / dt - 1e-9));
}

double prefactor(const StationarySpec& spec) {
    return spec.sigma / std::pow(spec.epsilon, 1.0 / spec.alpha);
}

}  // namespace

StationarySpec StationarySpec::fast(double rate, double sigma, double epsilon, double alpha) {
    StationarySpec s{rate, sigma, epsilon, alpha, 0.0};
    if (!(rate > 0.0)) throw InvalidArgument("StationarySpec: fast rate must be > 0");
    s.t_trunc = epsilon / rate * kLogInvTol;
    s.validate();
    return s;
}

StationarySpec StationarySpec::slow(double j, double sigma, double alpha) {
    if (!(j > 0.0)) {
        throw InvalidArgument(
            "StationarySpec: slow coefficient J must be > 0; exp(J s) grows without bound as "
            "s -> -infinity and the stationary integral diverges");
    }
    StationarySpec s{j, sigma, 1.0, alpha, kLogInvTol / j};
    s.validate();
    return s;
}

void StationarySpec::validate() const {
    if (!(rate > 0.0)) {
        throw InvalidArgument("StationarySpec: kernel rate must be > 0 (integrand exceeds 1e8 "
                              "inside any truncation window otherwise)");
    }
    if (!(epsilon > 0.0 && epsilon <= 1.0)) throw InvalidArgument("StationarySpec: epsilon in (0, 1]");
    if (!(sigma >= 0.0)) throw InvalidArgument("StationarySpec: sigma must be >= 0");
    if (!(alpha > 1.0 && alpha < 2.0)) throw InvalidArgument("StationarySpec: alpha in (1, 2)");
    if (!(std::exp(-decay() * t_trunc) <= kTruncationTolerance * (1.0 + 1e-9))) {
        std::ostringstream os;
        os << "StationarySpec: truncation horizon " << t_trunc
           << " leaves a kernel tail above 1e-8";
        throw InvalidArgument(os.str());
    }
}

std::vector<double> stationary_on_grid(const NoisePath& path, double t0, double step,
                                       std::size_t count, const StationarySpec& spec,
                                       kernels::Backend backend) {
    spec.validate();
    std::vector<double> out(count, 0.0);
    if (spec.sigma == 0.0 || count == 0) return out;

    const double dt = path.dt();
    const std::int64_t stride = aligned_index(step, dt, "stationary_on_grid (step)");
    if (stride < 1) throw InvalidArgument("stationary_on_grid: step must be >= path dt");
    const std::int64_t first = path.grid_index(t0);
    const std::int64_t last = first + stride * static_cast<std::int64_t>(count - 1);
    const std::size_t window = window_steps(spec, dt);
    const std::int64_t need_lo = first - static_cast<std::int64_t>(window);
    if (need_lo < path.first_index() || last > path.last_index()) {
        throw WindowError("stationary convolution needs more path history",
                          static_cast<double>(need_lo) * dt, static_cast<double>(last) * dt);
    }

    kernels::ConvolutionPlan plan;
    plan.increments = path.increments();
    plan.inc_first = path.first_index();
    plan.first_node = first;
    plan.stride = stride;
    plan.window = window;
    plan.rate_dt = spec.decay() * dt;
    plan.scale = prefactor(spec);
    kernels::exponential_convolution(plan, out, backend);
    return out;
}

double eta_eps(const NoisePath& path, double t, const StationarySpec& spec) {
    return stationary_on_grid(path, t, path.dt(), 1, spec, kernels::Backend::serial).front();
}

double delta_stat(const NoisePath& path, double t, const StationarySpec& spec) {
    if (spec.epsilon != 1.0) throw InvalidArgument("delta_stat: spec.epsilon must be 1");
    return eta_eps(path, t, spec);
}

double xi_stat(const NoisePath& path, double t, const StationarySpec& spec) {
    if (spec.epsilon != 1.0) throw InvalidArgument("xi_stat: spec.epsilon must be 1");
    return eta_eps(path, t, spec);
}

}  // namespace levyslow
