#include "levyslow/levy_noise.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "levyslow/errors.hpp"

namespace levyslow {

StableParams::StableParams(double alpha, double scale) : alpha_(alpha), scale_(scale) {
    if (!(alpha > 1.0 && alpha < 2.0)) {
        throw InvalidArgument("StableParams: alpha must lie in (1, 2), got " +
                              std::to_string(alpha));
    }
    if (!(scale >= 0.0) || !std::isfinite(scale)) {
        throw InvalidArgument("StableParams: scale must be finite and >= 0");
    }
}

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed), stream_id_(stream_id) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream_id),
                      static_cast<std::uint32_t>(stream_id >> 32), 0x5eedu};
    engine_.seed(seq);
}

double RngStream::uniform_open() {
    // 53 random mantissa bits, offset by half an ulp so 0 is never returned.
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
}

double RngStream::exponential() { return -std::log(uniform_open()); }

double sample_standard_stable(double alpha, RngStream& rng) {
    const double v = std::numbers::pi * (rng.uniform_open() - 0.5);
    const double w = rng.exponential();
    const double cv = std::cos(v);
    return std::sin(alpha * v) / std::pow(cv, 1.0 / alpha) *
           std::pow(std::cos(v - alpha * v) / w, (1.0 - alpha) / alpha);
}

double sample_stable_increment(const StableParams& params, double dt, RngStream& rng) {
    if (!(dt > 0.0)) throw InvalidArgument("sample_stable_increment: dt must be > 0");
    if (params.scale() == 0.0) return 0.0;
    return params.scale() * std::pow(dt, 1.0 / params.alpha()) *
           sample_standard_stable(params.alpha(), rng);
}

std::int64_t aligned_index(double t, double dt, const char* what) {
    const double q = t / dt;
    const double n = std::round(q);
    if (std::abs(q - n) > 1e-6 * std::max(1.0, std::abs(q))) {
        std::ostringstream os;
        os << what << ": time " << t << " is not a multiple of dt = " << dt;
        throw InvalidArgument(os.str());
    }
    return static_cast<std::int64_t>(n);
}

NoisePath::NoisePath(std::int64_t first_index, double dt, std::vector<double> increments)
    : first_index_(first_index), dt_(dt) {
    if (!(dt > 0.0)) throw InvalidArgument("NoisePath: dt must be > 0");
    std::vector<double> cumulative(increments.size() + 1, 0.0);
    for (std::size_t k = 0; k < increments.size(); ++k) {
        cumulative[k + 1] = cumulative[k] + increments[k];
    }
    increments_ = std::make_shared<const std::vector<double>>(std::move(increments));
    cumulative_ = std::make_shared<const std::vector<double>>(std::move(cumulative));
}

std::int64_t NoisePath::anchor_index() const noexcept {
    return (first_index_ <= 0 && last_index() >= 0) ? 0 : first_index_;
}

double NoisePath::value_at_index(std::int64_t n) const {
    if (n < first_index_ || n > last_index()) {
        throw WindowError("NoisePath: index outside window", static_cast<double>(n) * dt_,
                          static_cast<double>(n) * dt_);
    }
    const auto& c = *cumulative_;
    return c[static_cast<std::size_t>(n - first_index_)] -
           c[static_cast<std::size_t>(anchor_index() - first_index_)];
}

double NoisePath::value_at(double t) const { return value_at_index(grid_index(t)); }

double NoisePath::increment_at_index(std::int64_t n) const {
    if (n < first_index_ || n >= last_index()) {
        throw WindowError("NoisePath: increment outside window", static_cast<double>(n) * dt_,
                          static_cast<double>(n + 1) * dt_);
    }
    return (*increments_)[static_cast<std::size_t>(n - first_index_)];
}

std::int64_t NoisePath::grid_index(double t) const { return aligned_index(t, dt_, "NoisePath"); }

bool NoisePath::covers(double t0, double t1) const {
    const double slack = 1e-9 * dt_;
    return t0 >= t_start() - slack && t1 <= t_end() + slack;
}

NoisePath sample_path(const StableParams& params, double t_start, double t_end, double dt,
                      RngStream& rng) {
    if (!(dt > 0.0)) throw InvalidArgument("sample_path: dt must be > 0");
    if (!(t_start < t_end)) throw InvalidArgument("sample_path: need t_start < t_end");
    const std::int64_t first = aligned_index(t_start, dt, "sample_path (t_start)");
    const std::int64_t last = aligned_index(t_end, dt, "sample_path (t_end)");
    const auto steps = static_cast<std::size_t>(last - first);
    std::vector<double> inc(steps);
    for (auto& v : inc) v = sample_stable_increment(params, dt, rng);
    return NoisePath(first, dt, std::move(inc));
}

NoisePath shift_path(const NoisePath& path, double l) {
    const std::int64_t m = aligned_index(l, path.dt(), "shift_path");
    if (m < path.first_index() || m > path.last_index()) {
        std::ostringstream os;
        os << "shift_path: shift " << l << " leaves the sampled window; extend the path";
        throw WindowError(os.str(), std::min(l, path.t_start()), std::max(l, path.t_end()));
    }
    // Same increments, relabelled: old index n becomes n - m.
    NoisePath shifted = path;
    shifted.first_index_ -= m;
    return shifted;
}

KsResult self_similarity_statistic(const StableParams& params, double c, std::size_t n_samples,
                                   RngStream& rng) {
    if (!(c > 0.0)) throw InvalidArgument("self_similarity_statistic: c must be > 0");
    if (n_samples < 1000) throw InvalidArgument("self_similarity_statistic: need >= 1000 samples");
    constexpr int sub_steps = 8;
    const double sub_dt = c / sub_steps;
    const double scale = std::pow(c, 1.0 / params.alpha());
    std::vector<double> lhs(n_samples), rhs(n_samples);
    for (std::size_t i = 0; i < n_samples; ++i) {
        double sum = 0.0;
        for (int k = 0; k < sub_steps; ++k) sum += sample_stable_increment(params, sub_dt, rng);
        lhs[i] = sum;
    }
    for (std::size_t i = 0; i < n_samples; ++i) {
        rhs[i] = scale * sample_stable_increment(params, 1.0, rng);
    }
    return ks_two_sample(lhs, rhs);
}

}  // namespace levyslow
