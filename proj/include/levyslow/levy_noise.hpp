#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <random>
#include <span>
#include <vector>

#include "levyslow/ks_test.hpp"

namespace levyslow {

/// Stability index and intensity of a scalar symmetric alpha-stable law.
class StableParams {
public:
    /// Throws InvalidArgument unless 1 < alpha < 2 and scale >= 0.
    StableParams(double alpha, double scale);

    double alpha() const noexcept { return alpha_; }
    double scale() const noexcept { return scale_; }

private:
    double alpha_;
    double scale_;
};

/// Reproducible random stream keyed by (seed, stream id).
class RngStream {
public:
    RngStream(std::uint64_t seed, std::uint64_t stream_id);

    std::uint64_t seed() const noexcept { return seed_; }
    std::uint64_t stream_id() const noexcept { return stream_id_; }

    /// Uniform on the open interval (0, 1).
    double uniform_open();
    /// Unit-mean exponential.
    double exponential();

private:
    std::uint64_t seed_;
    std::uint64_t stream_id_;
    std::mt19937_64 engine_;
};

/// Standard symmetric stable variate, characteristic function exp(-|theta|^alpha).
/// Chambers-Mallows-Stuck transform.
double sample_standard_stable(double alpha, RngStream& rng);

/// One increment over a step of length dt: scale * dt^(1/alpha) * S.
double sample_stable_increment(const StableParams& params, double dt, RngStream& rng);

/// Sample path of a scalar Levy process on a uniform grid t_n = n * dt.
///
/// The grid is addressed by absolute index n; `increments()[k]` is the jump
/// accumulated on [t_{first+k}, t_{first+k+1}). Values are anchored at t = 0
/// when the origin lies in the window, and at the window start otherwise.
/// Shifting relabels time without touching the stored increments, so the
/// flow property of the shift holds exactly.
class NoisePath {
public:
    NoisePath(std::int64_t first_index, double dt, std::vector<double> increments);

    double dt() const noexcept { return dt_; }
    std::int64_t first_index() const noexcept { return first_index_; }
    std::int64_t last_index() const noexcept {
        return first_index_ + static_cast<std::int64_t>(steps());
    }
    double t_start() const noexcept { return static_cast<double>(first_index_) * dt_; }
    double t_end() const noexcept { return static_cast<double>(last_index()) * dt_; }
    std::size_t steps() const noexcept { return increments_->size(); }
    std::size_t points() const noexcept { return steps() + 1; }

    std::span<const double> increments() const noexcept { return *increments_; }
    /// cumulative()[k] = sum of increments()[0..k); cumulative()[0] = 0.
    std::span<const double> cumulative() const noexcept { return *cumulative_; }

    std::int64_t anchor_index() const noexcept;
    /// Path value at absolute grid index n, relative to the anchor.
    double value_at_index(std::int64_t n) const;
    double value_at(double t) const;
    /// Jump on [t_n, t_{n+1}).
    double increment_at_index(std::int64_t n) const;

    /// Absolute grid index of t; throws InvalidArgument if t is off-grid.
    std::int64_t grid_index(double t) const;
    bool covers(double t0, double t1) const;

private:
    friend NoisePath shift_path(const NoisePath& path, double l);

    std::int64_t first_index_;
    double dt_;
    std::shared_ptr<const std::vector<double>> increments_;
    std::shared_ptr<const std::vector<double>> cumulative_;
};

/// Nearest grid index of t for spacing dt; throws if |t/dt - n| exceeds rounding tolerance.
std::int64_t aligned_index(double t, double dt, const char* what);

NoisePath sample_path(const StableParams& params, double t_start, double t_end, double dt,
                      RngStream& rng);

/// theta_l: new(t) = old(t + l) - old(l). l must be on the grid and inside the window.
NoisePath shift_path(const NoisePath& path, double l);

/// KS comparison of L_{c} (built from 8 sub-step increments) against c^(1/alpha) L_1.
KsResult self_similarity_statistic(const StableParams& params, double c, std::size_t n_samples,
                                   RngStream& rng);

}  // namespace levyslow
