#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "levyslow/experiments.hpp"
#include "levyslow/tracking.hpp"

using namespace levyslow;

namespace {

struct TrackingCase {
    ExampleSystem ex;
    TrackingConfig tc;
    Omega omega;
};

TrackingCase noisy_example2(std::uint64_t seed) {
    ExampleSystem ex = make_example2(1.5, 8, 0.01, 1.0, 1.0);
    ex.spec.sigma1 = 0.1;
    const TrackingConfig tc = TrackingConfig::defaults(ex.spec, 1e-4);
    Omega omega = omega_for(ex.spec, tc.manifold, tc.horizon, seed);
    return TrackingCase{std::move(ex), tc, std::move(omega)};
}

}  // namespace

TEST(TrackingConfig, ForwardWindowMatchesWeight) {
    const TrackingCase s = noisy_example2(1);
    EXPECT_NEAR(s.tc.horizon * weight_rate(s.ex.spec), std::log(1e8), 0.01);
}

TEST(SolveTrackingPoint, OnManifoldStartIsItsOwnPartner) {
    const TrackingCase s = noisy_example2(2);
    const ManifoldPoint p = solve_manifold_point(s.ex.spec, s.omega, std::vector<double>{1.0}, s.tc.manifold);
    const TrackingReport r = solve_tracking_point(s.ex.spec, s.omega, StateZ{p.h_value, {1.0}}, s.tc);
    EXPECT_LE((r.z_checked.x - p.h_value).norm(), 1e-10);
    EXPECT_LE(std::abs(r.z_checked.y[0] - 1.0), 1e-10);
    for (double d : r.differences) EXPECT_LE(d, 1e-10);
}

TEST(SolveTrackingPoint, DifferenceDecaysAtTheGapRate) {
    const TrackingCase s = noisy_example2(3);
    const ManifoldPoint p = solve_manifold_point(s.ex.spec, s.omega, std::vector<double>{1.0}, s.tc.manifold);
    const StateZ z0{p.h_value + SpatialField::mode(8, 0, 0.05), {1.0}};
    const TrackingReport r = solve_tracking_point(s.ex.spec, s.omega, z0, s.tc);
    ASSERT_TRUE(r.fitted);
    EXPECT_NEAR(r.predicted_rate, 0.2368144706 / 0.01, 1e-6);
    EXPECT_GE(r.decay_rate, 0.8 * r.predicted_rate);
    const double rho = tracking_rho(s.ex.spec.op.lambda1(), 1.0, s.ex.reference_K, 0.01);
    for (double q : r.ratios) EXPECT_LE(q, rho + 0.05);
    EXPECT_EQ(r.times.size(), r.differences.size());
    EXPECT_GT(r.differences.front(), r.differences.back());
}
