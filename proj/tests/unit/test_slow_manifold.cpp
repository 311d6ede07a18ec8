#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "levyslow/errors.hpp"
#include "levyslow/experiments.hpp"
#include "levyslow/slow_manifold.hpp"
#include "levyslow/stationary_ou.hpp"

using namespace levyslow;

namespace {

constexpr double kLambda1 = 1.61135746385;  // alpha = 1.5

ExampleSystem noisy_example2(double eps = 0.01) {
    ExampleSystem ex = make_example2(1.5, 8, eps, 1.0, 1.0);
    ex.spec.sigma1 = 0.1;
    return ex;
}

}  // namespace

TEST(Constants, ContractionFactorReferenceValues) {
    EXPECT_NEAR(contraction_factor(kLambda1, 1.0, 0.01, 0.01), 0.0076803079, 1e-9);
    // eps beta = -gamma does not depend on eps, so the small-eps limit is K / (lambda1 - gamma).
    EXPECT_NEAR(contraction_factor(kLambda1, 1.0, 0.01, 1e-12), 0.0072751453, 1e-9);
    EXPECT_EQ(contraction_factor(kLambda1, 1.0, 0.0, 0.01), 0.0);
}

TEST(Constants, ContractionFactorRejectsClosedGap) {
    EXPECT_THROW(contraction_factor(0.1, 1.0, 0.01, 0.5), InvalidArgument);
}

TEST(Constants, LipschitzBoundReferenceValuesAndMonotonicity) {
    EXPECT_NEAR(lipschitz_bound(kLambda1, 1.0, 0.01, 0.01), 0.0073314531, 1e-9);
    EXPECT_EQ(lipschitz_bound(kLambda1, 1.0, 0.0, 0.01), 0.0);
    double prev = 0.0;
    for (int i = 1; i <= 40; ++i) {
        const double v = lipschitz_bound(kLambda1, 1.0, 0.02 * i, 0.01);
        EXPECT_GT(v, prev);
        prev = v;
    }
    EXPECT_THROW(lipschitz_bound(kLambda1, 1.0, 2.0, 0.01), InvalidArgument);
}

TEST(Constants, TrackingRhoReferenceValue) {
    EXPECT_NEAR(tracking_rho(kLambda1, 1.0, 0.01, 0.01), 0.0076832784, 1e-9);
}

TEST(ManifoldConfig, DefaultHorizonAndInvariant) {
    const ExampleSystem ex = make_example2(1.5, 8, 0.01, 1.0, 1.0);
    const ManifoldConfig mc = ManifoldConfig::defaults(ex.spec, 1e-4);
    EXPECT_NEAR(mc.horizon, 1.5 * 0.01 / 0.2368144706 * std::log(1e8), 2e-4);
    EXPECT_NO_THROW(mc.validate(ex.spec));
    ManifoldConfig short_window = mc;
    short_window.horizon = 0.5;
    EXPECT_THROW(short_window.validate(ex.spec), InvalidArgument);
}

TEST(LpStep, ZeroNonlinearityGivesLinearFlow) {
    const ExampleSystem ex = make_linear_system(1.5, 3, 0.05, 0.0, 1.0, 1.0);
    const ManifoldConfig mc = ManifoldConfig::defaults(ex.spec, 1e-3);
    const LyapunovPerron lp(ex.spec, quiet_omega(1e-3), mc);
    const std::vector<double> y0{0.7};
    Trajectory in = lp.seed(y0);
    for (std::size_t j = 0; j < in.size(); ++j) in.x(j)[1] = 3.0;  // arbitrary input
    const Trajectory out = lp_step(in, quiet_omega(1e-3), ex.spec, y0, mc);
    for (std::size_t j = 0; j < out.size(); j += 97) {
        for (double v : out.x(j)) EXPECT_EQ(v, 0.0);
        EXPECT_EQ(out.y(j)[0], std::exp(lp.time(j)) * 0.7);
    }
}

TEST(LpStep, RejectsMismatchedGrid) {
    const ExampleSystem ex = make_linear_system(1.5, 3, 0.05, 0.1, 1.0, 1.0);
    const ManifoldConfig mc = ManifoldConfig::defaults(ex.spec, 1e-3);
    const Trajectory wrong(-1.0, 1e-3, 10, 3, 1);
    EXPECT_THROW(lp_step(wrong, quiet_omega(1e-3), ex.spec, std::vector<double>{1.0}, mc),
                 InvalidArgument);
}

TEST(SolveManifoldPoint, ZeroFastNonlinearityGivesZeroGraph) {
    ExampleSystem ex = make_linear_system(1.5, 4, 0.05, 0.0, 1.0, 1.0);
    const ManifoldConfig mc = ManifoldConfig::defaults(ex.spec, 1e-3);
    for (double y : {-1.0, 0.5, 2.0}) {
        const ManifoldPoint p = solve_manifold_point(ex.spec, quiet_omega(1e-3), std::vector<double>{y}, mc);
        EXPECT_EQ(p.h_value.norm(), 0.0);
    }
}

TEST(SolveManifoldPoint, LinearOracle) {
    const ExampleSystem ex = make_linear_system(1.5, 1, 0.05, 0.1, 1.0, 1.0);
    const ManifoldConfig mc = ManifoldConfig::defaults(ex.spec, 1e-4);
    const ManifoldPoint p = solve_manifold_point(ex.spec, quiet_omega(1e-4), std::vector<double>{1.0}, mc);
    const double exact = 0.1 / (kLambda1 + 0.05);
    EXPECT_NEAR(p.h_value[0] / exact, 1.0, 1e-4);
    EXPECT_TRUE(p.certified);
}

TEST(SolveManifoldPoint, ResidualsDecreaseAndSelfConsistency) {
    const ExampleSystem ex = noisy_example2();
    const ManifoldConfig mc = ManifoldConfig::defaults(ex.spec, 1e-4);
    const Omega omega = omega_for(ex.spec, mc, 0.0, 3);
    const ManifoldPoint p = solve_manifold_point(ex.spec, omega, std::vector<double>{1.5}, mc);
    ASSERT_GE(p.residuals.size(), 2u);
    for (std::size_t i = 1; i < p.residuals.size(); ++i) EXPECT_LT(p.residuals[i], p.residuals[i - 1]);
    EXPECT_LE(p.residuals.back(), mc.tol);
    EXPECT_LE((p.h_value - p.eq18_value).norm(), 1e-8);
    EXPECT_GT(p.h_value.norm(), 0.0);
}

TEST(SolveManifoldPoint, ContractionRatiosBelowClosedForm) {
    const ExampleSystem ex = noisy_example2();
    const ManifoldConfig mc = ManifoldConfig::defaults(ex.spec, 1e-4);
    const Omega omega = omega_for(ex.spec, mc, 0.0, 4);
    const double rho = contraction_factor(ex.spec.op.lambda1(), 1.0, ex.reference_K, 0.01);
    for (double y : {-2.0, 1.0, 2.0}) {
        const ManifoldPoint p = solve_manifold_point(ex.spec, omega, std::vector<double>{y}, mc);
        ASSERT_FALSE(p.ratios.empty());
        for (double r : p.ratios) EXPECT_LE(r, rho + 0.05);
    }
}

TEST(SolveManifoldPoint, ZeroSlowValueOfExample2GivesZeroGraph) {
    const ExampleSystem ex = make_example2(1.5, 8, 0.01, 1.0, 1.0);
    const ManifoldConfig mc = ManifoldConfig::defaults(ex.spec, 1e-4);
    const ManifoldPoint p = solve_manifold_point(ex.spec, quiet_omega(1e-4), std::vector<double>{0.0}, mc);
    EXPECT_EQ(p.h_value.norm(), 0.0);
}

TEST(SolveManifoldPoint, IterationCapRaisesWithHistory) {
    const ExampleSystem ex = noisy_example2();
    ManifoldConfig mc = ManifoldConfig::defaults(ex.spec, 1e-4);
    mc.max_iter = 2;
    mc.tol = 1e-300;
    const Omega omega = omega_for(ex.spec, mc, 0.0, 5);
    try {
        solve_manifold_point(ex.spec, omega, std::vector<double>{1.0}, mc);
        FAIL() << "expected ConvergenceError";
    } catch (const ConvergenceError& e) {
        EXPECT_EQ(e.residuals().size(), 2u);
    }
}

TEST(ManifoldGraph, LipschitzAndSolutionDifferenceBounds) {
    const ExampleSystem ex = noisy_example2();
    const ManifoldConfig mc = ManifoldConfig::defaults(ex.spec, 1e-4);
    const Omega omega = omega_for(ex.spec, mc, 0.0, 6);
    const std::vector<SlowVector> ys{{-1.0}, {0.0}, {1.0}};
    const auto graph = solve_manifold_graph(ex.spec, omega, ys, mc);
    const LyapunovPerron lp(ex.spec, omega, mc);
    const double bound = lipschitz_bound(ex.spec.op.lambda1(), 1.0, ex.reference_K, 0.01);
    const double rho = contraction_factor(ex.spec.op.lambda1(), 1.0, ex.reference_K, 0.01);
    for (std::size_t i = 0; i < graph.size(); ++i) {
        for (std::size_t j = i + 1; j < graph.size(); ++j) {
            const double dy = std::abs(ys[i][0] - ys[j][0]);
            EXPECT_LE((graph[i].h_value - graph[j].h_value).norm() / dy, 1.1 * bound);
            const double d = lp.weighted_distance(graph[i].trajectory, graph[j].trajectory);
            EXPECT_LE(d, 1.05 * dy / (1.0 - rho));
        }
    }
}

TEST(ManifoldGraph, SerialAndParallelAgree) {
    const ExampleSystem ex = noisy_example2();
    const ManifoldConfig mc = ManifoldConfig::defaults(ex.spec, 1e-4);
    const Omega omega = omega_for(ex.spec, mc, 0.0, 7);
    const std::vector<SlowVector> ys{{-1.0}, {0.5}, {2.0}};
    const auto a = solve_manifold_graph(ex.spec, omega, ys, mc, kernels::Backend::serial);
    const auto b = solve_manifold_graph(ex.spec, omega, ys, mc, kernels::Backend::openmp);
    for (std::size_t i = 0; i < ys.size(); ++i) EXPECT_EQ(a[i].h_value, b[i].h_value);
}

TEST(ManifoldGraph, InvarianceUnderTheFlow) {
    const ExampleSystem ex = noisy_example2();
    const double dt = 1e-4;
    const ManifoldConfig mc = ManifoldConfig::defaults(ex.spec, dt);
    const Omega omega = omega_for(ex.spec, mc, 0.2, 8);
    const std::vector<double> y0{1.0};
    const ManifoldPoint p = solve_manifold_point(ex.spec, omega, y0, mc);
    const double t = 0.1;
    const Trajectory tr = integrate_random_system(ex.spec, omega, StateZ{p.h_value, y0}, 0.0, t, dt);
    const StateZ zt = tr.state(tr.size() - 1);
    const ManifoldPoint q = solve_manifold_point(ex.spec, shift_omega(omega, t), zt.y, mc);
    EXPECT_LE((zt.x - q.h_value).norm(), 0.05 * std::max(q.h_value.norm(), 1e-3));
}

TEST(BackTransform, AddsTheStationaryFastValue) {
    ExampleSystem ex = make_linear_system(1.5, 3, 0.05, 0.1, 1.0, 1.0);
    ManifoldPoint p;
    p.h_value = SpatialField(3);
    EXPECT_EQ(back_transform_manifold(p, 1.0, ex.spec), SpatialField(3));
    ex.spec.sigma1 = 2.0;
    EXPECT_EQ(back_transform_manifold(p, 1.0, ex.spec), SpatialField::mode(3, 0, 2.0));
    p.h_value = SpatialField(std::vector<double>{0.5, 0.1, 0.0});
    const auto a = back_transform_manifold(p, 0.3, ex.spec);
    const auto b = back_transform_manifold(p, 0.6, ex.spec);
    EXPECT_NEAR((b - p.h_value)[0], 2.0 * (a - p.h_value)[0], 1e-15);
}
