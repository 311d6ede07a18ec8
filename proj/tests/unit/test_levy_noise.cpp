#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "levyslow/errors.hpp"
#include "levyslow/levy_noise.hpp"

using namespace levyslow;

TEST(StableParams, RejectsOutOfRangeArguments) {
    EXPECT_THROW(StableParams(1.0, 1.0), InvalidArgument);
    EXPECT_THROW(StableParams(2.0, 1.0), InvalidArgument);
    EXPECT_THROW(StableParams(2.5, 1.0), InvalidArgument);
    EXPECT_THROW(StableParams(1.5, -0.1), InvalidArgument);
    EXPECT_NO_THROW(StableParams(1.5, 0.0));
}

TEST(RngStream, SameKeyGivesSameSequence) {
    RngStream a(42, 3), b(42, 3), c(42, 4);
    bool differs = false;
    for (int i = 0; i < 100; ++i) {
        const double u = a.uniform_open();
        EXPECT_EQ(u, b.uniform_open());
        differs |= (u != c.uniform_open());
        EXPECT_GT(u, 0.0);
        EXPECT_LT(u, 1.0);
    }
    EXPECT_TRUE(differs);
}

TEST(StableSampler, ZeroScaleGivesZeroIncrement) {
    RngStream rng(1, 0);
    EXPECT_EQ(sample_stable_increment(StableParams(1.5, 0.0), 0.1, rng), 0.0);
}

TEST(StableSampler, CharacteristicFunctionMatches) {
    for (double alpha : {1.2, 1.8}) {
        RngStream rng(11, 0);
        const int n = 100000;
        std::vector<double> xs(n);
        for (double& x : xs) x = sample_standard_stable(alpha, rng);
        for (double theta : {0.5, 1.0, 2.0}) {
            double c = 0.0;
            for (double x : xs) c += std::cos(theta * x);
            EXPECT_NEAR(c / n, std::exp(-std::pow(theta, alpha)), 0.01)
                << "alpha " << alpha << " theta " << theta;
        }
    }
}

TEST(StableSampler, MedianIsNearZero) {
    RngStream rng(5, 0);
    std::vector<double> xs(20001);
    for (double& x : xs) x = sample_standard_stable(1.5, rng);
    std::nth_element(xs.begin(), xs.begin() + 10000, xs.end());
    EXPECT_NEAR(xs[10000], 0.0, 0.03);
}

TEST(NoisePath, SampledWindowAndAnchor) {
    RngStream rng(2, 0);
    const NoisePath p = sample_path(StableParams(1.5, 1.0), -0.5, 1.0, 0.01, rng);
    EXPECT_EQ(p.first_index(), -50);
    EXPECT_EQ(p.last_index(), 100);
    EXPECT_EQ(p.steps(), 150u);
    EXPECT_EQ(p.value_at(0.0), 0.0);
    EXPECT_TRUE(p.covers(-0.5, 1.0));
    EXPECT_FALSE(p.covers(-0.6, 1.0));
    double sum = 0.0;
    for (std::int64_t n = 0; n < 30; ++n) sum += p.increment_at_index(n);
    EXPECT_NEAR(p.value_at(0.3), sum, 1e-12);
}

TEST(NoisePath, AnchorsAtWindowStartWhenOriginOutside) {
    const NoisePath p(10, 0.1, {1.0, 2.0, 3.0});
    EXPECT_EQ(p.anchor_index(), 10);
    EXPECT_EQ(p.value_at_index(10), 0.0);
    EXPECT_EQ(p.value_at_index(13), 6.0);
}

TEST(NoisePath, MisalignedWindowIsRejected) {
    RngStream rng(2, 0);
    EXPECT_THROW(sample_path(StableParams(1.5, 1.0), 0.0, 1.0005, 0.01, rng), InvalidArgument);
    const NoisePath p(0, 0.1, {1.0, 2.0});
    EXPECT_THROW(p.value_at(0.05), InvalidArgument);
    EXPECT_THROW(p.value_at(0.5), WindowError);
}

TEST(ShiftPath, DefinitionAndExactFlow) {
    RngStream rng(9, 0);
    const NoisePath p = sample_path(StableParams(1.5, 1.0), -1.0, 1.0, 0.01, rng);
    const NoisePath s = shift_path(p, 0.25);
    for (double t : {-0.5, 0.0, 0.1, 0.5}) {
        EXPECT_NEAR(s.value_at(t), p.value_at(t + 0.25) - p.value_at(0.25), 1e-12);
    }
    const NoisePath ab = shift_path(shift_path(p, 0.25), 0.3);
    const NoisePath direct = shift_path(p, 0.55);
    for (double t : {-1.2, -0.3, 0.0, 0.2}) EXPECT_EQ(ab.value_at(t), direct.value_at(t));
    EXPECT_EQ(shift_path(p, 0.0).value_at(0.7), p.value_at(0.7));
}

TEST(ShiftPath, RejectsOffGridAndOutOfWindowShifts) {
    const NoisePath p(0, 0.1, {1.0, 2.0, 3.0});
    EXPECT_THROW(shift_path(p, 0.05), InvalidArgument);
    EXPECT_THROW(shift_path(p, 0.5), WindowError);
}

TEST(SelfSimilarity, KsAcceptsScaledIncrements) {
    for (double c : {0.25, 4.0}) {
        RngStream rng(21, static_cast<std::uint64_t>(c * 100));
        const KsResult r = self_similarity_statistic(StableParams(1.5, 1.0), c, 10000, rng);
        EXPECT_GT(r.p_value, 0.001) << "c = " << c;
    }
}

TEST(SelfSimilarity, DetectsWrongExponent) {
    // Scaling with the Gaussian exponent 1/2 must be rejected for alpha = 1.2.
    RngStream rng(22, 0);
    const StableParams params(1.2, 1.0);
    std::vector<double> lhs(10000), rhs(10000);
    for (auto& v : lhs) {
        v = 0.0;
        for (int k = 0; k < 8; ++k) v += sample_stable_increment(params, 0.5, rng);
    }
    for (auto& v : rhs) v = std::sqrt(4.0) * sample_stable_increment(params, 1.0, rng);
    EXPECT_LT(ks_two_sample(lhs, rhs).p_value, 0.001);
}
