#pragma once

#include <cstddef>
#include <span>

#include "levyslow/slow_manifold.hpp"

namespace levyslow {

/// Leading terms of the small-eps expansion H^eps = H0 + eps H1 + O(eps^2).
struct ApproxTerms {
    SpatialField h0;
    SpatialField h1;
    double epsilon = 0.0;
    std::size_t iterations0 = 0;
    std::size_t iterations1 = 0;

    /// order 0: h0; order 1: h0 + eps h1.
    SpatialField order(int k) const;
};

/// H0 is the fast fixed point with the slow variable frozen at y0. The correction
/// W = eps H1 solves the fast equation linearised along X0 and forced by
/// f_Y D(t), D(t) = int_0^t [J y0 + g(X0, y0)] dr. Derivatives are central differences
/// with relative step 1e-5.
ApproxTerms approx_manifold_terms(const SystemSpec& spec, const Omega& omega,
                                  std::span<const double> y0, const ManifoldConfig& config);

SpatialField approx_manifold(const SystemSpec& spec, const Omega& omega,
                             std::span<const double> y0, int order, const ManifoldConfig& config);

}  // namespace levyslow
