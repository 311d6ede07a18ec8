#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

// Data-parallel inner loops. Every kernel has a serial reference path and an
// OpenMP path; both perform the same floating-point operations in the same
// order per output element, so their results agree bit-for-bit.

namespace levyslow::kernels {

enum class Backend { serial, openmp };

/// Truncated left-point exponential convolution evaluated at a set of grid nodes.
///
///   out[j] = scale * sum_{d=1..window} exp(-rate_dt * d) * inc[node_j - d]
///
/// where node_j = first_node + j * stride is an absolute grid index and
/// inc[n] is the increment stored at absolute index n, i.e.
/// increments[n - inc_first]. Callers guarantee every touched index is valid.
struct ConvolutionPlan {
    std::span<const double> increments;
    std::int64_t inc_first = 0;
    std::int64_t first_node = 0;
    std::int64_t stride = 1;
    std::size_t window = 0;
    double rate_dt = 0.0;
    double scale = 1.0;
};

void exponential_convolution(const ConvolutionPlan& plan, std::span<double> out, Backend backend);

/// Dense matrix of the fractional Laplacian (-Delta)^{alpha/2} on (-1, 1) with zero
/// exterior values, on `intervals` uniform cells (intervals - 1 interior unknowns).
/// Writes a row-major (intervals-1)^2 matrix into `out`.
void assemble_fractional_matrix(double alpha, std::size_t intervals, std::span<double> out,
                                Backend backend);

/// Normalisation constant 2^a Gamma((1+a)/2) / (sqrt(pi) |Gamma(-a/2)|).
double fractional_constant(double alpha);

}  // namespace levyslow::kernels
