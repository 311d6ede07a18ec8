#include "levyslow/kernels.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include "levyslow/errors.hpp"

namespace levyslow::kernels {

namespace {

std::vector<double> decay_weights(std::size_t window, double rate_dt) {
    std::vector<double> w(window + 1);
    for (std::size_t d = 0; d <= window; ++d) w[d] = std::exp(-rate_dt * static_cast<double>(d));
    return w;
}

inline double convolve_one(const ConvolutionPlan& p, const std::vector<double>& w,
                           std::size_t j) {
    const std::int64_t node = p.first_node + static_cast<std::int64_t>(j) * p.stride;
    const double* inc = p.increments.data() + (node - p.inc_first);
    double acc = 0.0;
    for (std::size_t d = 1; d <= p.window; ++d) acc += w[d] * inc[-static_cast<std::ptrdiff_t>(d)];
    return p.scale * acc;
}

// Integral of phi(r) r^{-1-a} over [ra, rb] where phi is the hat weight of the
// cell endpoint at distance ra (near) or rb (far) from the evaluation node.
double cell_weight(double ra, double rb, double a, bool near_node) {
    const double h = rb - ra;
    const double p = (std::pow(ra, -a) - std::pow(rb, -a)) / a;            // int r^{-1-a}
    const double q = (std::pow(rb, 1.0 - a) - std::pow(ra, 1.0 - a)) / (1.0 - a);  // int r^{-a}
    return near_node ? (rb * p - q) / h : (q - ra * p) / h;
}

void assemble_row(double a, std::size_t n, double c, std::size_t i, double* row) {
    const std::size_t m = n - 1;
    const double h = 2.0 / static_cast<double>(n);
    const auto node = [h](std::size_t j) { return -1.0 + static_cast<double>(j) * h; };
    const std::size_t ji = i + 1;  // full-grid index of the unknown
    const double ui = node(ji);
    const double ha = std::pow(h, -a);
    const double near_coeff = ha / (2.0 - a);

    for (std::size_t k = 0; k < m; ++k) {
        const std::size_t jk = k + 1;
        if (jk == ji) continue;
        double far = 0.0;
        // Two cells adjacent to node jk: [jk-1, jk] and [jk, jk+1].
        for (int side = 0; side < 2; ++side) {
            const std::size_t lo = side == 0 ? jk - 1 : jk;
            const std::size_t hi = lo + 1;
            if (lo == ji || hi == ji) continue;  // singular cells handled below
            const double d_lo = std::abs(ui - node(lo));
            const double d_hi = std::abs(ui - node(hi));
            const double ra = std::min(d_lo, d_hi);
            const double rb = std::max(d_lo, d_hi);
            const double dk = std::abs(ui - node(jk));
            far += cell_weight(ra, rb, a, dk == ra);
        }
        double entry = -far;
        if (jk + 1 == ji || ji + 1 == jk) entry -= near_coeff;
        row[k] = c * entry;
    }
    // Far cells on both sides plus exterior contribute (2/a) h^{-a} after cancellation;
    // keep the explicit pieces so the row reflects the node's geometry.
    const double left = 1.0 + ui;
    const double right = 1.0 - ui;
    const double far_total = (ha - std::pow(left, -a)) / a + (ha - std::pow(right, -a)) / a;
    const double exterior = (std::pow(left, -a) + std::pow(right, -a)) / a;
    row[i] = c * (far_total + exterior + 2.0 * near_coeff);
}

}  // namespace

void exponential_convolution(const ConvolutionPlan& plan, std::span<double> out,
                             Backend backend) {
    const auto w = decay_weights(plan.window, plan.rate_dt);
    const std::size_t n = out.size();
    if (backend == Backend::serial) {
        for (std::size_t j = 0; j < n; ++j) out[j] = convolve_one(plan, w, j);
        return;
    }
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t j = 0; j < static_cast<std::ptrdiff_t>(n); ++j) {
        out[static_cast<std::size_t>(j)] = convolve_one(plan, w, static_cast<std::size_t>(j));
    }
}

double fractional_constant(double alpha) {
    return std::pow(2.0, alpha) * std::tgamma((1.0 + alpha) / 2.0) /
           (std::sqrt(std::numbers::pi) * std::abs(std::tgamma(-alpha / 2.0)));
}

void assemble_fractional_matrix(double alpha, std::size_t intervals, std::span<double> out,
                                Backend backend) {
    if (!(alpha > 1.0 && alpha < 2.0)) {
        throw InvalidArgument("assemble_fractional_matrix: alpha must lie in (1, 2)");
    }
    if (intervals < 4) throw InvalidArgument("assemble_fractional_matrix: too few intervals");
    const std::size_t m = intervals - 1;
    if (out.size() != m * m) throw InvalidArgument("assemble_fractional_matrix: bad output size");
    const double c = fractional_constant(alpha);
    if (backend == Backend::serial) {
        for (std::size_t i = 0; i < m; ++i) assemble_row(alpha, intervals, c, i, out.data() + i * m);
        return;
    }
#pragma omp parallel for schedule(dynamic, 8)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(m); ++i) {
        const auto row = static_cast<std::size_t>(i);
        assemble_row(alpha, intervals, c, row, out.data() + row * m);
    }
}

}  // namespace levyslow::kernels
