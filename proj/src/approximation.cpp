#include "levyslow/approximation.hpp"

#include <cmath>
#include <vector>

#include "levyslow/errors.hpp"

namespace levyslow {

namespace {

constexpr double kRelativeStep = 1e-5;

// Weighted sup-distance between two flat fast-component arrays.
double weighted_fast_distance(const LyapunovPerron& lp, std::span<const double> a,
                              std::span<const double> b) {
    const std::size_t n = lp.spec().n_modes();
    const double rate = weight_rate(lp.spec());
    double best = 0.0;
    for (std::size_t j = 0; j < lp.points(); ++j) {
        double s = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            const double d = a[j * n + k] - b[j * n + k];
            s += d * d;
        }
        best = std::max(best, std::exp(rate * lp.time(j)) * std::sqrt(s));
    }
    return best;
}

template <class Rhs>
std::size_t iterate_fast(const LyapunovPerron& lp, std::vector<double>& X, Rhs&& rhs,
                         const char* what) {
    const auto& cfg = lp.config();
    std::vector<double> F(X.size()), next(X.size());
    std::vector<double> residuals;
    for (std::size_t it = 1; it <= cfg.max_iter; ++it) {
        rhs(X, F);
        lp.convolve_fast(F, next);
        for (double v : next) {
            if (!std::isfinite(v)) throw NumericalError(what, static_cast<std::ptrdiff_t>(it));
        }
        const double d = weighted_fast_distance(lp, next, X);
        residuals.push_back(d);
        X.swap(next);
        if (d <= cfg.tol) return it;
    }
    throw ConvergenceError(what, residuals);
}

}  // namespace

SpatialField ApproxTerms::order(int k) const {
    if (k == 0) return h0;
    if (k == 1) return h0 + epsilon * h1;
    throw InvalidArgument("approx_manifold: order must be 0 or 1");
}

ApproxTerms approx_manifold_terms(const SystemSpec& spec, const Omega& omega,
                                  std::span<const double> y0, const ManifoldConfig& config) {
    if (y0.size() != spec.slow_dim) throw InvalidArgument("approx_manifold: y0 has wrong size");
    const LyapunovPerron lp(spec, omega, config);
    const std::size_t n = spec.n_modes();
    const std::size_t m = spec.slow_dim;
    const std::size_t P = lp.points();
    const NoiseSamples& noise = lp.noise();

    // Shifted arguments with the slow variable frozen at y0.
    std::vector<double> bx(n), by(m);
    auto set_base = [&](std::span<const double> x, std::size_t j) {
        for (std::size_t k = 0; k < n; ++k) bx[k] = x[k];
        bx[0] += noise.eta[j];
        const auto xi = noise.xi_at(j);
        for (std::size_t i = 0; i < m; ++i) by[i] = y0[i] + xi[i];
    };

    ApproxTerms out;
    out.epsilon = spec.epsilon;

    std::vector<double> X0(P * n, 0.0);
    out.iterations0 = iterate_fast(
        lp, X0,
        [&](const std::vector<double>& X, std::vector<double>& F) {
            for (std::size_t j = 0; j < P; ++j) {
                set_base({X.data() + j * n, n}, j);
                spec.f(bx, by, {F.data() + j * n, n});
            }
        },
        "approx_manifold: order-0 iteration did not converge");
    out.h0 = SpatialField(std::vector<double>(X0.end() - static_cast<std::ptrdiff_t>(n), X0.end()));

    // D(t) = int_0^t [J y0 + g] dr, accumulated backward from t = 0.
    std::vector<double> D(P * m, 0.0), rate(P * m), go(m);
    for (std::size_t j = 0; j < P; ++j) {
        set_base({X0.data() + j * n, n}, j);
        spec.g(bx, by, go);
        for (std::size_t i = 0; i < m; ++i) rate[j * m + i] = spec.J[i] * y0[i] + go[i];
    }
    const double h = 0.5 * config.dt;
    for (std::size_t j = P - 1; j-- > 0;) {
        for (std::size_t i = 0; i < m; ++i) {
            D[j * m + i] = D[(j + 1) * m + i] - h * (rate[j * m + i] + rate[(j + 1) * m + i]);
        }
    }

    std::vector<double> px(n), py(m), mx(n), my(m), fp(n), fm(n);
    std::vector<double> W(P * n, 0.0);
    out.iterations1 = iterate_fast(
        lp, W,
        [&](const std::vector<double>& Wc, std::vector<double>& R) {
            for (std::size_t j = 0; j < P; ++j) {
                set_base({X0.data() + j * n, n}, j);
                const double* w = Wc.data() + j * n;
                const double* d = D.data() + j * m;
                double nv = euclidean_norm({w, n}) + euclidean_norm({d, m});
                double* r = R.data() + j * n;
                if (nv == 0.0) {
                    std::fill(r, r + n, 0.0);
                    continue;
                }
                const double tau =
                    kRelativeStep * std::max(1.0, euclidean_norm(bx) + euclidean_norm(by)) / nv;
                for (std::size_t k = 0; k < n; ++k) {
                    px[k] = bx[k] + tau * w[k];
                    mx[k] = bx[k] - tau * w[k];
                }
                for (std::size_t i = 0; i < m; ++i) {
                    py[i] = by[i] + tau * d[i];
                    my[i] = by[i] - tau * d[i];
                }
                spec.f(px, py, fp);
                spec.f(mx, my, fm);
                for (std::size_t k = 0; k < n; ++k) r[k] = (fp[k] - fm[k]) / (2.0 * tau);
            }
        },
        "approx_manifold: first-order iteration did not converge");
    out.h1 = SpatialField(std::vector<double>(W.end() - static_cast<std::ptrdiff_t>(n), W.end()));
    out.h1 *= 1.0 / spec.epsilon;
    return out;
}

SpatialField approx_manifold(const SystemSpec& spec, const Omega& omega,
                             std::span<const double> y0, int order, const ManifoldConfig& config) {
    if (order != 0 && order != 1) throw InvalidArgument("approx_manifold: order must be 0 or 1");
    return approx_manifold_terms(spec, omega, y0, config).order(order);
}

}  // namespace levyslow
