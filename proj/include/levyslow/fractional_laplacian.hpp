#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "levyslow/kernels.hpp"

namespace levyslow {

/// Field in L^2(-1, 1) stored as coefficients in the operator's orthonormal mode basis.
class SpatialField {
public:
    SpatialField() = default;
    explicit SpatialField(std::size_t n_modes) : coeffs_(n_modes, 0.0) {}
    explicit SpatialField(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) {}

    static SpatialField mode(std::size_t n_modes, std::size_t k, double amplitude = 1.0);

    std::size_t size() const noexcept { return coeffs_.size(); }
    double operator[](std::size_t k) const { return coeffs_[k]; }
    double& operator[](std::size_t k) { return coeffs_[k]; }
    std::span<const double> coefficients() const noexcept { return coeffs_; }
    std::span<double> coefficients() noexcept { return coeffs_; }

    /// L^2 norm (Parseval).
    double norm() const;

    SpatialField& operator+=(const SpatialField& other);
    SpatialField& operator-=(const SpatialField& other);
    SpatialField& operator*=(double s);

    friend SpatialField operator+(SpatialField a, const SpatialField& b) { return a += b; }
    friend SpatialField operator-(SpatialField a, const SpatialField& b) { return a -= b; }
    friend SpatialField operator*(double s, SpatialField a) { return a *= s; }
    friend bool operator==(const SpatialField&, const SpatialField&) = default;

private:
    std::vector<double> coeffs_;
};

/// (l pi / 2 - (2 - alpha) pi / 8)^alpha, the large-l eigenvalue law of
/// (-Delta)^{alpha/2} on (-1, 1) without its O(1/l) remainder. l >= 1, 1 < alpha <= 2.
double eigenvalue_asymptotic(int l, double alpha);

/// Truncated spectral representation of A = -(-Delta)^{alpha/2} on (-1, 1).
///
/// Mode k (0-based) is sin((k+1) pi (u+1) / 2), which is orthonormal on (-1, 1).
/// Eigenvalue k is eigenvalue_asymptotic(k + 1, alpha).
class SpectralOperator {
public:
    SpectralOperator(double alpha, std::size_t n_modes);

    double alpha() const noexcept { return alpha_; }
    std::size_t n_modes() const noexcept { return eigenvalues_.size(); }
    std::span<const double> eigenvalues() const noexcept { return eigenvalues_; }
    double eigenvalue(std::size_t k) const { return eigenvalues_.at(k); }
    double lambda1() const noexcept { return eigenvalues_.front(); }

    /// Integral of mode k over (-1, 1), precomputed by Gauss-Legendre quadrature.
    std::span<const double> mode_integrals() const noexcept { return mode_integrals_; }
    static double mode_value(std::size_t k, double u);

    /// Coefficients of the constant function 1 (its L^2 projection onto the modes).
    SpatialField constant_profile() const;

private:
    double alpha_;
    std::vector<double> eigenvalues_;
    std::vector<double> mode_integrals_;
};

SpectralOperator build_operator(double alpha, std::size_t n_modes);

/// e^{A t} applied mode-wise: coefficient k is multiplied by exp(-lambda_k t).
SpatialField apply_semigroup(const SpectralOperator& op, const SpatialField& field, double t);

/// Integral of the field over (-1, 1).
double integrate_field(const SpectralOperator& op, std::span<const double> coefficients);
double integrate_field(const SpectralOperator& op, const SpatialField& field);

/// Eigen-decomposition of a dense quadrature discretisation of the operator,
/// used as an independent check on eigenvalue_asymptotic.
struct QuadratureSpectrum {
    std::vector<double> nodes;                 // interior grid nodes
    std::vector<double> eigenvalues;           // ascending
    std::vector<std::vector<double>> vectors;  // eigenvectors on `nodes`
    double asymmetry = 0.0;                    // max |A - A^T| / max |A|
};

/// grid_points uniform cells on [-1, 1]; returns the `count` smallest eigenpairs.
QuadratureSpectrum quadrature_spectrum(double alpha, std::size_t grid_points, std::size_t count,
                                       kernels::Backend backend = kernels::Backend::openmp);

/// l-th smallest eigenvalue of the quadrature discretisation (l >= 1, l <= grid_points / 4).
double quadrature_eigenvalue_oracle(double alpha, int l, std::size_t grid_points);

}  // namespace levyslow
