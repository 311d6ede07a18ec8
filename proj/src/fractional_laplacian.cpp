#include "levyslow/fractional_laplacian.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "levyslow/errors.hpp"

namespace levyslow {

namespace {

constexpr double pi = std::numbers::pi;

// 20-point Gauss-Legendre on [-1, 1], applied per sub-panel.
double gauss_legendre(auto&& fn, int panels) {
    static const double x[10] = {0.0765265211334973, 0.2277858511416451, 0.3737060887154195,
                                 0.5108670019508271, 0.6360536807265150, 0.7463319064601508,
                                 0.8391169718222188, 0.9122344282513259, 0.9639719272779138,
                                 0.9931285991850949};
    static const double w[10] = {0.1527533871307258, 0.1491729864726037, 0.1420961093183820,
                                 0.1316886384491766, 0.1181945319615184, 0.1019301198172404,
                                 0.0832767415767048, 0.0626720483341091, 0.0406014298003869,
                                 0.0176140071391521};
    const double width = 2.0 / panels;
    double sum = 0.0;
    for (int p = 0; p < panels; ++p) {
        const double mid = -1.0 + (p + 0.5) * width;
        const double half = width / 2.0;
        for (int i = 0; i < 10; ++i) {
            sum += w[i] * half * (fn(mid - half * x[i]) + fn(mid + half * x[i]));
        }
    }
    return sum;
}

}  // namespace

SpatialField SpatialField::mode(std::size_t n_modes, std::size_t k, double amplitude) {
    SpatialField f(n_modes);
    f.coeffs_.at(k) = amplitude;
    return f;
}

double SpatialField::norm() const {
    double s = 0.0;
    for (double c : coeffs_) s += c * c;
    return std::sqrt(s);
}

SpatialField& SpatialField::operator+=(const SpatialField& other) {
    if (other.size() != size()) throw InvalidArgument("SpatialField: dimension mismatch");
    for (std::size_t k = 0; k < size(); ++k) coeffs_[k] += other.coeffs_[k];
    return *this;
}

SpatialField& SpatialField::operator-=(const SpatialField& other) {
    if (other.size() != size()) throw InvalidArgument("SpatialField: dimension mismatch");
    for (std::size_t k = 0; k < size(); ++k) coeffs_[k] -= other.coeffs_[k];
    return *this;
}

SpatialField& SpatialField::operator*=(double s) {
    for (double& c : coeffs_) c *= s;
    return *this;
}

double eigenvalue_asymptotic(int l, double alpha) {
    if (l < 1) throw InvalidArgument("eigenvalue_asymptotic: index must be >= 1");
    if (!(alpha > 1.0 && alpha <= 2.0)) {
        throw InvalidArgument("eigenvalue_asymptotic: alpha must lie in (1, 2]");
    }
    return std::pow(l * pi / 2.0 - (2.0 - alpha) * pi / 8.0, alpha);
}

SpectralOperator::SpectralOperator(double alpha, std::size_t n_modes) : alpha_(alpha) {
    if (n_modes < 1) throw InvalidArgument("SpectralOperator: need at least one mode");
    eigenvalues_.reserve(n_modes);
    mode_integrals_.reserve(n_modes);
    for (std::size_t k = 0; k < n_modes; ++k) {
        eigenvalues_.push_back(eigenvalue_asymptotic(static_cast<int>(k + 1), alpha));
        const int panels = 4 + static_cast<int>(k);
        mode_integrals_.push_back(gauss_legendre([k](double u) { return mode_value(k, u); }, panels));
    }
}

double SpectralOperator::mode_value(std::size_t k, double u) {
    return std::sin(static_cast<double>(k + 1) * pi * (u + 1.0) / 2.0);
}

SpatialField SpectralOperator::constant_profile() const {
    return SpatialField(std::vector<double>(mode_integrals_.begin(), mode_integrals_.end()));
}

SpectralOperator build_operator(double alpha, std::size_t n_modes) {
    return SpectralOperator(alpha, n_modes);
}

SpatialField apply_semigroup(const SpectralOperator& op, const SpatialField& field, double t) {
    if (!(t >= 0.0)) throw InvalidArgument("apply_semigroup: t must be >= 0");
    if (field.size() != op.n_modes()) throw InvalidArgument("apply_semigroup: dimension mismatch");
    SpatialField out = field;
    for (std::size_t k = 0; k < out.size(); ++k) out[k] *= std::exp(-op.eigenvalue(k) * t);
    return out;
}

double integrate_field(const SpectralOperator& op, std::span<const double> coefficients) {
    const auto integrals = op.mode_integrals();
    double s = 0.0;
    for (std::size_t k = 0; k < coefficients.size(); ++k) s += coefficients[k] * integrals[k];
    return s;
}

double integrate_field(const SpectralOperator& op, const SpatialField& field) {
    if (field.size() != op.n_modes()) throw InvalidArgument("integrate_field: dimension mismatch");
    return integrate_field(op, field.coefficients());
}

QuadratureSpectrum quadrature_spectrum(double alpha, std::size_t grid_points, std::size_t count,
                                       kernels::Backend backend) {
    if (grid_points < 64) throw InvalidArgument("quadrature_spectrum: need >= 64 grid points");
    const std::size_t m = grid_points - 1;
    count = std::min(count, m);

    std::vector<double> dense(m * m);
    kernels::assemble_fractional_matrix(alpha, grid_points, dense, backend);
    Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> a(
        dense.data(), static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));

    QuadratureSpectrum out;
    const double scale = a.cwiseAbs().maxCoeff();
    out.asymmetry = (a - a.transpose()).cwiseAbs().maxCoeff() / scale;
    if (out.asymmetry > 1e-9) {
        throw NumericalError("quadrature_spectrum: assembled matrix is not symmetric (" +
                                 std::to_string(out.asymmetry) + ")",
                             0);
    }

    const Eigen::MatrixXd sym = 0.5 * (a + a.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sym);
    if (solver.info() != Eigen::Success) {
        throw NumericalError("quadrature_spectrum: eigen-decomposition failed", 0);
    }
    const double h = 2.0 / static_cast<double>(grid_points);
    out.nodes.resize(m);
    for (std::size_t i = 0; i < m; ++i) out.nodes[i] = -1.0 + static_cast<double>(i + 1) * h;
    for (std::size_t l = 0; l < count; ++l) {
        out.eigenvalues.push_back(solver.eigenvalues()(static_cast<Eigen::Index>(l)));
        const auto col = solver.eigenvectors().col(static_cast<Eigen::Index>(l));
        out.vectors.emplace_back(col.data(), col.data() + m);
    }
    return out;
}

double quadrature_eigenvalue_oracle(double alpha, int l, std::size_t grid_points) {
    if (l < 1 || static_cast<std::size_t>(l) > grid_points / 4) {
        throw InvalidArgument("quadrature_eigenvalue_oracle: need 1 <= l <= grid_points / 4");
    }
    return quadrature_spectrum(alpha, grid_points, static_cast<std::size_t>(l))
        .eigenvalues.at(static_cast<std::size_t>(l - 1));
}

}  // namespace levyslow
