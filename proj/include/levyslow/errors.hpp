#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace levyslow {

/// Root of the library's exception hierarchy.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated (bad range, grid misalignment, ...).
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// A noise path does not cover the window an evaluation needs.
class WindowError : public InvalidArgument {
public:
    WindowError(const std::string& what, double required_start, double required_end);

    double required_start() const noexcept { return required_start_; }
    double required_end() const noexcept { return required_end_; }

private:
    double required_start_;
    double required_end_;
};

/// Non-finite state or a blown-up quadrature.
class NumericalError : public Error {
public:
    NumericalError(const std::string& what, std::ptrdiff_t step);

    std::ptrdiff_t step() const noexcept { return step_; }

private:
    std::ptrdiff_t step_;
};

/// Fixed-point iteration hit its cap. Carries the residual history.
class ConvergenceError : public NumericalError {
public:
    ConvergenceError(const std::string& what, std::vector<double> residuals);

    const std::vector<double>& residuals() const noexcept { return residuals_; }

private:
    std::vector<double> residuals_;
};

/// Bad configuration value; `key()` names the offending field path.
class ConfigError : public Error {
public:
    ConfigError(const std::string& key, const std::string& message);

    const std::string& key() const noexcept { return key_; }

private:
    std::string key_;
};

}  // namespace levyslow
