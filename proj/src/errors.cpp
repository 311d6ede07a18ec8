#include "levyslow/errors.hpp"

#include <sstream>
#include <utility>

namespace levyslow {

namespace {

std::string window_message(const std::string& what, double start, double end) {
    std::ostringstream os;
    os << what << " (path must cover [" << start << ", " << end << "])";
    return os.str();
}

}  // namespace

WindowError::WindowError(const std::string& what, double required_start, double required_end)
    : InvalidArgument(window_message(what, required_start, required_end)),
      required_start_(required_start),
      required_end_(required_end) {}

NumericalError::NumericalError(const std::string& what, std::ptrdiff_t step)
    : Error(what + " at step " + std::to_string(step)), step_(step) {}

ConvergenceError::ConvergenceError(const std::string& what, std::vector<double> residuals)
    : NumericalError(what, static_cast<std::ptrdiff_t>(residuals.size())),
      residuals_(std::move(residuals)) {}

ConfigError::ConfigError(const std::string& key, const std::string& message)
    : Error(key + ": " + message), key_(key) {}

}  // namespace levyslow
