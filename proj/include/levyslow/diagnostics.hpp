#pragma once

#include <json.hpp>

#include "levyslow/config.hpp"

namespace levyslow {

/// Runs the property suites at config-scaled sizes. Each entry of "properties" has a
/// name, a status (pass, fail or skipped), the measured value and its threshold.
/// Properties that depend on the noise are skipped when both intensities are zero.
nlohmann::json run_diagnostics(const ExperimentConfig& cfg);

}  // namespace levyslow
