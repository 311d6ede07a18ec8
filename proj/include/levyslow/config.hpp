#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace levyslow {

enum class ExampleId { example1, example2, custom };

std::string to_string(ExampleId id);

/// Everything a CLI run needs. Serialises to JSON; unknown keys are rejected on input.
struct ExperimentConfig {
    ExampleId example = ExampleId::example2;
    double alpha = 1.5;                  // index of the fractional operator
    std::optional<double> alpha1;        // fast noise index; follows alpha when unset
    std::optional<double> alpha2;        // slow noise index; follows alpha when unset
    double epsilon = 0.01;
    double sigma1 = 0.1;
    double sigma2 = 0.0;
    double b = 1.0;                      // slow coupling strength of the second example
    double gamma_J = 1.0;
    double custom_c = 0.1;               // linear test system: f = c Y e1, g = 0
    double custom_J = 1.0;
    int n_modes = 8;
    double dt = 1e-4;
    double horizon = 0.0;                // backward window; 0 selects 1.5 (eps/gamma) ln 1e8
    std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5, 6, 7, 8};
    std::vector<double> y0_grid;         // default: 21 points on [-2, 2]
    std::vector<double> approx_epsilons{0.1, 0.05, 0.025, 0.0125};
    double tracking_y0 = 1.0;
    double tracking_offset = 0.05;       // initial fast displacement off the manifold
    std::string output_dir = "out";

    double alpha_fast() const { return alpha1.value_or(alpha); }
    double alpha_slow() const { return alpha2.value_or(alpha); }

    /// Throws ConfigError naming the offending key.
    void validate() const;
};

ExperimentConfig default_config(ExampleId id = ExampleId::example2);

nlohmann::json to_json(const ExperimentConfig& c);
/// Overlays `j` onto `base`. Throws ConfigError on unknown keys or type mismatches.
ExperimentConfig from_json(const nlohmann::json& j, ExperimentConfig base = default_config());

/// Reads a JSON file. Missing or unparsable files raise ConfigError with key "config".
ExperimentConfig parse_config_file(const std::string& path,
                                   ExperimentConfig base = default_config());

/// Applies one command-line override given as text, e.g. ("epsilon", "0.05").
void apply_override(ExperimentConfig& c, const std::string& key, const std::string& value);

/// Sorted-key compact JSON; the manifest hash is computed over this text.
std::string canonical_json(const ExperimentConfig& c);
std::uint64_t fnv1a64(const std::string& text);
std::string manifest_hash(const ExperimentConfig& c);

}  // namespace levyslow
