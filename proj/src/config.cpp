#include "levyslow/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "levyslow/errors.hpp"

namespace levyslow {

using nlohmann::json;

std::string to_string(ExampleId id) {
    switch (id) {
        case ExampleId::example1: return "1";
        case ExampleId::example2: return "2";
        case ExampleId::custom: return "custom";
    }
    return "?";
}

namespace {

ExampleId example_from_string(const std::string& s, const std::string& key) {
    if (s == "1" || s == "example1") return ExampleId::example1;
    if (s == "2" || s == "example2") return ExampleId::example2;
    if (s == "custom") return ExampleId::custom;
    throw ConfigError(key, "expected one of 1, 2, custom; got '" + s + "'");
}

std::vector<double> default_y0_grid() {
    std::vector<double> g;
    for (int i = -10; i <= 10; ++i) g.push_back(i / 5.0);
    return g;
}

void require(bool ok, const std::string& key, const std::string& message) {
    if (!ok) throw ConfigError(key, message);
}

double get_number(const json& v, const std::string& key) {
    if (!v.is_number()) throw ConfigError(key, "expected a number");
    return v.get<double>();
}

int get_int(const json& v, const std::string& key) {
    if (!v.is_number_integer()) throw ConfigError(key, "expected an integer");
    return v.get<int>();
}

std::string get_string(const json& v, const std::string& key) {
    if (!v.is_string()) throw ConfigError(key, "expected a string");
    return v.get<std::string>();
}

std::vector<double> get_number_list(const json& v, const std::string& key) {
    if (!v.is_array()) throw ConfigError(key, "expected an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        out.push_back(get_number(v[i], key + "[" + std::to_string(i) + "]"));
    }
    return out;
}

std::vector<std::uint64_t> get_seed_list(const json& v, const std::string& key) {
    if (!v.is_array()) throw ConfigError(key, "expected an array of non-negative integers");
    std::vector<std::uint64_t> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const std::string k = key + "[" + std::to_string(i) + "]";
        const bool ok = v[i].is_number_unsigned() ||
                        (v[i].is_number_integer() && v[i].get<std::int64_t>() >= 0);
        if (!ok) throw ConfigError(k, "expected a non-negative integer");
        out.push_back(v[i].get<std::uint64_t>());
    }
    return out;
}

double parse_double(const std::string& key, const std::string& text) {
    double v = 0.0;
    const char* b = text.data();
    const char* e = b + text.size();
    auto [p, ec] = std::from_chars(b, e, v);
    if (ec != std::errc() || p != e || text.empty()) {
        throw ConfigError(key, "malformed number '" + text + "'");
    }
    return v;
}

long long parse_integer(const std::string& key, const std::string& text) {
    long long v = 0;
    const char* b = text.data();
    const char* e = b + text.size();
    auto [p, ec] = std::from_chars(b, e, v);
    if (ec != std::errc() || p != e || text.empty()) {
        throw ConfigError(key, "malformed integer '" + text + "'");
    }
    return v;
}

}  // namespace

ExperimentConfig default_config(ExampleId id) {
    ExperimentConfig c;
    c.example = id;
    c.y0_grid = default_y0_grid();
    if (id == ExampleId::custom) {
        c.sigma1 = 0.0;
        c.epsilon = 0.05;
    }
    return c;
}

void ExperimentConfig::validate() const {
    auto in_open = [](double v, double lo, double hi) { return v > lo && v < hi; };
    require(in_open(alpha, 1.0, 2.0), "alpha", "must lie in (1, 2)");
    if (alpha1) require(in_open(*alpha1, 1.0, 2.0), "alpha1", "must lie in (1, 2)");
    if (alpha2) require(in_open(*alpha2, 1.0, 2.0), "alpha2", "must lie in (1, 2)");
    require(in_open(epsilon, 0.0, 1.0), "epsilon", "must lie in (0, 1)");
    require(sigma1 >= 0.0 && std::isfinite(sigma1), "sigma1", "must be a finite value >= 0");
    require(sigma2 >= 0.0 && std::isfinite(sigma2), "sigma2", "must be a finite value >= 0");
    require(b >= 0.0 && std::isfinite(b), "b", "must be a finite value >= 0");
    require(gamma_J > 0.0 && std::isfinite(gamma_J), "gamma_J", "must be > 0");
    require(std::isfinite(custom_c), "custom_c", "must be finite");
    require(std::isfinite(custom_J), "custom_J", "must be finite");
    require(n_modes >= 1 && n_modes <= 512, "n_modes", "must lie in [1, 512]");
    require(dt > 0.0 && dt <= 1e-2, "dt", "must lie in (0, 0.01]");
    require(horizon >= 0.0 && std::isfinite(horizon), "horizon", "must be >= 0 (0 selects the default)");
    require(!seeds.empty(), "seeds", "must not be empty");
    require(!y0_grid.empty(), "y0_grid", "must not be empty");
    for (std::size_t i = 0; i < y0_grid.size(); ++i) {
        require(std::isfinite(y0_grid[i]), "y0_grid[" + std::to_string(i) + "]", "must be finite");
    }
    require(!approx_epsilons.empty(), "approx_epsilons", "must not be empty");
    for (std::size_t i = 0; i < approx_epsilons.size(); ++i) {
        require(in_open(approx_epsilons[i], 0.0, 1.0),
                "approx_epsilons[" + std::to_string(i) + "]", "must lie in (0, 1)");
    }
    require(std::isfinite(tracking_y0), "tracking_y0", "must be finite");
    require(std::isfinite(tracking_offset), "tracking_offset", "must be finite");
    require(!output_dir.empty(), "output_dir", "must not be empty");
    if (example == ExampleId::example2) {
        require(sigma2 == 0.0, "sigma2",
                "must be 0 for example 2: with J = -1 the stationary slow integral diverges");
    }
    if (example == ExampleId::custom) {
        require(sigma2 == 0.0 || custom_J > 0.0, "sigma2",
                "must be 0 unless custom_J > 0 (stationary slow integral diverges otherwise)");
    }
}

json to_json(const ExperimentConfig& c) {
    json j;
    j["example"] = to_string(c.example);
    j["alpha"] = c.alpha;
    j["alpha1"] = c.alpha1 ? json(*c.alpha1) : json(nullptr);
    j["alpha2"] = c.alpha2 ? json(*c.alpha2) : json(nullptr);
    j["epsilon"] = c.epsilon;
    j["sigma1"] = c.sigma1;
    j["sigma2"] = c.sigma2;
    j["b"] = c.b;
    j["gamma_J"] = c.gamma_J;
    j["custom_c"] = c.custom_c;
    j["custom_J"] = c.custom_J;
    j["n_modes"] = c.n_modes;
    j["dt"] = c.dt;
    j["horizon"] = c.horizon;
    j["seeds"] = c.seeds;
    j["y0_grid"] = c.y0_grid;
    j["approx_epsilons"] = c.approx_epsilons;
    j["tracking_y0"] = c.tracking_y0;
    j["tracking_offset"] = c.tracking_offset;
    j["output_dir"] = c.output_dir;
    return j;
}

ExperimentConfig from_json(const json& j, ExperimentConfig c) {
    if (!j.is_object()) throw ConfigError("config", "top level must be a JSON object");
    for (auto it = j.begin(); it != j.end(); ++it) {
        const std::string& k = it.key();
        const json& v = it.value();
        if (k == "example") {
            c.example = example_from_string(v.is_number_integer() ? std::to_string(v.get<int>())
                                                                  : get_string(v, k),
                                            k);
        } else if (k == "alpha") {
            c.alpha = get_number(v, k);
        } else if (k == "alpha1") {
            c.alpha1 = v.is_null() ? std::nullopt : std::optional<double>(get_number(v, k));
        } else if (k == "alpha2") {
            c.alpha2 = v.is_null() ? std::nullopt : std::optional<double>(get_number(v, k));
        } else if (k == "epsilon") {
            c.epsilon = get_number(v, k);
        } else if (k == "sigma1") {
            c.sigma1 = get_number(v, k);
        } else if (k == "sigma2") {
            c.sigma2 = get_number(v, k);
        } else if (k == "b") {
            c.b = get_number(v, k);
        } else if (k == "gamma_J") {
            c.gamma_J = get_number(v, k);
        } else if (k == "custom_c") {
            c.custom_c = get_number(v, k);
        } else if (k == "custom_J") {
            c.custom_J = get_number(v, k);
        } else if (k == "n_modes") {
            c.n_modes = get_int(v, k);
        } else if (k == "dt") {
            c.dt = get_number(v, k);
        } else if (k == "horizon") {
            c.horizon = get_number(v, k);
        } else if (k == "seeds") {
            c.seeds = get_seed_list(v, k);
        } else if (k == "y0_grid") {
            c.y0_grid = get_number_list(v, k);
        } else if (k == "approx_epsilons") {
            c.approx_epsilons = get_number_list(v, k);
        } else if (k == "tracking_y0") {
            c.tracking_y0 = get_number(v, k);
        } else if (k == "tracking_offset") {
            c.tracking_offset = get_number(v, k);
        } else if (k == "output_dir") {
            c.output_dir = get_string(v, k);
        } else {
            throw ConfigError(k, "unknown key");
        }
    }
    return c;
}

ExperimentConfig parse_config_file(const std::string& path, ExperimentConfig base) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config", "cannot open file '" + path + "'");
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("config", std::string("malformed JSON in '") + path + "': " + e.what());
    }
    return from_json(j, std::move(base));
}

void apply_override(ExperimentConfig& c, const std::string& key, const std::string& value) {
    if (key == "epsilon") {
        c.epsilon = parse_double(key, value);
    } else if (key == "alpha") {
        c.alpha = parse_double(key, value);
    } else if (key == "dt") {
        c.dt = parse_double(key, value);
    } else if (key == "modes" || key == "n_modes") {
        c.n_modes = static_cast<int>(parse_integer("n_modes", value));
    } else if (key == "seed") {
        const long long s = parse_integer("seeds", value);
        if (s < 0) throw ConfigError("seeds", "seed must be non-negative");
        c.seeds = {static_cast<std::uint64_t>(s)};
    } else if (key == "out" || key == "output_dir") {
        c.output_dir = value;
    } else {
        throw ConfigError(key, "unknown override");
    }
}

std::string canonical_json(const ExperimentConfig& c) {
    json j = to_json(c);
    // Output location is not part of an experiment's identity.
    j.erase("output_dir");
    return j.dump();
}

std::uint64_t fnv1a64(const std::string& text) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    return h;
}

std::string manifest_hash(const ExperimentConfig& c) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(canonical_json(c))));
    return buf;
}

}  // namespace levyslow
