#pragma once

// Run configuration: a JSON document keyed by flag names (without the leading
// dashes). Values may be JSON numbers, arrays or strings; strings are parsed
// with the same rules as command-line flags, so a config file and the command
// line are interchangeable.

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "dsf/errors.hpp"
#include "dsf/mode_dynamics.hpp"

namespace dsf::app {

using json = nlohmann::json;

/// Configuration problems map to exit code 2, like any other precondition.
class ConfigError : public PreconditionError {
public:
    using PreconditionError::PreconditionError;
};

/// Strict locale-independent number parsing; accepts a leading '+'.
double parse_number(const std::string& text, const std::string& key);
int parse_integer(const std::string& text, const std::string& key);

/// Grid syntax:
///   "start:end:count"        linear, inclusive endpoints
///   "geom:start:end:count"   geometric, inclusive endpoints
///   "a,b,c" or "a"           explicit list
std::vector<double> parse_grid(const std::string& text, const std::string& key);

json load_config_file(const std::filesystem::path& path);

class RunConfig {
public:
    RunConfig() = default;
    /// Starts from `file_values` and lets every flag in `flags` win.
    RunConfig(json file_values, const std::map<std::string, std::string>& flags);

    bool has(const std::string& key) const;
    double number(const std::string& key, std::optional<double> fallback = std::nullopt) const;
    int integer(const std::string& key, std::optional<int> fallback = std::nullopt) const;
    std::string text(const std::string& key, std::optional<std::string> fallback = std::nullopt) const;
    std::vector<double> grid(const std::string& key, std::optional<std::string> fallback = std::nullopt) const;
    /// Exactly `n` comma-separated numbers (or a JSON array of that length).
    std::vector<double> tuple(const std::string& key, std::size_t n, std::optional<std::string> fallback = std::nullopt) const;

    /// Keys that were read but are unknown to the running command are an error.
    void reject_unknown(const std::set<std::string>& known) const;

    const json& merged() const { return values_; }

private:
    const json* find(const std::string& key) const;
    json values_ = json::object();
};

/// Tolerances from --tol-rel/--tol-abs (or their config keys), validated.
Tolerances integration_tolerances(const RunConfig& cfg, Tolerances fallback = {});

}  // namespace dsf::app
