#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "dsf/checks.hpp"

namespace dsf::app {

using json = nlohmann::json;

inline constexpr int kExitOk = 0;
inline constexpr int kExitVerificationFailed = 1;
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitNumericalError = 3;

struct TaskRecord {
    std::string id;
    std::string status = "ok";  // "ok" or "failed"
    std::optional<double> max_deviation;
    std::string error;
    json details = json::object();
    double wall_clock_s = 0.0;
};

struct RunManifest {
    std::string command;
    json config = json::object();        // effective values, defaults filled in
    json config_input = json::object();  // flags and config-file values as given
    std::optional<std::string> config_file;
    std::vector<TaskRecord> tasks;
    std::vector<checks::Check> checks;
    std::vector<std::string> files;  // relative to the manifest's directory
    std::string status = "ok";
    std::string message;
    int exit_code = kExitOk;
    double wall_clock_s = 0.0;

    json to_json() const;
};

std::string tool_version();
json check_to_json(const checks::Check& c);

/// Writes `manifest.json` into `dir` and returns its path.
std::filesystem::path write_manifest(const std::filesystem::path& dir, const RunManifest& manifest);

/// Copy of `doc` with every "wall_clock_s" member removed, recursively.
json strip_timing(const json& doc);

}  // namespace dsf::app
