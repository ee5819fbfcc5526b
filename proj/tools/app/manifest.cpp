#include "app/manifest.hpp"

#include <cmath>
#include <fstream>

#include "dsf/errors.hpp"

#ifndef DSF_VERSION
#define DSF_VERSION "unknown"
#endif

namespace dsf::app {

std::string tool_version() { return DSF_VERSION; }

json check_to_json(const checks::Check& c) {
    json tol = {{"comparison", checks::to_string(c.comparison)}};
    if (std::isfinite(c.lower)) tol["lower"] = c.lower;
    if (std::isfinite(c.upper)) tol["upper"] = c.upper;
    json j = {
        {"name", c.name},
        {"suite", checks::to_string(c.suite)},
        {"description", c.description},
        {"passed", c.passed},
        {"tolerance", tol},
        {"wall_clock_s", c.wall_clock_s},
    };
    j["measured"] = std::isfinite(c.measured) ? json(c.measured) : json(nullptr);
    if (!c.criterion.empty()) j["criterion"] = c.criterion;
    if (!c.error.empty()) j["error"] = c.error;
    if (!c.info.empty()) {
        json info = json::object();
        for (const auto& [k, v] : c.info) info[k] = v;
        j["info"] = info;
    }
    return j;
}

json RunManifest::to_json() const {
    json tasks_json = json::array();
    for (const auto& t : tasks) {
        json j = {{"id", t.id}, {"status", t.status}, {"wall_clock_s", t.wall_clock_s}};
        if (t.max_deviation) j["max_deviation"] = *t.max_deviation;
        if (!t.error.empty()) j["error"] = t.error;
        if (!t.details.empty()) j["details"] = t.details;
        tasks_json.push_back(j);
    }
    json checks_json = json::array();
    for (const auto& c : checks) checks_json.push_back(check_to_json(c));
    json j = {
        {"tool", "dsf"},
        {"version", tool_version()},
        {"command", command},
        {"config", config},
        {"config_input", config_input},
        {"status", status},
        {"exit_code", exit_code},
        {"tasks", tasks_json},
        {"files", files},
        {"wall_clock_s", wall_clock_s},
    };
    if (config_file) j["config_file"] = *config_file;
    if (!checks.empty()) {
        j["checks"] = checks_json;
        std::size_t passed = 0;
        for (const auto& c : checks) passed += c.passed ? 1 : 0;
        j["checks_passed"] = passed;
        j["checks_total"] = checks.size();
    }
    if (!message.empty()) j["message"] = message;
    return j;
}

std::filesystem::path write_manifest(const std::filesystem::path& dir, const RunManifest& manifest) {
    const auto path = dir / "manifest.json";
    std::ofstream out(path, std::ios::binary);
    if (!out) throw NumericalError("cannot write manifest '" + path.string() + "'");
    out << manifest.to_json().dump(2) << '\n';
    return path;
}

json strip_timing(const json& doc) {
    if (doc.is_object()) {
        json out = json::object();
        for (const auto& [k, v] : doc.items()) {
            if (k != "wall_clock_s") out[k] = strip_timing(v);
        }
        return out;
    }
    if (doc.is_array()) {
        json out = json::array();
        for (const auto& v : doc) out.push_back(strip_timing(v));
        return out;
    }
    return doc;
}

}  // namespace dsf::app
