#include "app/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "dsf/numerics.hpp"

namespace dsf::app {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\n\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\n\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream is(s);
    while (std::getline(is, cur, sep)) out.push_back(trim(cur));
    if (!s.empty() && s.back() == sep) out.emplace_back();
    return out;
}

std::string describe(const json& v) { return v.dump(); }

}  // namespace

double parse_number(const std::string& raw, const std::string& key) {
    std::string text = trim(raw);
    if (!text.empty() && text.front() == '+') text.erase(0, 1);
    double value = 0.0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (text.empty() || ec != std::errc() || ptr != last || !std::isfinite(value))
        throw ConfigError("--" + key + ": '" + raw + "' is not a finite number");
    return value;
}

int parse_integer(const std::string& raw, const std::string& key) {
    std::string text = trim(raw);
    if (!text.empty() && text.front() == '+') text.erase(0, 1);
    int value = 0;
    const char* last = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), last, value);
    if (text.empty() || ec != std::errc() || ptr != last)
        throw ConfigError("--" + key + ": '" + raw + "' is not an integer");
    return value;
}

std::vector<double> parse_grid(const std::string& raw, const std::string& key) {
    const std::string text = trim(raw);
    if (text.empty()) throw ConfigError("--" + key + ": empty list");
    if (text.find(':') != std::string::npos) {
        auto parts = split(text, ':');
        const bool geometric = parts.front() == "geom";
        if (geometric) parts.erase(parts.begin());
        if (parts.size() != 3)
            throw ConfigError("--" + key + ": expected start:end:count or geom:start:end:count, got '" + raw + "'");
        const double start = parse_number(parts[0], key);
        const double end = parse_number(parts[1], key);
        const int count = parse_integer(parts[2], key);
        if (count < 1) throw ConfigError("--" + key + ": grid count must be at least 1");
        if (count == 1 && start != end) throw ConfigError("--" + key + ": a one-point grid needs start == end");
        if (geometric) {
            if (!(start > 0.0 && end > 0.0) && !(start < 0.0 && end < 0.0))
                throw ConfigError("--" + key + ": geometric grid endpoints must be nonzero with the same sign");
            return count == 1 ? std::vector<double>{start} : geomspace(start, end, count);
        }
        return count == 1 ? std::vector<double>{start} : linspace(start, end, count);
    }
    std::vector<double> out;
    for (const auto& item : split(text, ',')) out.push_back(parse_number(item, key));
    return out;
}

json load_config_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("--config: cannot open '" + path.string() + "'");
    json doc;
    try {
        in >> doc;
    } catch (const json::parse_error& e) {
        throw ConfigError("--config: '" + path.string() + "' is not valid JSON: " + e.what());
    }
    if (!doc.is_object()) throw ConfigError("--config: the document must be a JSON object keyed by flag names");
    return doc;
}

RunConfig::RunConfig(json file_values, const std::map<std::string, std::string>& flags)
    : values_(std::move(file_values)) {
    if (values_.is_null()) values_ = json::object();
    for (const auto& [key, value] : flags) values_[key] = value;
}

const json* RunConfig::find(const std::string& key) const {
    const auto it = values_.find(key);
    return it == values_.end() ? nullptr : &*it;
}

bool RunConfig::has(const std::string& key) const { return find(key) != nullptr; }

double RunConfig::number(const std::string& key, std::optional<double> fallback) const {
    const json* v = find(key);
    if (!v) {
        if (fallback) return *fallback;
        throw ConfigError("--" + key + " is required");
    }
    if (v->is_number()) {
        const double d = v->get<double>();
        if (!std::isfinite(d)) throw ConfigError("--" + key + " must be finite");
        return d;
    }
    if (v->is_string()) return parse_number(v->get<std::string>(), key);
    throw ConfigError("--" + key + ": expected a number, got " + describe(*v));
}

int RunConfig::integer(const std::string& key, std::optional<int> fallback) const {
    const json* v = find(key);
    if (!v) {
        if (fallback) return *fallback;
        throw ConfigError("--" + key + " is required");
    }
    if (v->is_number_integer()) return v->get<int>();
    if (v->is_string()) return parse_integer(v->get<std::string>(), key);
    throw ConfigError("--" + key + ": expected an integer, got " + describe(*v));
}

std::string RunConfig::text(const std::string& key, std::optional<std::string> fallback) const {
    const json* v = find(key);
    if (!v) {
        if (fallback) return *fallback;
        throw ConfigError("--" + key + " is required");
    }
    if (v->is_string()) return v->get<std::string>();
    throw ConfigError("--" + key + ": expected a string, got " + describe(*v));
}

std::vector<double> RunConfig::grid(const std::string& key, std::optional<std::string> fallback) const {
    const json* v = find(key);
    if (!v) {
        if (fallback) return parse_grid(*fallback, key);
        throw ConfigError("--" + key + " is required");
    }
    if (v->is_number()) return {number(key)};
    if (v->is_string()) return parse_grid(v->get<std::string>(), key);
    if (v->is_array()) {
        std::vector<double> out;
        for (const auto& item : *v) {
            if (!item.is_number()) throw ConfigError("--" + key + ": array entries must be numbers");
            out.push_back(item.get<double>());
        }
        if (out.empty()) throw ConfigError("--" + key + ": empty list");
        return out;
    }
    throw ConfigError("--" + key + ": expected a list or grid, got " + describe(*v));
}

std::vector<double> RunConfig::tuple(const std::string& key, std::size_t n, std::optional<std::string> fallback) const {
    const json* v = find(key);
    std::vector<double> out;
    if (v && v->is_array()) {
        out = grid(key);
    } else if (v && v->is_string()) {
        if (v->get<std::string>().find(':') != std::string::npos)
            throw ConfigError("--" + key + ": expected " + std::to_string(n) + " comma-separated numbers");
        out = grid(key);
    } else if (v) {
        throw ConfigError("--" + key + ": expected " + std::to_string(n) + " comma-separated numbers");
    } else if (fallback) {
        out = parse_grid(*fallback, key);
    } else {
        throw ConfigError("--" + key + " is required");
    }
    if (out.size() != n)
        throw ConfigError("--" + key + ": expected " + std::to_string(n) + " values, got " + std::to_string(out.size()));
    return out;
}

void RunConfig::reject_unknown(const std::set<std::string>& known) const {
    for (const auto& [key, value] : values_.items()) {
        if (!known.count(key)) throw ConfigError("unknown configuration key '" + key + "' for this command");
    }
}

Tolerances integration_tolerances(const RunConfig& cfg, Tolerances fallback) {
    Tolerances t{cfg.number("tol-rel", fallback.rel), cfg.number("tol-abs", fallback.abs)};
    t.validate();
    return t;
}

}  // namespace dsf::app
