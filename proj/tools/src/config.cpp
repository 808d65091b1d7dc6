#include "hypmono_cli/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace hypmono::cli {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

}  // namespace

ConfigFile ConfigFile::parse(std::istream& in, const std::string& source) {
    ConfigFile cfg;
    cfg.source_ = source;
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const std::string where = source + ":" + std::to_string(lineno) + ": ";
        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigError(where + "unterminated section header");
            section = trim(line.substr(1, line.size() - 2));
            if (section.empty()) throw ConfigError(where + "empty section name");
            cfg.data_[section];
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError(where + "expected 'key = value'");
        if (section.empty()) throw ConfigError(where + "key outside of a [section]");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError(where + "empty key");
        auto& sec = cfg.data_[section];
        if (sec.count(key)) throw ConfigError(where + "duplicate field [" + section + "] " + key);
        sec[key] = Entry{value, lineno, false};
    }
    return cfg;
}

ConfigFile ConfigFile::parse_string(const std::string& text, const std::string& source) {
    std::istringstream in(text);
    return parse(in, source);
}

ConfigFile ConfigFile::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path + ": cannot open config file");
    return parse(in, path);
}

const ConfigFile::Entry* ConfigFile::find(const std::string& section, const std::string& key) const {
    const auto s = data_.find(section);
    if (s == data_.end()) return nullptr;
    const auto e = s->second.find(key);
    if (e == s->second.end()) return nullptr;
    e->second.used = true;
    return &e->second;
}

const ConfigFile::Entry& ConfigFile::require(const std::string& section, const std::string& key) const {
    const Entry* e = find(section, key);
    if (!e) throw ConfigError(source_ + ": missing required field [" + section + "] " + key);
    return *e;
}

ConfigError ConfigFile::error_at(const std::string& section, const std::string& key, const std::string& what) const {
    std::string where = source_;
    if (const auto s = data_.find(section); s != data_.end())
        if (const auto e = s->second.find(key); e != s->second.end()) where += ":" + std::to_string(e->second.line);
    return ConfigError(where + ": [" + section + "] " + key + ": " + what);
}

bool ConfigFile::has(const std::string& section, const std::string& key) const {
    const auto s = data_.find(section);
    return s != data_.end() && s->second.count(key);
}

bool ConfigFile::has_section(const std::string& section) const { return data_.count(section) > 0; }

double ConfigFile::to_double(const std::string& section, const std::string& key, const std::string& text) const {
    double v = 0.0;
    const char* b = text.data();
    const char* e = b + text.size();
    const auto res = std::from_chars(b, e, v);
    if (res.ec != std::errc() || res.ptr != e || !std::isfinite(v))
        throw error_at(section, key, "expected a finite number, got '" + text + "'");
    return v;
}

std::string ConfigFile::get_string(const std::string& section, const std::string& key) const {
    return require(section, key).value;
}

std::string ConfigFile::get_string(const std::string& section, const std::string& key,
                                   const std::string& fallback) const {
    const Entry* e = find(section, key);
    return e ? e->value : fallback;
}

double ConfigFile::get_double(const std::string& section, const std::string& key) const {
    return to_double(section, key, require(section, key).value);
}

double ConfigFile::get_double(const std::string& section, const std::string& key, double fallback) const {
    const Entry* e = find(section, key);
    return e ? to_double(section, key, e->value) : fallback;
}

int ConfigFile::get_int(const std::string& section, const std::string& key, int fallback) const {
    const Entry* e = find(section, key);
    if (!e) return fallback;
    int v = 0;
    const char* b = e->value.data();
    const char* end = b + e->value.size();
    const auto res = std::from_chars(b, end, v);
    if (res.ec != std::errc() || res.ptr != end) throw error_at(section, key, "expected an integer, got '" + e->value + "'");
    return v;
}

std::uint64_t ConfigFile::get_uint(const std::string& section, const std::string& key, std::uint64_t fallback) const {
    const Entry* e = find(section, key);
    if (!e) return fallback;
    std::uint64_t v = 0;
    const char* b = e->value.data();
    const char* end = b + e->value.size();
    const auto res = std::from_chars(b, end, v);
    if (res.ec != std::errc() || res.ptr != end)
        throw error_at(section, key, "expected a non-negative integer, got '" + e->value + "'");
    return v;
}

bool ConfigFile::get_bool(const std::string& section, const std::string& key, bool fallback) const {
    const Entry* e = find(section, key);
    if (!e) return fallback;
    if (e->value == "true" || e->value == "1" || e->value == "yes") return true;
    if (e->value == "false" || e->value == "0" || e->value == "no") return false;
    throw error_at(section, key, "expected true or false, got '" + e->value + "'");
}

std::vector<double> ConfigFile::get_doubles(const std::string& section, const std::string& key,
                                            const std::vector<double>& fallback) const {
    const Entry* e = find(section, key);
    if (!e) return fallback;
    std::vector<double> out;
    for (const auto& item : split_list(e->value)) out.push_back(to_double(section, key, item));
    if (out.empty()) throw error_at(section, key, "expected a comma-separated list of numbers");
    return out;
}

std::vector<std::string> ConfigFile::get_strings(const std::string& section, const std::string& key,
                                                 const std::vector<std::string>& fallback) const {
    const Entry* e = find(section, key);
    if (!e) return fallback;
    auto out = split_list(e->value);
    if (out.empty()) throw error_at(section, key, "expected a comma-separated list");
    return out;
}

void ConfigFile::reject_unused(const std::vector<std::string>& skip) const {
    std::string unknown;
    for (const auto& [sec, entries] : data_) {
        if (std::find(skip.begin(), skip.end(), sec) != skip.end()) continue;
        for (const auto& [key, e] : entries)
            if (!e.used) unknown += "\n  " + source_ + ":" + std::to_string(e.line) + ": [" + sec + "] " + key;
    }
    if (!unknown.empty()) throw ConfigError("unknown or unused fields:" + unknown);
}

std::string ConfigFile::canonical() const {
    std::string out;
    for (const auto& [sec, entries] : data_) {
        out += "[" + sec + "]\n";
        for (const auto& [key, e] : entries) out += key + " = " + e.value + "\n";
    }
    return out;
}

RunConfig read_run_config(const ConfigFile& cfg) {
    RunConfig rc;
    const std::string s = "monopole";
    rc.m = cfg.get_double(s, "m");
    if (!(rc.m > 0.0)) throw cfg.error_at(s, "m", "mass must be positive");
    rc.k = cfg.get_int(s, "k", 1);
    if (rc.k < 1) throw cfg.error_at(s, "k", "charge must be at least 1");
    rc.R = cfg.get_double(s, "R", 2.0);
    if (rc.R < 1.0) throw cfg.error_at(s, "R", "separation parameter must satisfy R >= 1");
    rc.spacing = cfg.get_double(s, "spacing", 6.0 * rc.R + 2.0);
    if (rc.k > 1 && !(rc.spacing > 6.0 * rc.R))
        throw cfg.error_at(s, "spacing", "centers must be more than 6R apart");
    rc.beta = cfg.get_double(s, "beta", 0.25);
    const double cap = std::min(1.0, rc.m);
    if (!(rc.beta > 0.0 && rc.beta < cap)) {
        std::ostringstream msg;
        msg << "weight exponent beta = " << rc.beta << " must satisfy 0 < beta < min(1, m) = " << cap;
        throw cfg.error_at(s, "beta", msg.str());
    }
    rc.band_width = cfg.get_double(s, "band_width", 1.0);
    if (!(rc.band_width > 0.0)) throw cfg.error_at(s, "band_width", "band width must be positive");
    rc.seed = cfg.get_uint("run", "seed", 1);
    return rc;
}

GluingSpec gluing_spec(const RunConfig& rc) {
    GluingSpec g;
    g.params.m = rc.m;
    g.centers = axial_centers(rc.k, rc.R, rc.spacing);
    g.beta = rc.beta;
    g.band_width = rc.band_width;
    g.validate();
    return g;
}

}  // namespace hypmono::cli
