#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "hypmono/gluing.hpp"

namespace hypmono::cli {

// Invalid or incomplete configuration; maps to exit code 2.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Flat key-value text with [section] headers. '#' starts a comment.
//   [monopole]
//   m = 1.0
//   beta = 0.25
class ConfigFile {
public:
    static ConfigFile parse(std::istream& in, const std::string& source = "<input>");
    static ConfigFile parse_string(const std::string& text, const std::string& source = "<input>");
    static ConfigFile load(const std::string& path);

    bool has(const std::string& section, const std::string& key) const;
    bool has_section(const std::string& section) const;

    std::string get_string(const std::string& section, const std::string& key) const;
    std::string get_string(const std::string& section, const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& section, const std::string& key) const;
    double get_double(const std::string& section, const std::string& key, double fallback) const;
    int get_int(const std::string& section, const std::string& key, int fallback) const;
    std::uint64_t get_uint(const std::string& section, const std::string& key, std::uint64_t fallback) const;
    bool get_bool(const std::string& section, const std::string& key, bool fallback) const;
    std::vector<double> get_doubles(const std::string& section, const std::string& key,
                                    const std::vector<double>& fallback) const;
    std::vector<std::string> get_strings(const std::string& section, const std::string& key,
                                         const std::vector<std::string>& fallback) const;

    // Throws ConfigError naming every key that no getter has read, outside `skip`.
    void reject_unused(const std::vector<std::string>& skip = {}) const;
    // Sections and keys in sorted order, one "key = value" per line.
    std::string canonical() const;
    const std::string& source() const { return source_; }

    // Builds a ConfigError prefixed with the source and line of the entry.
    ConfigError error_at(const std::string& section, const std::string& key, const std::string& what) const;

private:
    struct Entry {
        std::string value;
        int line = 0;
        mutable bool used = false;
    };
    const Entry* find(const std::string& section, const std::string& key) const;
    const Entry& require(const std::string& section, const std::string& key) const;
    double to_double(const std::string& section, const std::string& key, const std::string& text) const;

    std::map<std::string, std::map<std::string, Entry>> data_;
    std::string source_;
};

// Physical parameters shared by every subcommand ([monopole] section).
struct RunConfig {
    double m = 1.0;
    int k = 1;
    double R = 2.0;
    double spacing = 0.0;  // axial spacing between centers; 0 selects 6R + 2
    double beta = 0.25;
    double band_width = 1.0;
    std::uint64_t seed = 1;  // [run] seed, overridden by --seed
};

// Requires [monopole] m; enforces beta < min(1, m) with a diagnostic.
RunConfig read_run_config(const ConfigFile& cfg);
GluingSpec gluing_spec(const RunConfig& rc);

}  // namespace hypmono::cli
