#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "casimir/dielectric.hpp"

namespace casimir::cli {

/// Configuration parse/validation failure; message carries file:line anchors.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Flat key = value format with [section] headers. Grammar:
///   - blank lines are ignored
///   - lines whose first non-blank character is '#' or ';' are comments
///   - "[name]" opens a section; nested names use dots, e.g. [material.left]
///   - "key = value" assigns within the current section
/// Keys and section names are case-sensitive. Duplicate keys are rejected.
class Config {
public:
    static Config parse_file(const std::filesystem::path& path);
    static Config parse_string(const std::string& text, const std::string& name);

    bool has_section(const std::string& section) const;
    bool has(const std::string& section, const std::string& key) const;

    std::string get_string(const std::string& section, const std::string& key) const;
    std::string get_string_or(const std::string& section, const std::string& key,
                              const std::string& fallback) const;
    double get_double(const std::string& section, const std::string& key) const;
    double get_double_or(const std::string& section, const std::string& key,
                         double fallback) const;
    long long get_int(const std::string& section, const std::string& key) const;
    long long get_int_or(const std::string& section, const std::string& key,
                         long long fallback) const;
    bool get_bool_or(const std::string& section, const std::string& key, bool fallback) const;
    /// Comma-separated list of reals.
    std::vector<double> get_list(const std::string& section, const std::string& key) const;

    const std::string& raw_text() const { return raw_; }
    const std::string& name() const { return name_; }

    [[noreturn]] void fail(const std::string& section, const std::string& key,
                           const std::string& why) const;

private:
    struct Entry {
        std::string value;
        int line = 0;
    };
    std::map<std::string, std::map<std::string, Entry>> sections_;
    std::string raw_;
    std::string name_;
    const Entry& entry(const std::string& section, const std::string& key) const;
};

/// Material block reader: [section] kind = plasma|oscillator|constant_epsilon|tabulated
/// with parameter keys u_p, alpha_s, u0, epsilon, table_path.
PolarizabilityModel parse_material(const Config& config, const std::string& section);

}  // namespace casimir::cli
