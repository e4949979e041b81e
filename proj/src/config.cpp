#include "casimir/config.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

namespace casimir::cli {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

}  // namespace

Config Config::parse_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_string(buf.str(), path.string());
}

Config Config::parse_string(const std::string& text, const std::string& name) {
    Config config;
    config.raw_ = text;
    config.name_ = name;

    std::istringstream in(text);
    std::string line, section;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#' || t[0] == ';') continue;
        if (t.front() == '[') {
            if (t.back() != ']')
                throw ConfigError(name + ":" + std::to_string(line_no) +
                                  ": unterminated section header");
            section = trim(t.substr(1, t.size() - 2));
            if (section.empty())
                throw ConfigError(name + ":" + std::to_string(line_no) + ": empty section name");
            config.sections_[section];
            continue;
        }
        const std::size_t eq = t.find('=');
        if (eq == std::string::npos)
            throw ConfigError(name + ":" + std::to_string(line_no) +
                              ": expected 'key = value' or '[section]'");
        const std::string key = trim(t.substr(0, eq));
        const std::string value = trim(t.substr(eq + 1));
        if (key.empty())
            throw ConfigError(name + ":" + std::to_string(line_no) + ": empty key");
        if (section.empty())
            throw ConfigError(name + ":" + std::to_string(line_no) +
                              ": key outside of any [section]");
        auto [it, inserted] = config.sections_[section].emplace(key, Entry{value, line_no});
        if (!inserted)
            throw ConfigError(name + ":" + std::to_string(line_no) + ": duplicate key '" + key +
                              "' in [" + section + "] (first at line " +
                              std::to_string(it->second.line) + ")");
    }
    return config;
}

bool Config::has_section(const std::string& section) const {
    return sections_.count(section) > 0;
}

bool Config::has(const std::string& section, const std::string& key) const {
    auto s = sections_.find(section);
    return s != sections_.end() && s->second.count(key) > 0;
}

const Config::Entry& Config::entry(const std::string& section, const std::string& key) const {
    auto s = sections_.find(section);
    if (s == sections_.end())
        throw ConfigError(name_ + ": missing section [" + section + "]");
    auto k = s->second.find(key);
    if (k == s->second.end())
        throw ConfigError(name_ + ": missing key '" + key + "' in [" + section + "]");
    return k->second;
}

void Config::fail(const std::string& section, const std::string& key,
                  const std::string& why) const {
    const Entry& e = entry(section, key);
    throw ConfigError(name_ + ":" + std::to_string(e.line) + ": [" + section + "] " + key +
                      ": " + why);
}

std::string Config::get_string(const std::string& section, const std::string& key) const {
    return entry(section, key).value;
}

std::string Config::get_string_or(const std::string& section, const std::string& key,
                                  const std::string& fallback) const {
    return has(section, key) ? get_string(section, key) : fallback;
}

double Config::get_double(const std::string& section, const std::string& key) const {
    const Entry& e = entry(section, key);
    try {
        std::size_t pos = 0;
        const double v = std::stod(e.value, &pos);
        if (pos != e.value.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        fail(section, key, "not a real number: '" + e.value + "'");
    }
}

double Config::get_double_or(const std::string& section, const std::string& key,
                             double fallback) const {
    return has(section, key) ? get_double(section, key) : fallback;
}

long long Config::get_int(const std::string& section, const std::string& key) const {
    const Entry& e = entry(section, key);
    try {
        std::size_t pos = 0;
        const long long v = std::stoll(e.value, &pos);
        if (pos != e.value.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        fail(section, key, "not an integer: '" + e.value + "'");
    }
}

long long Config::get_int_or(const std::string& section, const std::string& key,
                             long long fallback) const {
    return has(section, key) ? get_int(section, key) : fallback;
}

bool Config::get_bool_or(const std::string& section, const std::string& key,
                         bool fallback) const {
    if (!has(section, key)) return fallback;
    const std::string v = get_string(section, key);
    if (v == "true" || v == "yes" || v == "1") return true;
    if (v == "false" || v == "no" || v == "0") return false;
    fail(section, key, "not a boolean: '" + v + "'");
}

std::vector<double> Config::get_list(const std::string& section, const std::string& key) const {
    const Entry& e = entry(section, key);
    std::vector<double> values;
    std::istringstream in(e.value);
    std::string item;
    while (std::getline(in, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        try {
            std::size_t pos = 0;
            values.push_back(std::stod(item, &pos));
            if (pos != item.size()) throw std::invalid_argument("trailing characters");
        } catch (const std::exception&) {
            fail(section, key, "bad list element: '" + item + "'");
        }
    }
    if (values.empty()) fail(section, key, "empty list");
    return values;
}

PolarizabilityModel parse_material(const Config& config, const std::string& section) {
    const std::string kind = config.get_string(section, "kind");
    try {
        if (kind == "plasma")
            return PolarizabilityModel::plasma(config.get_double(section, "u_p"));
        if (kind == "oscillator")
            return PolarizabilityModel::oscillator(config.get_double(section, "alpha_s"),
                                                   config.get_double(section, "u0"));
        if (kind == "constant_epsilon")
            return PolarizabilityModel::constant_eps(config.get_double(section, "epsilon"));
        if (kind == "tabulated") {
            const std::string path = config.get_string(section, "table_path");
            std::ifstream in(path);
            if (!in) config.fail(section, "table_path", "cannot open '" + path + "'");
            std::vector<std::pair<double, double>> samples;
            double u, a0;
            char comma;
            while (in >> u >> comma >> a0) samples.emplace_back(u, a0);
            return PolarizabilityModel::tabulated(std::move(samples));
        }
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        config.fail(section, "kind", std::string("invalid material: ") + e.what());
    }
    config.fail(section, "kind", "unknown material kind '" + kind + "'");
}

}  // namespace casimir::cli
