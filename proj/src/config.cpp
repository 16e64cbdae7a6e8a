#include "mcc/config.hpp"

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace mcc {

namespace {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::string strip_comment(const std::string& line) {
    bool in_str = false;
    for (size_t i = 0; i < line.size(); ++i) {
        if (line[i] == '"') in_str = !in_str;
        if (line[i] == '#' && !in_str) return line.substr(0, i);
    }
    return line;
}

bool parse_number(const std::string& s, double* out) {
    const char* c = s.c_str();
    char* end = nullptr;
    const double v = std::strtod(c, &end);
    if (end == c || *end != '\0') return false;
    *out = v;
    return true;
}

ConfigValue parse_value(const std::string& raw, const std::string& where) {
    const std::string s = trim(raw);
    if (s.empty()) throw ConfigError(where + ": empty value");
    if (s.front() == '"') {
        if (s.size() < 2 || s.back() != '"') throw ConfigError(where + ": unterminated string");
        return ConfigValue{s.substr(1, s.size() - 2)};
    }
    if (s == "true") return ConfigValue{true};
    if (s == "false") return ConfigValue{false};
    if (s.front() == '[') {
        if (s.back() != ']') throw ConfigError(where + ": unterminated array");
        std::string inner = s.substr(1, s.size() - 2);
        std::vector<std::string> items;
        std::string cur;
        bool in_str = false;
        for (char c : inner) {
            if (c == '"') in_str = !in_str;
            if (c == ',' && !in_str) {
                items.push_back(trim(cur));
                cur.clear();
            } else {
                cur += c;
            }
        }
        if (!trim(cur).empty()) items.push_back(trim(cur));
        bool strings = !items.empty() && items.front().size() >= 2 && items.front().front() == '"';
        if (strings) {
            std::vector<std::string> out;
            for (const auto& it : items) {
                if (it.size() < 2 || it.front() != '"' || it.back() != '"')
                    throw ConfigError(where + ": mixed array element types");
                out.push_back(it.substr(1, it.size() - 2));
            }
            return ConfigValue{out};
        }
        std::vector<double> out;
        for (const auto& it : items) {
            double v;
            if (!parse_number(it, &v)) throw ConfigError(where + ": bad number '" + it + "'");
            out.push_back(v);
        }
        return ConfigValue{out};
    }
    double v;
    if (!parse_number(s, &v)) throw ConfigError(where + ": cannot parse value '" + s + "'");
    return ConfigValue{v};
}

} // namespace

double ConfigValue::as_number(const std::string& where) const {
    if (const double* p = std::get_if<double>(&v)) return *p;
    throw ConfigError(where + ": expected a number");
}

bool ConfigValue::as_bool(const std::string& where) const {
    if (const bool* p = std::get_if<bool>(&v)) return *p;
    throw ConfigError(where + ": expected a bool");
}

const std::string& ConfigValue::as_string(const std::string& where) const {
    if (const std::string* p = std::get_if<std::string>(&v)) return *p;
    throw ConfigError(where + ": expected a string");
}

const std::vector<double>& ConfigValue::as_numbers(const std::string& where) const {
    if (const auto* p = std::get_if<std::vector<double>>(&v)) return *p;
    throw ConfigError(where + ": expected an array of numbers");
}

const std::vector<std::string>& ConfigValue::as_strings(const std::string& where) const {
    if (const auto* p = std::get_if<std::vector<std::string>>(&v)) return *p;
    throw ConfigError(where + ": expected an array of strings");
}

const ConfigValue& ConfigSection::at(const std::string& key, const std::string& section) const {
    auto it = entries.find(key);
    if (it == entries.end()) throw ConfigError("missing key '" + key + "' in [" + section + "]");
    return it->second;
}

double ConfigSection::number_or(const std::string& key, double fallback) const {
    auto it = entries.find(key);
    return it == entries.end() ? fallback : it->second.as_number(key);
}

bool ConfigSection::bool_or(const std::string& key, bool fallback) const {
    auto it = entries.find(key);
    return it == entries.end() ? fallback : it->second.as_bool(key);
}

std::string ConfigSection::string_or(const std::string& key, const std::string& fallback) const {
    auto it = entries.find(key);
    return it == entries.end() ? fallback : it->second.as_string(key);
}

const ConfigSection& ConfigFile::at(const std::string& name) const {
    auto it = sections.find(name);
    if (it == sections.end()) throw ConfigError("missing section [" + name + "]");
    return it->second;
}

ConfigFile parse_config_text(const std::string& text) {
    ConfigFile out;
    std::istringstream is(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        line = trim(strip_comment(line));
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigError("line " + std::to_string(lineno) + ": bad section header");
            section = trim(line.substr(1, line.size() - 2));
            if (section.empty()) throw ConfigError("line " + std::to_string(lineno) + ": empty section name");
            out.sections[section]; // create
            continue;
        }
        const size_t eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        if (key.empty()) throw ConfigError("line " + std::to_string(lineno) + ": empty key");
        if (section.empty()) throw ConfigError("line " + std::to_string(lineno) + ": key outside of any section");
        const std::string where = section + "." + key;
        if (out.sections[section].entries.count(key)) throw ConfigError(where + ": duplicate key");
        out.sections[section].entries.emplace(key, parse_value(line.substr(eq + 1), where));
    }
    return out;
}

ConfigFile parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

} // namespace mcc
