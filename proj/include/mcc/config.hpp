#pragma once

#include <map>
#include <string>
#include <variant>
#include <vector>

#include "mcc/errors.hpp"

namespace mcc {

// Minimal TOML-style config: [section] headers, key = value lines, where a
// value is a number, bool, "string", or a flat array of numbers/strings.
struct ConfigValue {
    std::variant<double, bool, std::string, std::vector<double>, std::vector<std::string>> v;

    double as_number(const std::string& where) const;
    bool as_bool(const std::string& where) const;
    const std::string& as_string(const std::string& where) const;
    const std::vector<double>& as_numbers(const std::string& where) const;
    const std::vector<std::string>& as_strings(const std::string& where) const;
};

struct ConfigSection {
    std::map<std::string, ConfigValue> entries;

    bool has(const std::string& key) const { return entries.count(key) > 0; }
    const ConfigValue& at(const std::string& key, const std::string& section) const;
    double number_or(const std::string& key, double fallback) const;
    bool bool_or(const std::string& key, bool fallback) const;
    std::string string_or(const std::string& key, const std::string& fallback) const;
};

struct ConfigFile {
    std::map<std::string, ConfigSection> sections;

    bool has(const std::string& name) const { return sections.count(name) > 0; }
    const ConfigSection& at(const std::string& name) const;
};

ConfigFile parse_config_text(const std::string& text);
ConfigFile parse_config_file(const std::string& path);

} // namespace mcc
