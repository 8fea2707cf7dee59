#pragma once

// Figure presets, read from the checked-in table compiled into the binary.

#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "dimer/cli/keyvalue.hpp"
#include "dimer/preset_table.hpp"

namespace dimer::cli {

struct Preset {
    std::string name;
    KeyValues fields;                 ///< every field, the varied one with its full list
    std::string varied;               ///< key whose value is a comma-separated list
    std::vector<std::string> values;  ///< the list entries
};

inline std::vector<Preset> parse_preset_table(const std::string& text) {
    std::vector<Preset> out;
    std::istringstream in(text);
    std::string line;
    int number = 0;
    while (std::getline(in, line)) {
        ++number;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream words(line);
        Preset p;
        if (!(words >> p.name)) continue;
        std::string field;
        while (words >> field) {
            const auto eq = field.find('=');
            if (eq == std::string::npos || eq == 0) {
                throw ConfigError("preset table line " + std::to_string(number) + ": malformed field '" + field + "'");
            }
            std::string key = normalize_key(field.substr(0, eq));
            std::string value = field.substr(eq + 1);
            if (value.find(',') != std::string::npos) {
                if (!p.varied.empty()) {
                    throw ConfigError("preset " + p.name + " varies more than one parameter");
                }
                p.varied = key;
                p.values = split_list(value);
            }
            p.fields.emplace_back(std::move(key), std::move(value));
        }
        if (p.varied.empty()) throw ConfigError("preset " + p.name + " has no varied parameter");
        out.push_back(std::move(p));
    }
    return out;
}

inline const std::vector<Preset>& presets() {
    static const std::vector<Preset> table = parse_preset_table(kPresetTable);
    return table;
}

inline std::optional<Preset> find_preset(const std::string& name) {
    for (const auto& p : presets()) {
        if (p.name == name) return p;
    }
    return std::nullopt;
}

}  // namespace dimer::cli
