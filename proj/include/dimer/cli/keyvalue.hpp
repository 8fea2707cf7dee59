#pragma once

// Flat key = value configuration as read from files and command-line flags.

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dimer/errors.hpp"

namespace dimer::cli {

/// Malformed or inconsistent run configuration.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Unreadable input or unwritable output.
class IoError : public Error {
public:
    using Error::Error;
};

using KeyValues = std::vector<std::pair<std::string, std::string>>;

inline std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

/// Lower case, leading dashes dropped, underscores read as dashes.
inline std::string normalize_key(std::string_view key) {
    while (!key.empty() && key.front() == '-') key.remove_prefix(1);
    std::string out(key);
    for (char& c : out) {
        c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        if (c == '_') c = '-';
    }
    return out;
}

inline std::vector<std::string> split_list(std::string_view s) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto comma = s.find(',', start);
        out.push_back(trim(s.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start)));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

inline KeyValues parse_key_values(std::istream& in, const std::string& origin) {
    KeyValues out;
    std::string line;
    int number = 0;
    while (std::getline(in, line)) {
        ++number;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        if (trim(line).empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(origin + ":" + std::to_string(number) + ": expected 'key = value'");
        }
        std::string key = normalize_key(trim(std::string_view(line).substr(0, eq)));
        if (key.empty()) throw ConfigError(origin + ":" + std::to_string(number) + ": empty key");
        out.emplace_back(std::move(key), trim(std::string_view(line).substr(eq + 1)));
    }
    return out;
}

inline KeyValues parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file '" + path + "'");
    return parse_key_values(in, path);
}

/// Later entries win.
inline KeyValues merge(const KeyValues& base, const KeyValues& overrides) {
    KeyValues out = base;
    for (const auto& [k, v] : overrides) {
        const auto it = std::find_if(out.begin(), out.end(), [&](const auto& e) { return e.first == k; });
        if (it != out.end()) it->second = v; else out.emplace_back(k, v);
    }
    return out;
}

inline double parse_number(const std::string& key, const std::string& text) {
    double v = 0.0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    if (!text.empty() && *first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last || text.empty()) {
        throw ConfigError("'" + key + "' expects a number, got '" + text + "'");
    }
    return v;
}

inline long parse_integer(const std::string& key, const std::string& text) {
    long v = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
        throw ConfigError("'" + key + "' expects an integer, got '" + text + "'");
    }
    return v;
}

inline bool parse_bool(const std::string& key, const std::string& text) {
    std::string t = normalize_key(text);
    if (t == "true" || t == "1" || t == "yes" || t == "on") return true;
    if (t == "false" || t == "0" || t == "no" || t == "off") return false;
    throw ConfigError("'" + key + "' expects true or false, got '" + text + "'");
}

}  // namespace dimer::cli
