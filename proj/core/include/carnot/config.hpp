// Minimal config-file reader: `key = value` lines, [table] / [[array-table]]
// headers, strings, numbers, booleans, and flat arrays. Parse errors carry
// line and column; consumers must drain every key (unknown keys are rejected
// with their field path).
#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "carnot/error.hpp"

namespace carnot {

class ConfigTable;

using ConfigValue = std::variant<bool, std::int64_t, double, std::string,
                                 std::vector<std::shared_ptr<ConfigTable>>,
                                 std::vector<double>, std::vector<std::string>>;

class ConfigTable {
public:
    std::map<std::string, ConfigValue> entries;

    bool has(const std::string& key) const { return entries.count(key) != 0; }

    // typed getters; record consumption so unknown keys can be reported
    bool get_bool(const std::string& key, bool def);
    std::int64_t get_int(const std::string& key, std::int64_t def);
    double get_double(const std::string& key, double def);
    std::string get_string(const std::string& key, const std::string& def);
    std::string require_string(const std::string& key);
    double require_double(const std::string& key);
    std::vector<double> get_double_array(const std::string& key);
    std::vector<std::string> get_string_array(const std::string& key);
    std::vector<std::shared_ptr<ConfigTable>> get_tables(const std::string& key);
    std::shared_ptr<ConfigTable> get_table(const std::string& key); // may be null

    bool has_double(const std::string& key) const;

    // throws ScenarioError listing unconsumed keys, prefixed with `path`
    void ensure_drained(const std::string& path) const;

private:
    const ConfigValue* find(const std::string& key);
    std::set<std::string> consumed_;
};

// Parses config text. Tables nest through [a.b] headers; [[name]] appends an
// array-of-tables entry. Throws ParseError with line:col on malformed input.
std::shared_ptr<ConfigTable> parse_config(const std::string& text);
std::shared_ptr<ConfigTable> parse_config_file(const std::string& path);

} // namespace carnot
