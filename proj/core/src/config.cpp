#include "carnot/config.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

namespace carnot {

namespace {

[[noreturn]] void fail(std::size_t line, std::size_t col, const std::string& msg) {
    std::ostringstream os;
    os << "config parse error at " << line << ":" << col << ": " << msg;
    throw ParseError(os.str());
}

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    std::size_t e = s.find_last_not_of(" \t\r");
    if (b == std::string::npos) return "";
    return s.substr(b, e - b + 1);
}

// strip a trailing comment that is not inside a string
std::string strip_comment(const std::string& s) {
    bool in_str = false;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '"') in_str = !in_str;
        if (s[i] == '#' && !in_str) return s.substr(0, i);
    }
    return s;
}

bool looks_numeric(const std::string& v) {
    return !v.empty() && (std::isdigit(static_cast<unsigned char>(v[0])) || v[0] == '-' ||
                          v[0] == '+' || v[0] == '.');
}

ConfigValue parse_scalar(const std::string& raw, std::size_t line) {
    const std::string v = trim(raw);
    if (v.empty()) fail(line, 1, "empty value");
    if (v.front() == '"') {
        if (v.size() < 2 || v.back() != '"') fail(line, 1, "unterminated string");
        return v.substr(1, v.size() - 2);
    }
    if (v == "true") return true;
    if (v == "false") return false;
    if (!looks_numeric(v)) fail(line, 1, "unrecognized value '" + v + "'");
    const bool is_float = v.find_first_of(".eE") != std::string::npos;
    try {
        if (is_float) return std::stod(v);
        return static_cast<std::int64_t>(std::stoll(v));
    } catch (const std::exception&) {
        fail(line, 1, "bad number '" + v + "'");
    }
}

std::vector<std::string> split_elements(const std::string& body, std::size_t line) {
    std::vector<std::string> parts;
    std::string cur;
    bool in_str = false;
    for (char ch : body) {
        if (ch == '"') in_str = !in_str;
        if (ch == ',' && !in_str) {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(ch);
        }
    }
    if (in_str) fail(line, 1, "unterminated string in array");
    if (!trim(cur).empty()) parts.push_back(cur);
    return parts;
}

ConfigValue parse_value(const std::string& raw, std::size_t line) {
    const std::string v = trim(raw);
    if (!v.empty() && v.front() == '[') {
        if (v.back() != ']') fail(line, 1, "unterminated array");
        const auto parts = split_elements(v.substr(1, v.size() - 2), line);
        std::vector<double> nums;
        std::vector<std::string> strs;
        bool numeric = true;
        for (const auto& part : parts) {
            ConfigValue sv = parse_scalar(part, line);
            if (std::holds_alternative<std::string>(sv)) {
                numeric = false;
                strs.push_back(std::get<std::string>(sv));
            } else if (std::holds_alternative<double>(sv)) {
                nums.push_back(std::get<double>(sv));
            } else if (std::holds_alternative<std::int64_t>(sv)) {
                nums.push_back(static_cast<double>(std::get<std::int64_t>(sv)));
            } else {
                fail(line, 1, "unsupported array element");
            }
        }
        if (!numeric && !nums.empty()) fail(line, 1, "mixed array element types");
        if (!numeric) return strs;
        return nums;
    }
    return parse_scalar(v, line);
}

// resolve (creating) a nested table path a.b.c from the root
std::shared_ptr<ConfigTable> descend(const std::shared_ptr<ConfigTable>& root,
                                     const std::string& path, std::size_t line, bool array_tail) {
    std::shared_ptr<ConfigTable> cur = root;
    std::vector<std::string> segs;
    std::string seg;
    std::istringstream ss(path);
    while (std::getline(ss, seg, '.')) {
        if (trim(seg).empty()) fail(line, 1, "empty table-path segment");
        segs.push_back(trim(seg));
    }
    for (std::size_t i = 0; i < segs.size(); ++i) {
        const bool last = i + 1 == segs.size();
        const bool existed = cur->entries.count(segs[i]) != 0;
        auto& slot = cur->entries[segs[i]];
        auto* tables = std::get_if<std::vector<std::shared_ptr<ConfigTable>>>(&slot);
        if (tables == nullptr) {
            if (existed) fail(line, 1, "'" + segs[i] + "' already holds a non-table value");
            slot = std::vector<std::shared_ptr<ConfigTable>>{};
            tables = &std::get<std::vector<std::shared_ptr<ConfigTable>>>(slot);
        }
        if (last && array_tail) {
            tables->push_back(std::make_shared<ConfigTable>());
            return tables->back();
        }
        if (tables->empty()) tables->push_back(std::make_shared<ConfigTable>());
        cur = tables->back();
    }
    return cur;
}

} // namespace

std::shared_ptr<ConfigTable> parse_config(const std::string& text) {
    auto root = std::make_shared<ConfigTable>();
    std::shared_ptr<ConfigTable> current = root;
    std::istringstream in(text);
    std::string raw;
    std::size_t lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        const std::string line = trim(strip_comment(raw));
        if (line.empty()) continue;
        if (line.front() == '[') {
            const bool array = line.size() > 1 && line[1] == '[';
            const std::string close = array ? "]]" : "]";
            const auto end = line.find(close);
            if (end == std::string::npos) fail(lineno, line.size(), "unterminated table header");
            if (trim(line.substr(end + close.size())) != "")
                fail(lineno, end + 1, "trailing content after table header");
            const std::string path = trim(line.substr(array ? 2 : 1, end - (array ? 2 : 1)));
            if (path.empty()) fail(lineno, 2, "empty table name");
            current = descend(root, path, lineno, array);
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) fail(lineno, 1, "expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        if (key.empty()) fail(lineno, 1, "empty key");
        if (current->entries.count(key)) fail(lineno, 1, "duplicate key '" + key + "'");
        current->entries[key] = parse_value(line.substr(eq + 1), lineno);
    }
    return root;
}

std::shared_ptr<ConfigTable> parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

const ConfigValue* ConfigTable::find(const std::string& key) {
    auto it = entries.find(key);
    if (it == entries.end()) return nullptr;
    consumed_.insert(key);
    return &it->second;
}

bool ConfigTable::get_bool(const std::string& key, bool def) {
    const auto* v = find(key);
    if (v == nullptr) return def;
    if (const auto* b = std::get_if<bool>(v)) return *b;
    throw ScenarioError("field '" + key + "' must be a boolean");
}

std::int64_t ConfigTable::get_int(const std::string& key, std::int64_t def) {
    const auto* v = find(key);
    if (v == nullptr) return def;
    if (const auto* i = std::get_if<std::int64_t>(v)) return *i;
    throw ScenarioError("field '" + key + "' must be an integer");
}

double ConfigTable::get_double(const std::string& key, double def) {
    const auto* v = find(key);
    if (v == nullptr) return def;
    if (const auto* d = std::get_if<double>(v)) return *d;
    if (const auto* i = std::get_if<std::int64_t>(v)) return static_cast<double>(*i);
    throw ScenarioError("field '" + key + "' must be a number");
}

bool ConfigTable::has_double(const std::string& key) const {
    auto it = entries.find(key);
    if (it == entries.end()) return false;
    return std::holds_alternative<double>(it->second) ||
           std::holds_alternative<std::int64_t>(it->second);
}

std::string ConfigTable::get_string(const std::string& key, const std::string& def) {
    const auto* v = find(key);
    if (v == nullptr) return def;
    if (const auto* s = std::get_if<std::string>(v)) return *s;
    throw ScenarioError("field '" + key + "' must be a string");
}

std::string ConfigTable::require_string(const std::string& key) {
    if (!has(key)) throw ScenarioError("missing required field '" + key + "'");
    return get_string(key, "");
}

double ConfigTable::require_double(const std::string& key) {
    if (!has(key)) throw ScenarioError("missing required field '" + key + "'");
    return get_double(key, 0.0);
}

std::vector<double> ConfigTable::get_double_array(const std::string& key) {
    const auto* v = find(key);
    if (v == nullptr) return {};
    if (const auto* a = std::get_if<std::vector<double>>(v)) return *a;
    if (const auto* d = std::get_if<double>(v)) return {*d};
    if (const auto* i = std::get_if<std::int64_t>(v)) return {static_cast<double>(*i)};
    throw ScenarioError("field '" + key + "' must be a numeric array");
}

std::vector<std::string> ConfigTable::get_string_array(const std::string& key) {
    const auto* v = find(key);
    if (v == nullptr) return {};
    if (const auto* a = std::get_if<std::vector<std::string>>(v)) return *a;
    if (const auto* s = std::get_if<std::string>(v)) return {*s};
    throw ScenarioError("field '" + key + "' must be a string array");
}

std::vector<std::shared_ptr<ConfigTable>> ConfigTable::get_tables(const std::string& key) {
    const auto* v = find(key);
    if (v == nullptr) return {};
    if (const auto* t = std::get_if<std::vector<std::shared_ptr<ConfigTable>>>(v)) return *t;
    throw ScenarioError("field '" + key + "' must be a table");
}

std::shared_ptr<ConfigTable> ConfigTable::get_table(const std::string& key) {
    auto tables = get_tables(key);
    if (tables.empty()) return nullptr;
    if (tables.size() > 1) throw ScenarioError("field '" + key + "' appears more than once");
    return tables.front();
}

void ConfigTable::ensure_drained(const std::string& path) const {
    for (const auto& [key, value] : entries) {
        if (consumed_.count(key)) continue;
        throw ScenarioError("unknown field '" + (path.empty() ? key : path + "." + key) + "'");
    }
}

} // namespace carnot
