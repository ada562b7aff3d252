// Result records shared by verifiers, plus deterministic JSON/CSV rendering.
// Serialization lives behind the source file so the vendored JSON header
// stays an implementation detail.
#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "carnot/sampler.hpp"

namespace carnot {

using KVList = std::vector<std::pair<std::string, double>>;

struct ScanPoint {
    std::vector<double> coords;
    std::vector<double> values;
    bool singular = false;
    std::string note;
};

struct ScanReport {
    std::string title;
    std::vector<std::string> coord_names;
    std::vector<std::string> value_names;
    std::vector<ScanPoint> points;
    KVList summary;
    std::vector<std::pair<std::string, std::string>> notes;
    std::optional<bool> contract_ok; // set when the scan carries an expectation
};

struct DefectReport {
    std::string title;
    Estimate lhs, rhs;
    double defect = 0.0;
    double defect_err = 0.0;
    std::optional<double> ratio;
    KVList extra;
    bool contract_ok = true;
    std::string contract; // human-readable statement of what was checked
};

struct FitResult {
    std::string title;
    std::string family; // description of the test-function family
    KVList constants;
    double margin = 0.0; // min over members of rhs - lhs at the fitted constants
    bool feasible = true;
    KVList details;
};

struct IdentityReport {
    std::string title;
    std::vector<std::pair<std::string, bool>> checks;
    bool all_exact = true;
};

// Deterministic serialization: keys in insertion order, shortest round-trip
// float formatting, two-space indent, trailing newline.
std::string to_json(const ScanReport& r);
std::string to_json(const DefectReport& r);
std::string to_json(const FitResult& r);
std::string to_json(const IdentityReport& r);
std::string estimate_json(const Estimate& e);

// Scan table as CSV with fixed column order (coords, then values, then flag).
std::string to_csv(const ScanReport& r);

// Shortest round-trip decimal for a double (std::to_chars).
std::string format_double(double v);

} // namespace carnot
