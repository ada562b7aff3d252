// Declarative scenario execution: parse a config, build the group /
// potential / integrator / verifier pipeline, run it, and emit deterministic
// reports.
#pragma once

#include <optional>

#include "carnot/config.hpp"
#include "carnot/verifiers.hpp"

namespace carnot {

struct RunOptions {
    std::optional<std::uint64_t> seed;    // overrides the scenario seed
    std::optional<std::string> out_dir;   // overrides scenario / environment
    double tolerance_scale = 1.0;         // multiplies verifier tolerances
    std::vector<std::string> formats = {"json", "csv", "summary"};
};

struct VerifierBlock {
    std::string name;   // unique within the run, e.g. "01_adams_scan"
    std::string type;
    std::string status; // "pass" | "fail" | "info"
    std::string json;   // serialized result record
    std::vector<std::pair<std::string, std::string>> csv_files; // (filename, bytes)
};

struct RunReport {
    std::string scenario_echo; // raw config bytes
    std::string version;
    std::uint64_t seed = 0;
    std::string out_dir; // resolved output directory ("" = none requested)
    std::vector<VerifierBlock> blocks;
    // measured, not serialized: emitted report bytes stay reproducible
    double wall_time_ms = 0.0;

    // 0 when every contract passed, 2 when any block reports "fail"
    int exit_code() const;
};

RunReport run_scenario_text(const std::string& config_text, const RunOptions& opts = {});
RunReport run_scenario(const std::string& config_path, const RunOptions& opts = {});

std::string report_json(const RunReport& report);
std::string report_summary_text(const RunReport& report);

// Writes report.json / *.csv / summary.txt per `formats`; returns the paths.
std::vector<std::string> emit_report(const RunReport& report, const std::string& out_dir,
                                     const std::vector<std::string>& formats);

// The environment variable consulted for a default output directory.
inline constexpr const char* kOutDirEnvVar = "CARNOT_OUT_DIR";

} // namespace carnot
