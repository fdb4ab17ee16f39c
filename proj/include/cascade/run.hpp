// run.hpp — batch execution of a RunConfig: CSV tables, matrix files and the run manifest

#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "cascade/config.hpp"
#include "cascade/critical.hpp"

namespace cascade {

inline constexpr const char* kVersion = "1.0.0";

enum ExitCode : int { kExitOk = 0, kExitUsage = 1, kExitPartialFailure = 2 };

// Locale-independent shortest-round-trip formatting at 9 significant digits.
std::string format_csv_number(double v);

std::string sweep_csv(const SweepTable& table);
std::string critical_csv(const std::vector<CriticalRow>& rows, SweepAxis axis);
std::string measures_csv(const CorrelationReport& report);

struct RunResult {
    int exit_code = kExitOk;
    std::vector<std::filesystem::path> outputs;
    nlohmann::json manifest;
};

// Executes the configured command and writes outputs plus manifest.json into
// config.output_dir. Progress lines go to `log`.
RunResult run(const RunConfig& config, std::ostream& log);

// Rebuilds the RunConfig recorded in a manifest; output_dir can be redirected.
RunConfig config_from_manifest(const std::filesystem::path& manifest_path);

} // namespace cascade
