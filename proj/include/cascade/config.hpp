// config.hpp — run configuration: INI-style file, flag overrides, validation

#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cascade/critical.hpp"
#include "cascade/qdmodel.hpp"

namespace cascade {

enum class Command {
    State,
    Measures,
    SweepTemperature,
    SweepDelay,
    CriticalVsDelay,
    CriticalVsFss,
    CalibrateKappa,
};

const char* to_string(Command command);
std::optional<Command> parse_command(std::string_view name);

struct AxisRange {
    double lo = 0.0;
    double hi = 1.0;
    std::size_t points = 2;
};

struct RunConfig {
    Command command = Command::State;
    DotParams params;
    AxisRange temperature{1.0, 80.0, 100};
    AxisRange delay{0.05, 1.5, 30};
    AxisRange fss{1.0, 6.0, 11};
    FinderRange tc_range = kSuddenChangeRange;
    FinderRange td_range = kSuddenDeathRange;
    double target_Tc = 11.0;
    double kappa_lo = 1e-5;
    double kappa_hi = 10.0;
    std::filesystem::path output_dir = "out";
    std::size_t workers = 1;
    std::optional<std::filesystem::path> matrix_input; // `measures` on an existing matrix file
};

// One "section.key" = value assignment; flags are turned into these.
using Override = std::pair<std::string, std::string>;

// Worker count from CASCADE_DISCORD_THREADS, else hardware concurrency.
std::size_t default_workers();

// Parses key = value text with [dot] [gate] [mixture] [sweep] [output] sections,
// applies overrides, and validates. Unknown keys and bad values are errors.
RunConfig parse_config_text(std::string_view text, const std::vector<Override>& overrides = {});
RunConfig parse_config(const std::filesystem::path& path, const std::vector<Override>& overrides = {});

// Full round-trippable config text (17 significant digits).
std::string format_config(const RunConfig& config);

} // namespace cascade
