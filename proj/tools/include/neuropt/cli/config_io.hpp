#pragma once

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "neuropt/runtime.hpp"

namespace neuropt::cli {

using nlohmann::json;

enum class Logging { Summary, Trace, FullState };

/// A run configuration plus the driver-only settings stored next to it.
struct RunSpec
{
    RunConfig config;
    Logging logging = Logging::Trace;
    /// Simulated step duration used for the power estimate in summary.json.
    double power_dt_ms = 0.5;
};

/// Throws ConfigError on unknown keys, wrong types or invalid values.
RunSpec run_spec_from_json(const json& doc);
json to_json(const RunSpec& spec);

RunSpec load_run_spec(const std::filesystem::path& path);
json load_json(const std::filesystem::path& path);

std::string to_string(Logging logging);
std::string to_string(ExecutionMode mode);
ExecutionMode parse_mode(const std::string& text);

} // namespace neuropt::cli
