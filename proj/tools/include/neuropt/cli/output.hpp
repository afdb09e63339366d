#pragma once

#include <filesystem>
#include <string>

#include "neuropt/cli/config_io.hpp"
#include "neuropt/runtime.hpp"
#include "neuropt/scaling.hpp"

namespace neuropt::cli {

/// Shortest representation that parses back to the same double.
std::string format_double(double value);

/// summary.json content: result figures, power estimate and the config echo.
json summary_json(const RunSpec& spec, const RunTrace& trace);

/// Writes trace.csv, summary.json, timing.csv and, depending on the logging
/// level, spikes.csv, unit_errors.csv and positions.csv into `dir`.
void write_run_outputs(const std::filesystem::path& dir, const RunSpec& spec, const RunTrace& trace);

void write_scaling_csv(const std::filesystem::path& file, const ScalingReport& report);

} // namespace neuropt::cli
