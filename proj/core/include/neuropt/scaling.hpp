#pragma once

#include <cstddef>
#include <vector>

#include "neuropt/runtime.hpp"

namespace neuropt {

struct ScalingCell
{
    std::size_t n = 0;
    std::size_t d = 0;
    std::vector<double> samples_ms; ///< mean runtime per step and unit, one per repeat
    double mean_ms = 0.0;
    double stddev_ms = 0.0;
    double cv = 0.0; ///< sigma / mu
};

struct LinearFit
{
    double intercept = 0.0;
    double slope = 0.0;
};

struct ScalingReport
{
    std::vector<ScalingCell> cells;
    LinearFit vs_n; ///< over all cells, runtime against n
    LinearFit vs_d; ///< over all cells, runtime against d
};

/// Ordinary least squares y = a + b x. Requires at least two distinct x.
LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

/// Runs `base` at every (n, d) pair `repeats` times with distinct seeds and
/// reports the mean stepping time per step and unit (setup and the bootstrap
/// sweep excluded). One discarded run of the first pair warms caches and the
/// allocator first.
ScalingReport measure_scaling(const RunConfig& base, const std::vector<std::pair<std::size_t, std::size_t>>& configs,
                              std::size_t repeats = 7);

} // namespace neuropt
