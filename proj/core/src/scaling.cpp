#include "neuropt/scaling.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace neuropt {

LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y)
{
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("fit_line: need at least two points of equal length");
    const double n = static_cast<double>(x.size());
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxx = 0.0;
    double sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx == 0.0)
        throw std::invalid_argument("fit_line: x values are all equal");
    const double slope = sxy / sxx;
    return {my - slope * mx, slope};
}

ScalingReport measure_scaling(const RunConfig& base, const std::vector<std::pair<std::size_t, std::size_t>>& configs,
                              std::size_t repeats)
{
    if (repeats == 0)
        throw std::invalid_argument("measure_scaling: repeats must be positive");

    auto config_for = [&](std::size_t n, std::size_t d, std::uint64_t seed) {
        RunConfig cfg = base;
        cfg.units = n;
        cfg.problem.dimension = d;
        cfg.record_positions = false;
        cfg.seed = seed;
        return cfg;
    };

    if (!configs.empty())
        (void)run(config_for(configs.front().first, configs.front().second, base.seed));

    ScalingReport report;
    for (const auto& [n, d] : configs)
        report.cells.push_back(ScalingCell{n, d, {}, 0.0, 0.0, 0.0});

    // Repeats go round-robin over the cells, alternating direction every
    // round, so drift in machine speed spreads evenly over the cells.
    for (std::size_t r = 0; r < repeats; ++r) {
        for (std::size_t c = 0; c < report.cells.size(); ++c) {
            auto& cell = report.cells[r % 2 == 0 ? c : report.cells.size() - 1 - c];
            const RunConfig cfg = config_for(cell.n, cell.d, base.seed + r);
            const RunTrace trace = run(cfg);
            if (trace.aborted)
                throw std::runtime_error("measure_scaling: run aborted: " + trace.diagnostic);
            // Stepping time only: from the end of the bootstrap sweep to the last step.
            const double ms = trace.wall_ms.back() - trace.wall_ms.front();
            cell.samples_ms.push_back(ms / static_cast<double>(trace.steps_completed * cell.n));
        }
    }

    std::vector<double> ns;
    std::vector<double> ds;
    std::vector<double> ys;
    const double k = static_cast<double>(repeats);
    for (auto& cell : report.cells) {
        cell.mean_ms = std::accumulate(cell.samples_ms.begin(), cell.samples_ms.end(), 0.0) / k;
        double var = 0.0;
        for (double s : cell.samples_ms)
            var += (s - cell.mean_ms) * (s - cell.mean_ms);
        cell.stddev_ms = repeats > 1 ? std::sqrt(var / (k - 1.0)) : 0.0;
        cell.cv = cell.mean_ms > 0.0 ? cell.stddev_ms / cell.mean_ms : 0.0;
        for (double s : cell.samples_ms) {
            ns.push_back(static_cast<double>(cell.n));
            ds.push_back(static_cast<double>(cell.d));
            ys.push_back(s);
        }
    }

    auto distinct = [](const std::vector<double>& v) {
        return !v.empty() && std::any_of(v.begin(), v.end(), [&](double a) { return a != v.front(); });
    };
    if (distinct(ns))
        report.vs_n = fit_line(ns, ys);
    if (distinct(ds))
        report.vs_d = fit_line(ds, ys);
    return report;
}

} // namespace neuropt
