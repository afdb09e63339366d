#include "neuropt/cli/output.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <stdexcept>

namespace neuropt::cli {

namespace {

std::ofstream open_out(const std::filesystem::path& file)
{
    std::ofstream out(file, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot write " + file.string());
    return out;
}

} // namespace

std::string format_double(double value)
{
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, res.ptr);
}

json summary_json(const RunSpec& spec, const RunTrace& trace)
{
    const std::size_t last = trace.rows() == 0 ? 0 : trace.rows() - 1;
    const bool any = trace.rows() > 0;
    const PowerEstimate power =
        estimate_power(spec.config.units, spec.config.problem.dimension, trace.info_neighbours, spec.power_dt_ms * 1e-3);

    json j;
    j["final_f_g"] = any ? json(trace.global_best[last]) : json(nullptr);
    j["final_error"] = any ? json(trace.error[last]) : json(nullptr);
    j["optimum_value"] = trace.optimum_value;
    j["steps_completed"] = trace.steps_completed;
    j["evaluations"] = trace.evaluations;
    j["fallback_events"] = trace.fallback_events;
    j["overwritten_messages"] = trace.overwritten_messages;
    j["best_position"] = trace.best_position;
    j["unit_variants"] = trace.unit_variants;
    j["aborted"] = trace.aborted;
    j["diagnostic"] = trace.diagnostic;
    j["power"] = {{"n", spec.config.units},
                  {"d", spec.config.problem.dimension},
                  {"m", trace.info_neighbours},
                  {"dt_ms", spec.power_dt_ms},
                  {"synaptic_events", power.synaptic_events},
                  {"energy_per_step_j", power.energy_per_step_j},
                  {"average_power_w", power.average_power_w}};
    j["config"] = to_json(spec);
    return j;
}

void write_run_outputs(const std::filesystem::path& dir, const RunSpec& spec, const RunTrace& trace)
{
    std::filesystem::create_directories(dir);
    const bool timed = trace.mode == ExecutionMode::Concurrent;

    {
        auto out = open_out(dir / "trace.csv");
        out << "step,f_g,eps_f,spikes_total,wall_ms\n";
        for (std::size_t t = 0; t < trace.rows(); ++t) {
            std::uint64_t total = 0;
            for (std::size_t i = 0; i < trace.units; ++i)
                total += trace.spikes(t, i);
            // Deterministic traces leave wall time out so reruns compare byte for byte.
            out << t << ',' << format_double(trace.global_best[t]) << ',' << format_double(trace.error[t]) << ','
                << total << ',' << (timed ? format_double(trace.wall_ms[t]) : std::string{}) << '\n';
        }
    }
    {
        auto out = open_out(dir / "timing.csv");
        out << "step,wall_ms\n";
        for (std::size_t t = 0; t < trace.rows(); ++t)
            out << t << ',' << format_double(trace.wall_ms[t]) << '\n';
    }
    {
        auto out = open_out(dir / "summary.json");
        out << summary_json(spec, trace).dump(2) << '\n';
    }
    if (spec.logging == Logging::Summary)
        return;

    {
        auto spikes = open_out(dir / "spikes.csv");
        auto errors = open_out(dir / "unit_errors.csv");
        spikes << "step";
        errors << "step";
        for (std::size_t i = 0; i < trace.units; ++i) {
            spikes << ",u" << i;
            errors << ",u" << i;
        }
        spikes << '\n';
        errors << '\n';
        for (std::size_t t = 0; t < trace.rows(); ++t) {
            spikes << t;
            errors << t;
            for (std::size_t i = 0; i < trace.units; ++i) {
                spikes << ',' << trace.spikes(t, i);
                errors << ',' << format_double(std::abs(trace.unit_best(t, i) - trace.optimum_value));
            }
            spikes << '\n';
            errors << '\n';
        }
    }
    if (spec.logging != Logging::FullState)
        return;

    auto out = open_out(dir / "positions.csv");
    out << "step,unit";
    for (std::size_t j = 0; j < trace.dimension; ++j)
        out << ",x" << j;
    out << '\n';
    for (std::size_t t = 0; t < trace.positions.size(); ++t) {
        const RealMatrix& snap = trace.positions[t];
        for (std::size_t i = 0; i < snap.rows(); ++i) {
            out << t << ',' << i;
            for (std::size_t j = 0; j < snap.cols(); ++j)
                out << ',' << format_double(snap(i, j));
            out << '\n';
        }
    }
}

void write_scaling_csv(const std::filesystem::path& file, const ScalingReport& report)
{
    auto out = open_out(file);
    out << "n,d,mean_ms,stddev_ms,cv,samples_ms\n";
    for (const auto& cell : report.cells) {
        out << cell.n << ',' << cell.d << ',' << format_double(cell.mean_ms) << ',' << format_double(cell.stddev_ms)
            << ',' << format_double(cell.cv) << ',';
        for (std::size_t k = 0; k < cell.samples_ms.size(); ++k)
            out << (k ? ";" : "") << format_double(cell.samples_ms[k]);
        out << '\n';
    }
}

} // namespace neuropt::cli
