#include "neuropt/cli/app.hpp"

#include <algorithm>
#include <fstream>
#include <ostream>

#include <CLI11.hpp>

#include "neuropt/cli/config_io.hpp"
#include "neuropt/cli/output.hpp"
#include "neuropt/errors.hpp"

namespace neuropt::cli {

namespace {

struct RunAborted : std::runtime_error
{
    using std::runtime_error::runtime_error;
};

std::vector<json> json_list(const json& doc, const char* key, const json& fallback)
{
    if (!doc.contains(key))
        return {fallback};
    const json& v = doc.at(key);
    if (!v.is_array() || v.empty())
        throw ConfigError(std::string("sweep.") + key + ": expected a non-empty array");
    return {v.begin(), v.end()};
}

int cmd_run(const std::string& config_path, std::optional<std::uint64_t> seed, const std::string& out_dir,
            std::optional<std::string> mode, std::ostream& out)
{
    json doc = load_json(config_path);
    if (seed)
        doc["seed"] = *seed;
    if (mode)
        doc["mode"] = *mode;
    const RunSpec spec = run_spec_from_json(doc);
    const RunTrace trace = run(spec.config);
    write_run_outputs(out_dir, spec, trace);
    if (trace.aborted)
        throw RunAborted(trace.diagnostic);
    out << "steps " << trace.steps_completed << "  f_g " << format_double(trace.global_best.back()) << "  eps_f "
        << format_double(trace.error.back()) << "  evaluations " << trace.evaluations << '\n';
    return kExitOk;
}

// Cartesian product of functions x dimensions x variants x seeds. Variants are
// merge patches applied to the base config.
int cmd_sweep(const std::string& config_path, std::optional<std::string> out_override, std::ostream& out)
{
    const json doc = load_json(config_path);
    for (const auto& [key, value] : doc.items())
        if (key != "base" && key != "functions" && key != "dimensions" && key != "variants" && key != "seeds" &&
            key != "out")
            throw ConfigError("sweep: unknown key '" + key + "'");

    const json base = doc.value("base", json::object());
    const RunSpec defaults = run_spec_from_json(base);
    const auto functions = json_list(doc, "functions", defaults.config.problem.function);
    const auto dimensions = json_list(doc, "dimensions", defaults.config.problem.dimension);
    const auto seeds = json_list(doc, "seeds", defaults.config.seed);
    std::vector<std::pair<std::string, json>> variants;
    if (doc.contains("variants")) {
        if (!doc.at("variants").is_object() || doc.at("variants").empty())
            throw ConfigError("sweep.variants: expected a non-empty object");
        for (const auto& [name, patch] : doc.at("variants").items())
            variants.emplace_back(name, patch);
    } else {
        variants.emplace_back("base", json::object());
    }
    const std::filesystem::path root = out_override.value_or(doc.value("out", std::string("sweep_out")));

    // Validate everything before running anything.
    struct Job
    {
        std::string name;
        std::string variant;
        RunSpec spec;
    };
    std::vector<Job> jobs;
    for (const auto& fn : functions)
        for (const auto& dim : dimensions)
            for (const auto& [vname, patch] : variants)
                for (const auto& seed : seeds) {
                    json cfg = base;
                    cfg.merge_patch(patch);
                    cfg["problem"]["function"] = fn;
                    cfg["problem"]["dimension"] = dim;
                    cfg["seed"] = seed;
                    RunSpec spec = run_spec_from_json(cfg);
                    const std::string name = spec.config.problem.function + "-d" +
                                             std::to_string(spec.config.problem.dimension) + "-" + vname + "-s" +
                                             std::to_string(spec.config.seed);
                    jobs.push_back({name, vname, std::move(spec)});
                }

    std::filesystem::create_directories(root);
    std::ofstream table(root / "sweep.csv", std::ios::binary);
    table << "function,dimension,variant,seed,final_f_g,final_eps_f,evaluations,aborted\n";
    bool any_aborted = false;
    for (const auto& job : jobs) {
        const RunTrace trace = run(job.spec.config);
        write_run_outputs(root / job.name, job.spec, trace);
        const auto& c = job.spec.config;
        table << c.problem.function << ',' << c.problem.dimension << ',' << job.variant << ',' << c.seed << ','
              << (trace.rows() ? format_double(trace.global_best.back()) : "") << ','
              << (trace.rows() ? format_double(trace.error.back()) : "") << ',' << trace.evaluations << ','
              << (trace.aborted ? 1 : 0) << '\n';
        out << job.name << "  eps_f " << (trace.rows() ? format_double(trace.error.back()) : "-")
            << (trace.aborted ? "  ABORTED: " + trace.diagnostic : "") << '\n';
        any_aborted = any_aborted || trace.aborted;
    }
    if (any_aborted)
        throw RunAborted("at least one sweep run aborted");
    return kExitOk;
}

int cmd_power(std::size_t n, std::size_t d, std::size_t m, double dt_ms, std::ostream& out)
{
    const PowerEstimate p = estimate_power(n, d, m, dt_ms * 1e-3);
    out << "N_syn  " << format_double(p.synaptic_events) << '\n'
        << "E_step " << format_double(p.energy_per_step_j) << " J\n"
        << "P_avg  " << format_double(p.average_power_w) << " W\n";
    return kExitOk;
}

int cmd_scale(const std::string& config_path, std::optional<std::string> out_override, std::ostream& out)
{
    const json doc = load_json(config_path);
    for (const auto& [key, value] : doc.items())
        if (key != "base" && key != "configs" && key != "repeats" && key != "out")
            throw ConfigError("scale: unknown key '" + key + "'");
    const RunSpec spec = run_spec_from_json(doc.value("base", json::object()));

    std::vector<std::pair<std::size_t, std::size_t>> cells;
    try {
        cells = doc.at("configs").get<std::vector<std::pair<std::size_t, std::size_t>>>();
    } catch (const json::exception&) {
        throw ConfigError("scale.configs: expected an array of [n, d] pairs");
    }
    if (cells.size() < 2)
        throw ConfigError("scale.configs: need at least two (n, d) pairs");
    for (const auto& [n, d] : cells) {
        RunConfig probe = spec.config;
        probe.units = n;
        probe.problem.dimension = d;
        validate(probe);
    }
    std::size_t repeats = 7;
    if (doc.contains("repeats")) {
        if (!doc.at("repeats").is_number_unsigned() || doc.at("repeats").get<std::size_t>() == 0)
            throw ConfigError("scale.repeats: expected a positive integer");
        repeats = doc.at("repeats").get<std::size_t>();
    }

    const ScalingReport report = measure_scaling(spec.config, cells, repeats);
    const std::filesystem::path root = out_override.value_or(doc.value("out", std::string("scale_out")));
    std::filesystem::create_directories(root);
    write_scaling_csv(root / "scaling.csv", report);
    for (const auto& cell : report.cells)
        out << "n=" << cell.n << " d=" << cell.d << "  mean " << format_double(cell.mean_ms) << " ms  cv "
            << format_double(cell.cv) << '\n';
    out << "fit vs n: " << format_double(report.vs_n.intercept) << " + " << format_double(report.vs_n.slope)
        << " n\nfit vs d: " << format_double(report.vs_d.intercept) << " + " << format_double(report.vs_d.slope)
        << " d\n";
    return kExitOk;
}

} // namespace

int run_app(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Spiking-neuron population optimizer"};
    app.require_subcommand(1);

    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::string run_out = "run_out";
    std::optional<std::string> mode;
    auto* run_cmd = app.add_subcommand("run", "Run one configuration");
    run_cmd->add_option("--config", config_path, "JSON run configuration")->required();
    run_cmd->add_option("--seed", seed, "Master seed override");
    run_cmd->add_option("--out", run_out, "Output directory");
    run_cmd->add_option("--mode", mode, "Execution mode")->check(CLI::IsMember({"det", "async"}));

    std::optional<std::string> sweep_out;
    auto* sweep_cmd = app.add_subcommand("sweep", "Run a cartesian experiment matrix");
    sweep_cmd->add_option("--config", config_path, "JSON sweep configuration")->required();
    sweep_cmd->add_option("--out", sweep_out, "Output directory");

    std::size_t n = 0;
    std::size_t d = 0;
    std::size_t m = 0;
    double dt_ms = 0.0;
    auto* power_cmd = app.add_subcommand("power", "Energy and power estimate per step");
    power_cmd->add_option("--n", n, "Units")->required()->check(CLI::PositiveNumber);
    power_cmd->add_option("--d", d, "Dimension")->required()->check(CLI::PositiveNumber);
    power_cmd->add_option("--m", m, "Neighbours per unit")->required();
    power_cmd->add_option("--dt-ms", dt_ms, "Simulated step duration in ms")->required()->check(CLI::PositiveNumber);

    std::optional<std::string> scale_out;
    auto* scale_cmd = app.add_subcommand("scale", "Measure runtime per step and unit");
    scale_cmd->add_option("--config", config_path, "JSON scaling configuration")->required();
    scale_cmd->add_option("--out", scale_out, "Output directory");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kExitBadConfig;
    }

    try {
        if (*run_cmd)
            return cmd_run(config_path, seed, run_out, mode, out);
        if (*sweep_cmd)
            return cmd_sweep(config_path, sweep_out, out);
        if (*power_cmd)
            return cmd_power(n, d, m, dt_ms, out);
        return cmd_scale(config_path, scale_out, out);
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return kExitBadConfig;
    } catch (const RunAborted& e) {
        err << "run aborted: " << e.what() << '\n';
        return kExitAborted;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitFailure;
    }
}

} // namespace neuropt::cli
