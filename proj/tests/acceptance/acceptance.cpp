#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "neuropt/cli/app.hpp"
#include "neuropt/cli/config_io.hpp"
#include "neuropt/coordination.hpp"
#include "neuropt/dynamics.hpp"
#include "neuropt/runtime.hpp"
#include "neuropt/scaling.hpp"
#include "support/trace_checks.hpp"

using namespace neuropt;
namespace fs = std::filesystem;

namespace {

const fs::path kConfigs = NEUROPT_CONFIG_DIR;

struct Outcome
{
    bool pass = false;
    std::string detail;
};

int failures = 0;

void report(int id, const char* title, const Outcome& o)
{
    std::printf("%s  criterion %d  %s: %s\n", o.pass ? "PASS" : "FAIL", id, title, o.detail.c_str());
    std::fflush(stdout);
    failures += o.pass ? 0 : 1;
}

std::string num(double x, int precision = 4)
{
    std::ostringstream ss;
    ss.precision(precision);
    ss << x;
    return ss.str();
}

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start)
{
    return std::chrono::duration<double>(Clock::now() - start).count();
}

// Every trace produced here is checked for greedy monotonicity at the end.
std::vector<std::string> monotonicity_failures;
std::size_t traces_checked = 0;

void audit(const RunTrace& trace, const std::string& label)
{
    ++traces_checked;
    const std::string why = testing::trace_violation(trace);
    if (!why.empty())
        monotonicity_failures.push_back(label + ": " + why);
}

// Checks a written trace.csv / unit_errors.csv pair column by column.
void audit_files(const fs::path& dir, const std::string& label)
{
    ++traces_checked;
    auto check_columns = [&](const fs::path& file, std::size_t first_col, std::size_t last_col) {
        std::ifstream in(file);
        std::string line;
        std::getline(in, line);
        std::vector<double> prev;
        std::size_t row = 0;
        while (std::getline(in, line)) {
            std::vector<double> cur;
            std::stringstream ss(line);
            std::string cell;
            for (std::size_t c = 0; std::getline(ss, cell, ','); ++c)
                if (c >= first_col && c <= last_col)
                    cur.push_back(std::stod(cell));
            for (std::size_t k = 0; k < cur.size() && !prev.empty(); ++k)
                if (cur[k] > prev[k]) {
                    monotonicity_failures.push_back(label + ": " + file.filename().string() + " column " +
                                                    std::to_string(first_col + k) + " increased at row " +
                                                    std::to_string(row));
                    return;
                }
            prev = std::move(cur);
            ++row;
        }
    };
    check_columns(dir / "trace.csv", 1, 2);
    check_columns(dir / "unit_errors.csv", 1, static_cast<std::size_t>(-1));
}

Outcome energy_model()
{
    const PowerEstimate p = estimate_power(90, 40, 89, 0.5e-3);
    const double e_err = std::abs(p.energy_per_step_j - 0.67e-3) / 0.67e-3;
    const double p_err = std::abs(p.average_power_w - 1.35) / 1.35;
    return {e_err <= 0.01 && p_err <= 0.01,
            "E_step " + num(p.energy_per_step_j * 1e3) + " mJ, P_avg " + num(p.average_power_w) + " W"};
}

Outcome contraction_oracle()
{
    const auto start = Clock::now();
    std::mt19937_64 rng(2024);
    std::size_t mismatches = 0;
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 1 + rng() % 8;
        const std::size_t d = 1 + rng() % 4;
        BoolMatrix ws(n, n, 0);
        BoolMatrix s(n, d, 0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t k = 0; k < n; ++k)
                ws(i, k) = (i != k && rng() % 2 == 0) ? 1 : 0;
        for (std::size_t k = 0; k < n; ++k)
            for (std::size_t j = 0; j < d; ++j)
                s(k, j) = rng() % 2 == 0 ? 1 : 0;

        BoolMatrix expect(n, d, 0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < d; ++j)
                for (std::size_t k = 0; k < n; ++k)
                    expect(i, j) = expect(i, j) | (ws(i, k) & s(k, j));

        const BoolMatrix got = tensor_contract(WeightTensor(SpikeTopology(ws), d), s);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < d; ++j)
                mismatches += got(i, j) != expect(i, j) ? 1 : 0;
    }
    const double secs = seconds_since(start);
    return {mismatches == 0 && secs < 1.0,
            std::to_string(mismatches) + " mismatches over 200 instances in " + num(secs, 3) + " s"};
}

double rotation_return_error(double dt)
{
    LinearModel rot;
    rot.a[0][1] = 1.0;
    rot.a[1][0] = -1.0;
    const double period = 2.0 * std::numbers::pi;
    const auto full = static_cast<std::size_t>(std::floor(period / dt));
    NeuroState v{1.0, 0.0};
    for (std::size_t k = 0; k < full; ++k)
        v = rk4_step(rot, v, dt);
    const double rest = period - static_cast<double>(full) * dt;
    if (rest > 0.0)
        v = rk4_step(rot, v, rest);
    return std::hypot(v[0] - 1.0, v[1]);
}

Outcome integrator_order()
{
    const double coarse = rotation_return_error(0.01);
    const double fine = rotation_return_error(0.005);
    const double ratio = coarse / fine;
    return {coarse <= 1e-6 && ratio >= 10.0,
            "return error " + num(coarse) + " at dt=0.01, ratio " + num(ratio) + " for dt/2"};
}

std::string slurp(const fs::path& file)
{
    std::ifstream in(file, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Outcome determinism(const fs::path& work)
{
    const std::string cfg = (kConfigs / "neuropt_lin.json").string();
    std::ostringstream out;
    std::ostringstream err;
    const fs::path a = work / "det_a";
    const fs::path b = work / "det_b";
    const int ca = cli::run_app({"run", "--config", cfg, "--mode", "det", "--out", a.string()}, out, err);
    const int cb = cli::run_app({"run", "--config", cfg, "--mode", "det", "--out", b.string()}, out, err);
    if (ca != 0 || cb != 0)
        return {false, "cli exit codes " + std::to_string(ca) + ", " + std::to_string(cb) + ": " + err.str()};
    audit_files(a, "neuropt_lin det run a");
    audit_files(b, "neuropt_lin det run b");
    const std::string ta = slurp(a / "trace.csv");
    const std::string tb = slurp(b / "trace.csv");
    return {!ta.empty() && ta == tb, std::to_string(ta.size()) + " bytes, " + (ta == tb ? "identical" : "different")};
}

Outcome convergence()
{
    const RunConfig base = cli::load_run_spec(kConfigs / "neuropt_lin.json").config;
    struct Target
    {
        const char* function;
        double epsilon;
        int required;
    };
    const Target targets[] = {{"sphere", 1e-6, 18}, {"ellipsoid_separable", 1e-6, 18}, {"rastrigin", 1e-2, 14}};
    bool pass = std::holds_alternative<DERandVariant>(base.unit.spike.rule) && base.units == 30;
    std::string detail;
    for (const auto& target : targets) {
        int hits = 0;
        for (std::uint64_t seed = 1; seed <= 20; ++seed) {
            RunConfig c = base;
            c.problem.function = target.function;
            c.problem.dimension = 2;
            c.steps.reset();
            c.seed = seed;
            const RunTrace t = run(c);
            audit(t, std::string(target.function) + " seed " + std::to_string(seed));
            hits += (!t.aborted && t.steps_completed == 2000 && t.error.back() <= target.epsilon) ? 1 : 0;
        }
        pass = pass && hits >= target.required;
        detail += std::string(detail.empty() ? "" : ", ") + target.function + " " + std::to_string(hits) + "/20";
    }
    return {pass, detail};
}

Outcome izhikevich_sanity()
{
    const IzhikevichModel rs;
    auto first_crossing = [&](double dt) {
        NeuroState v{-65.0, -13.0};
        const auto steps = static_cast<std::size_t>(std::llround(50.0 / dt));
        for (std::size_t k = 1; k <= steps; ++k) {
            v = rk4_step(rs, v, dt);
            if (v[0] >= 30.0)
                return static_cast<double>(k) * dt;
        }
        return std::numeric_limits<double>::infinity();
    };
    const double t_core = first_crossing(0.01);
    const double t_ref = first_crossing(0.001);
    const bool agree = std::abs(t_core - t_ref) <= 0.05;
    return {t_core <= 50.0 && t_ref <= 50.0 && agree,
            "first crossing at t=" + num(t_core) + " (dt=0.01), t=" + num(t_ref) + " (dt=0.001)"};
}

Outcome scaling_shape()
{
    // Hybrid population, fully connected topologies, neighbour-averaged reference.
    const cli::json doc = cli::load_json(kConfigs / "scaling.json");
    const RunConfig base = cli::run_spec_from_json(doc.at("base")).config;
    const ScalingReport by_n = measure_scaling(base, {{30, 2}, {60, 2}, {90, 2}}, 7);
    const ScalingReport by_d = measure_scaling(base, {{30, 2}, {30, 10}, {30, 20}, {30, 40}}, 7);

    bool pass = true;
    std::string detail;
    auto check = [&](const ScalingReport& r, const char* axis) {
        detail += std::string(detail.empty() ? "" : "; ") + axis + ":";
        for (std::size_t k = 0; k < r.cells.size(); ++k) {
            const auto& c = r.cells[k];
            detail += " " + num(c.mean_ms * 1e3) + "us(cv " + num(c.cv, 2) + ")";
            pass = pass && c.cv < 0.5;
            if (k > 0)
                pass = pass && c.mean_ms >= r.cells[k - 1].mean_ms;
        }
    };
    check(by_n, "n=30,60,90");
    check(by_d, "d=2,10,20,40");
    detail += "; slope vs d " + num(by_d.vs_d.slope * 1e3) + " us per dimension";
    return {pass, detail};
}

Outcome concurrent_liveness()
{
    RunConfig c = cli::load_run_spec(kConfigs / "neuropt_hyb.json").config;
    c.mode = ExecutionMode::Concurrent;
    const bool full = c.topology.spike == SpikeTopologyKind::Full && c.topology.info == InfoTopologyKind::Full;
    const auto start = Clock::now();
    std::packaged_task<RunTrace()> task([c] { return run(c); });
    auto future = task.get_future();
    std::thread(std::move(task)).detach();
    if (future.wait_for(std::chrono::seconds(60)) != std::future_status::ready) {
        report(9, "concurrent liveness", {false, "no completion within 60 s"});
        std::printf("acceptance: %d criteria failed (aborting on timeout)\n", failures);
        std::fflush(stdout);
        std::quick_exit(1);
    }
    const RunTrace t = future.get();
    const double secs = seconds_since(start);
    audit(t, "neuropt_hyb concurrent");
    const bool mono = testing::trace_violation(t).empty();
    const bool done = !t.aborted && t.steps_completed == c.step_budget();
    return {full && done && mono && c.units == 30 && c.problem.dimension == 2,
            std::to_string(t.steps_completed) + "/" + std::to_string(c.step_budget()) + " steps in " + num(secs, 3) +
                " s, f_g " + (mono ? "non-increasing" : "increased") + ", " +
                std::to_string(t.overwritten_messages) + " overwritten messages"};
}

} // namespace

int main()
{
    const fs::path work = fs::temp_directory_path() / "neuropt_acceptance";
    fs::remove_all(work);
    fs::create_directories(work);

    report(1, "energy model", energy_model());
    report(2, "contraction oracle", contraction_oracle());
    report(3, "integrator order", integrator_order());
    report(4, "determinism", determinism(work));
    const Outcome conv = convergence();
    const Outcome izh = izhikevich_sanity();
    const Outcome scale = scaling_shape();
    const Outcome live = concurrent_liveness();
    report(5, "greedy monotonicity",
           {monotonicity_failures.empty(),
            std::to_string(traces_checked) + " traces checked" +
                (monotonicity_failures.empty() ? "" : ", first violation " + monotonicity_failures.front())});
    report(6, "desk-scale convergence", conv);
    report(7, "spiking dynamics sanity", izh);
    report(8, "scaling shape", scale);
    report(9, "concurrent liveness", live);

    std::printf("acceptance: %d of 9 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
