#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "neuropt/cli/app.hpp"
#include "neuropt/cli/config_io.hpp"
#include "neuropt/cli/output.hpp"

using namespace neuropt;
using namespace neuropt::cli;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name)
{
    const fs::path dir = fs::temp_directory_path() / ("neuropt_cli_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& file)
{
    std::ifstream in(file, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int app(std::vector<std::string> args, std::string* out_text = nullptr)
{
    std::ostringstream out;
    std::ostringstream err;
    const int code = run_app(args, out, err);
    if (out_text)
        *out_text = out.str();
    return code;
}

fs::path write_file(const fs::path& file, const std::string& text)
{
    std::ofstream(file) << text;
    return file;
}

const fs::path kConfigs = NEUROPT_CONFIG_DIR;

} // namespace

TEST_SUITE("cli")
{
    TEST_CASE("power prints the worst-case estimate")
    {
        std::string text;
        CHECK(app({"power", "--n", "90", "--d", "40", "--m", "89", "--dt-ms", "0.5"}, &text) == kExitOk);
        CHECK(text.find("P_avg  1.34595") != std::string::npos);
    }

    TEST_CASE("smoke run writes a trace with budget + 1 rows")
    {
        const fs::path dir = scratch("smoke");
        CHECK(app({"run", "--config", (kConfigs / "smoke.json").string(), "--out", dir.string()}) == kExitOk);
        const std::string trace = slurp(dir / "trace.csv");
        CHECK(std::count(trace.begin(), trace.end(), '\n') == 1 + 21);
        CHECK(trace.rfind("step,f_g,eps_f,spikes_total,wall_ms\n", 0) == 0);
        CHECK(fs::exists(dir / "spikes.csv"));
        CHECK(fs::exists(dir / "unit_errors.csv"));
        CHECK(fs::exists(dir / "summary.json"));
        CHECK_FALSE(fs::exists(dir / "positions.csv"));
    }

    TEST_CASE("deterministic reruns are byte identical")
    {
        const fs::path a = scratch("det_a");
        const fs::path b = scratch("det_b");
        const std::string cfg = (kConfigs / "smoke.json").string();
        REQUIRE(app({"run", "--config", cfg, "--seed", "4", "--out", a.string()}) == kExitOk);
        REQUIRE(app({"run", "--config", cfg, "--seed", "4", "--out", b.string()}) == kExitOk);
        CHECK(slurp(a / "trace.csv") == slurp(b / "trace.csv"));
        CHECK(slurp(a / "spikes.csv") == slurp(b / "spikes.csv"));
        CHECK(slurp(a / "summary.json") == slurp(b / "summary.json"));
    }

    TEST_CASE("summary echoes a config that reads back to the same run")
    {
        for (const char* name : {"neuropt_lin.json", "neuropt_izh.json", "neuropt_hyb.json", "smoke.json"}) {
            CAPTURE(name);
            const RunSpec spec = load_run_spec(kConfigs / name);
            const json echo = to_json(spec);
            const RunSpec back = run_spec_from_json(echo);
            CHECK(to_json(back) == echo);
        }

        const fs::path dir = scratch("roundtrip");
        REQUIRE(app({"run", "--config", (kConfigs / "smoke.json").string(), "--out", dir.string()}) == kExitOk);
        const json summary = load_json(dir / "summary.json");
        const RunSpec again = run_spec_from_json(summary.at("config"));
        const fs::path cfg = write_file(dir / "echo.json", summary.at("config").dump());
        const fs::path dir2 = scratch("roundtrip2");
        REQUIRE(app({"run", "--config", cfg.string(), "--out", dir2.string()}) == kExitOk);
        CHECK(slurp(dir / "trace.csv") == slurp(dir2 / "trace.csv"));
        CHECK(again.config.units == 5);
    }

    TEST_CASE("full-state logging records positions")
    {
        const fs::path dir = scratch("full");
        const fs::path cfg = write_file(dir / "c.json", R"({"units": 4, "steps": 3, "topology": {"m": 2},
                                                             "logging": "full-state"})");
        REQUIRE(app({"run", "--config", cfg.string(), "--out", (dir / "o").string()}) == kExitOk);
        const std::string pos = slurp(dir / "o" / "positions.csv");
        CHECK(std::count(pos.begin(), pos.end(), '\n') == 1 + 4 * 4);
    }

    TEST_CASE("async mode fills wall time")
    {
        const fs::path dir = scratch("async");
        REQUIRE(app({"run", "--config", (kConfigs / "smoke.json").string(), "--mode", "async", "--out", dir.string()}) ==
                kExitOk);
        const std::string trace = slurp(dir / "trace.csv");
        const auto second_line = trace.substr(trace.find('\n') + 1);
        CHECK(second_line.substr(0, second_line.find('\n')).back() != ',');
    }

    TEST_CASE("malformed configs exit with 2")
    {
        const fs::path dir = scratch("bad");
        CHECK(app({"run", "--config", write_file(dir / "a.json", "{ not json").string()}) == kExitBadConfig);
        CHECK(app({"run", "--config", write_file(dir / "b.json", R"({"unitz": 3})").string()}) == kExitBadConfig);
        CHECK(app({"run", "--config", write_file(dir / "c.json", R"({"units": -3})").string()}) == kExitBadConfig);
        CHECK(app({"run", "--config", write_file(dir / "d.json", R"({"unit": {"spike": {"rule": "bogus"}}})").string()}) ==
              kExitBadConfig);
        CHECK(app({"run", "--config", (dir / "missing.json").string()}) == kExitBadConfig);
        CHECK(app({"frobnicate"}) == kExitBadConfig);
    }

    TEST_CASE("runtime aborts exit with 3")
    {
        const fs::path dir = scratch("abort");
        const fs::path cfg = write_file(dir / "c.json", R"({
            "units": 4, "steps": 5, "topology": {"m": 2},
            "unit": {"dynamics": {"model": "linear", "dt": 1e200, "matrix": [[1e200, 0], [0, 1e200]]},
                     "spike": {"condition": "abs_threshold", "threshold": {"type": "fixed", "alpha": 1e300}}}})");
        CHECK(app({"run", "--config", cfg.string(), "--out", (dir / "o").string()}) == kExitAborted);
        CHECK(load_json(dir / "o" / "summary.json").at("aborted") == true);
    }

    TEST_CASE("sweep runs the cartesian product")
    {
        const fs::path dir = scratch("sweep");
        const fs::path cfg = write_file(dir / "s.json", R"({
            "base": {"units": 4, "steps": 5, "topology": {"m": 2}, "logging": "summary"},
            "functions": ["sphere", "rastrigin"],
            "dimensions": [2, 3],
            "variants": {"lin": {}, "izh": {"unit": {"dynamics": {"model": "izhikevich"}}}},
            "seeds": [1, 2]})");
        REQUIRE(app({"sweep", "--config", cfg.string(), "--out", (dir / "o").string()}) == kExitOk);
        const std::string table = slurp(dir / "o" / "sweep.csv");
        CHECK(std::count(table.begin(), table.end(), '\n') == 1 + 16);
        CHECK(fs::exists(dir / "o" / "rastrigin-d3-izh-s2" / "summary.json"));
        const json izh = load_json(dir / "o" / "rastrigin-d3-izh-s2" / "summary.json");
        CHECK(izh.at("config").at("unit").at("dynamics").at("model") == "izhikevich");
    }

    TEST_CASE("scale writes the table")
    {
        const fs::path dir = scratch("scale");
        const fs::path cfg = write_file(dir / "s.json", R"({"base": {"steps": 10, "topology": {"m": 2}},
                                                           "configs": [[5, 2], [10, 2], [5, 4]], "repeats": 2})");
        REQUIRE(app({"scale", "--config", cfg.string(), "--out", (dir / "o").string()}) == kExitOk);
        const std::string table = slurp(dir / "o" / "scaling.csv");
        CHECK(std::count(table.begin(), table.end(), '\n') == 4);
        CHECK(app({"scale", "--config", write_file(dir / "b.json", R"({"configs": [[5, 2]]})").string()}) ==
              kExitBadConfig);
    }

    TEST_CASE("doubles are written in shortest round-trip form")
    {
        CHECK(format_double(0.1) == "0.1");
        CHECK(std::stod(format_double(1.0 / 3.0)) == 1.0 / 3.0);
        CHECK(format_double(1e-300) == "1e-300");
    }
}
