#include "oracles.hpp"

#include "optomech/cli.hpp"
#include "optomech/config.hpp"
#include "optomech/errors.hpp"
#include "optomech/output.hpp"

#include <doctest.h>
#include <json.hpp>

#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

using namespace optomech;
namespace fs = std::filesystem;

namespace {

std::string error_of(std::string_view text) {
    try {
        parse_config(text);
    } catch (const ConfigError& e) {
        return e.what();
    }
    return "";
}

struct CliRun {
    int code;
    std::string out;
    std::string err;
};

CliRun run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("optomech_test_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

// Numeric block of a CSV document: header and parsed rows.
std::pair<std::vector<std::string>, std::vector<std::vector<double>>> read_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::vector<std::string> cells;
        std::stringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        if (header.empty()) {
            header = cells;
            continue;
        }
        std::vector<double> row;
        for (const auto& c : cells) {
            double v = 0.0;
            std::from_chars(c.data(), c.data() + c.size(), v);
            row.push_back(v);
        }
        rows.push_back(row);
    }
    return {header, rows};
}

}  // namespace

TEST_CASE("empty config resolves to the nominal device") {
    const RunConfig c = parse_config("");
    CHECK(c.params == nominal_params());
    CHECK(c.drive.delta_1 == c.params.omega_m);
    CHECK(c.drive.delta_2 == c.params.omega_m);
    CHECK(c.drive.p_left == 1e-6);
    CHECK(c.format == OutputFormat::csv);
    REQUIRE(!c.notes.empty());
    CHECK(c.notes[0].find("g_1") != std::string::npos);
}

TEST_CASE("frequencies are converted exactly once") {
    const RunConfig c = parse_config(R"(
# comment line
[system]
omega_m_hz = 5e9      # trailing comment
g_1_hz = 50
g_2_hz = 5
kappa_1_hz = 6e8
[drive]
delta_1_hz = -5e9
)");
    CHECK(c.params.omega_m == hz_to_rad(5e9));
    CHECK(c.params.g_1 == hz_to_rad(50));
    CHECK(c.params.kappa_e1 == doctest::Approx(0.2 * hz_to_rad(6e8)));
    CHECK(c.drive.delta_1 == hz_to_rad(-5e9));
    CHECK(c.drive.delta_2 == hz_to_rad(5e9));
    CHECK(c.notes.size() == 1);  // only the kappa_2 note; both couplings given
}

TEST_CASE("diagnostics name the key and the constraint") {
    CHECK(error_of("[system]\nkappa_e1_hz = 6e8\n").find("system.kappa_e1_hz: must not exceed kappa_1_hz") == 0);
    CHECK(error_of("[system]\nomega_mhz = 1\n").find("system.omega_mhz: unknown key") == 0);
    CHECK(error_of("[system]\nq_m = 1\nq_m = 2\n").find("system.q_m: duplicate key") == 0);
    CHECK(error_of("[systems]\n").find("systems: unknown section") == 0);
    CHECK(error_of("[system]\nq_m = -4\n").find("system.q_m: must be > 0") == 0);
    CHECK(error_of("[system]\nq_m = abc\n").find("system.q_m: expected a number") == 0);
    CHECK(error_of("[system]\ng_1_hz = -1\n").find("system.g_1_hz: must be >= 0") == 0);
    CHECK(error_of("[system]\nprofile = none\n").find("missing required key") != std::string::npos);
    CHECK(error_of("q_m = 3\n").find("outside of any [section]") != std::string::npos);
    CHECK(error_of("[drive]\np_left_w = -1\n").find("drive.p_left_w") == 0);
    CHECK(error_of("[grid]\ndelta_p_min_hz = 5\ndelta_p_max_hz = 1\n").find("grid.delta_p_max_hz") == 0);
    CHECK(error_of("[solver]\ncoupling_sign = both\n").find("solver.coupling_sign: expected one of plus|minus") == 0);
    CHECK(error_of("[output]\nformat = xml\n").find("output.format") == 0);
}

TEST_CASE("serialization round-trips") {
    const std::string text = R"([system]
profile = none
omega_1_hz = 205.3e12
omega_2_hz = 194.1e12
kappa_1_hz = 520e6
kappa_2_hz = 1.73e9
kappa_e1_hz = 312e6
kappa_e2_hz = 7e8
omega_m_hz = 4e9
q_m = 87000
g_1_hz = 71
g_2_hz = 0.1
[drive]
p_left_w = 2.5e-6
p_right_w = 0
p_probe_w = 1e-12
delta_1_hz = -4e9
[grid]
delta_p_min_hz = -1e6
delta_p_max_hz = 3e6
points = 77
refine = false
[sweep]
p_min_w = 1e-8
p_max_w = 1e-6
points_per_decade = 13
channel = reflection
[solver]
tol = 1e-11
max_iter = 500
scan_resolution = 64
coupling_sign = minus
[output]
format = json
directory = out/data
)";
    const RunConfig a = parse_config(text);
    const std::string once = serialize_config(a);
    const RunConfig b = parse_config(once);
    CHECK(a == b);
    CHECK(serialize_config(b) == once);
    CHECK(parse_config(serialize_config(parse_config(""))) == parse_config(""));
    CHECK(power_grid_for(a).size() == 27);
}

TEST_CASE("probe grid from config") {
    RunConfig c = parse_config("[grid]\ndelta_p_min_hz = -1e7\ndelta_p_max_hz = 1e7\npoints = 11\n");
    const SteadyState s = solve_steady_state(c.params, c.drive);
    const ProbeGrid g = probe_grid_for(c, s);
    CHECK(g.front() == hz_to_rad(-1e7));
    CHECK(g.back() == hz_to_rad(1e7));
    CHECK(g.size() > 11);
    c.grid.refine = false;
    CHECK(probe_grid_for(c, s).size() == 11);
}

TEST_CASE("format_double round-trips") {
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<std::uint64_t> bits;
    int checked = 0;
    while (checked < 1000) {
        const std::uint64_t b = bits(rng);
        double v;
        std::memcpy(&v, &b, sizeof v);
        if (!std::isfinite(v)) continue;
        const std::string s = format_double(v);
        double back = 0.0;
        std::from_chars(s.data(), s.data() + s.size(), back);
        CHECK(back == v);
        ++checked;
    }
    CHECK(format_double(0.1) == "0.10000000000000001");
    CHECK(format_double(std::nan("")) == "nan");
}

TEST_CASE("emitted CSV and JSON carry identical numbers") {
    const SystemParams p = nominal_params();
    const DriveConfig d{1e-6, 1e-7, 1e-9, p.omega_m, p.omega_m};
    SweepResult r = spectrum_sweep(p, d, ProbeGrid::linspace(-3e6, 3e6, 41));
    r.label = "t";
    std::ostringstream csv, json;
    emit_sweep(r, OutputFormat::csv, csv);
    emit_sweep(r, OutputFormat::json, json);

    CHECK(csv.str().find('\r') == std::string::npos);
    CHECK(csv.str().rfind("# label=t\n", 0) == 0);
    const auto [header, rows] = read_csv(csv.str());
    REQUIRE(header.size() == 1 + r.columns.size());
    CHECK(header[0] == "delta_p_rad_s");
    REQUIRE(rows.size() == r.axis_values.size());

    const auto doc = nlohmann::json::parse(json.str());
    CHECK(doc["config_snapshot"]["params"]["g_1_rad_s"].get<double>() == p.g_1);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        CHECK(rows[i][0] == r.axis_values[i]);
        CHECK(doc["axis_values"][i].get<double>() == r.axis_values[i]);
        for (std::size_t c = 0; c < r.columns.size(); ++c) {
            CHECK(rows[i][c + 1] == r.columns[c].values[i]);
            CHECK(doc["columns"][r.columns[c].name][i].get<double>() == r.columns[c].values[i]);
        }
    }
}

TEST_CASE("power sweep CSV carries per-point diagnostics") {
    const SystemParams p = nominal_params();
    const SweepResult r = power_sweep_delay(p, {0, 1e-7, 1e-9, p.omega_m, p.omega_m},
                                            std::vector<double>{1e-8, 1e-7}, Channel::transmission);
    std::ostringstream csv;
    emit_sweep(r, OutputFormat::csv, csv);
    const auto [header, rows] = read_csv(csv.str());
    CHECK(header.back() == "branch_count");
    CHECK(header[header.size() - 2] == "solver_residual");
    CHECK(rows.size() == 2);
}

TEST_CASE("unwritable destination") {
    const SystemParams p = nominal_params();
    const SweepResult r = spectrum_sweep(p, {0, 0, 1e-9, p.omega_m, p.omega_m}, ProbeGrid({0.0}));
    const fs::path bad = fs::path("/nonexistent_dir_xyz") / "out.csv";
    try {
        emit_sweep(r, OutputFormat::csv, bad);
        FAIL("expected IoError");
    } catch (const IoError& e) {
        CHECK(e.path() == bad.string());
    }
}

TEST_CASE("command line") {
    SUBCASE("usage errors") {
        CHECK(run({}).code == kExitUsage);
        const CliRun r = run({"frobnicate"});
        CHECK(r.code == kExitUsage);
        CHECK(r.err.find("Usage") != std::string::npos);
        CHECK(r.out.empty());
        CHECK(run({"figure", "fig9"}).code == kExitUsage);
        CHECK(run({"spectrum", "--format", "xml"}).code == kExitUsage);
    }
    SUBCASE("validate") {
        const fs::path dir = scratch("validate");
        std::ofstream(dir / "bad.ini") << "[system]\nkappa_e1_hz = 1e12\n";
        std::ofstream(dir / "good.ini") << "[drive]\np_left_w = 2e-6\n";
        const CliRun bad = run({"validate", (dir / "bad.ini").string()});
        CHECK(bad.code == kExitUsage);
        CHECK(bad.err.find("system.kappa_e1_hz") != std::string::npos);
        const CliRun good = run({"validate", (dir / "good.ini").string()});
        CHECK(good.code == kExitOk);
        CHECK(parse_config(good.out) == parse_config("[drive]\np_left_w = 2e-6\n"));
        CHECK(run({"validate", (dir / "missing.ini").string()}).code == kExitIo);
    }
    SUBCASE("steady-state") {
        const CliRun r = run({"steady-state"});
        CHECK(r.code == kExitOk);
        const auto [header, rows] = read_csv(r.out);
        REQUIRE(rows.size() == 1);
        CHECK(header[0] == "n_1");
        CHECK(rows[0][0] == doctest::Approx(48872666975.80442148).epsilon(1e-10));
        CHECK(r.err.find("note:") != std::string::npos);
        const CliRun j = run({"steady-state", "--format", "json"});
        CHECK(nlohmann::json::parse(j.out)["n_2"].get<double>() ==
              doctest::Approx(102922828128.25047684).epsilon(1e-10));
    }
    SUBCASE("spectrum without left pump is the shifted bare cavity") {
        const fs::path dir = scratch("spectrum");
        std::ofstream(dir / "c.ini") << "[drive]\np_left_w = 0\n[grid]\npoints = 101\n";
        const CliRun r = run({"spectrum", (dir / "c.ini").string()});
        REQUIRE(r.code == kExitOk);
        const RunConfig c = parse_config("[drive]\np_left_w = 0\n");
        const SteadyState s = solve_steady_state(c.params, c.drive);
        const auto [header, rows] = read_csv(r.out);
        REQUIRE(rows.size() >= 101);
        for (const auto& row : rows) {
            const cdouble t = oracle::bare_transmission(c.params.kappa_1, c.params.kappa_e1, s.delta_1_eff,
                                                        delta_probe_to_delta(row[0], c.drive.delta_1));
            CHECK(std::abs(cdouble(row[1], row[2]) - t) < 1e-12);
        }
    }
    SUBCASE("delay-sweep") {
        const fs::path dir = scratch("delay");
        std::ofstream(dir / "c.ini") << "[sweep]\np_min_w = 1e-8\np_max_w = 1e-7\npoints_per_decade = 4\n";
        const CliRun r = run({"delay-sweep", (dir / "c.ini").string(), "--channel", "reflection",
                              "-o", (dir / "out.csv").string()});
        CHECK(r.code == kExitOk);
        CHECK(r.out.empty());
        const auto [header, rows] = read_csv(slurp(dir / "out.csv"));
        CHECK(header[1] == "tau_g_r");
        CHECK(rows.size() == 5);
    }
    SUBCASE("figure files and output directory precedence") {
        const fs::path dir = scratch("figure");
        const CliRun r = run({"figure", "fig2", "--out-dir", (dir / "a").string()});
        REQUIRE(r.code == kExitOk);
        for (const char* name : {"fig2_PL0uW.csv", "fig2_PL0.1uW.csv", "fig2_PL1uW.csv", "fig2_PL10uW.csv"}) {
            CHECK(fs::exists(dir / "a" / name));
        }
        std::ofstream(dir / "c.ini") << "[output]\ndirectory = " << (dir / "cfg").string() << "\n";
        ::setenv(kOutputDirEnv, (dir / "env").string().c_str(), 1);
        CHECK(run({"figure", "fig5", (dir / "c.ini").string()}).code == kExitOk);
        CHECK(fs::exists(dir / "env" / "fig5_PL0.1uW_PR0.1uW.csv"));
        ::unsetenv(kOutputDirEnv);
        CHECK(run({"figure", "fig5", (dir / "c.ini").string(), "--format", "json"}).code == kExitOk);
        CHECK(fs::exists(dir / "cfg" / "fig5_PL0.1uW_PR0.1uW.json"));
        CHECK(slurp(dir / "a" / "fig2_PL1uW.csv") ==
              (run({"figure", "fig2", "--out-dir", (dir / "b").string()}), slurp(dir / "b" / "fig2_PL1uW.csv")));
    }
    SUBCASE("io failure") {
        const fs::path dir = scratch("io");
        std::ofstream(dir / "file") << "x";
        CHECK(run({"figure", "fig3", "--out-dir", (dir / "file").string()}).code == kExitIo);
        CHECK(run({"spectrum", "-o", (dir / "nope" / "x.csv").string()}).code == kExitIo);
    }
}

TEST_CASE("tool binary") {
    const std::string cmd = std::string(OMIT_BINARY) + " validate /nonexistent.ini > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    CHECK(WEXITSTATUS(status) == kExitIo);
}
