// End-to-end checks of the command-line surface: exit-code contract, manifest
// re-runs, and the subcommand outputs. These run only when the harness exports
// NSSHELL_BIN (ctest does); a missing binary skips the suite.

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "nsshell/io.hpp"
#include "test_helpers.hpp"

namespace fs = std::filesystem;

namespace {

std::string tool_path() {
    const char* env = std::getenv("NSSHELL_BIN");
    return env ? env : "";
}

int run_tool(const std::string& args) {
    std::string cmd = tool_path() + " " + args + " >/dev/null 2>&1";
    int rc = std::system(cmd.c_str());
    return WEXITSTATUS(rc);
}

fs::path fresh_dir(const std::string& name) {
    fs::path p = fs::temp_directory_path() / ("nsshell_cli_" + name);
    std::error_code ec;
    fs::remove_all(p, ec);
    fs::create_directories(p);
    return p;
}

void write(const fs::path& p, const std::string& text) {
    std::ofstream os(p);
    os << text;
}

std::string slurp(const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    std::ostringstream buf;
    buf << is.rdbuf();
    return buf.str();
}

const char* kRunConfig =
    "[manifold]\n"
    "kind = torus\n"
    "variant = hodge\n"
    "cutoff = 13\n"
    "[run]\n"
    "nu = 0.01\n"
    "dt = 0.005\n"
    "t_end = 1.0\n"
    "scheme = integrating_factor_rk4\n"
    "monitor_cadence = 20\n"
    "[initial]\n"
    "type = taylor_green\n"
    "amplitude = 1.0\n";

}  // namespace

TEST_CASE("cli contract" * doctest::skip(tool_path().empty())) {
    auto dir = fresh_dir("contract");

    SUBCASE("taylor-green run reports a tiny energy residual") {
        write(dir / "run.cfg", kRunConfig);
        int rc = run_tool("run --config " + (dir / "run.cfg").string() + " --out " +
                          (dir / "out").string() + " --cache " + (dir / "cache").string());
        CHECK(rc == 0);
        std::string summary = slurp(dir / "out" / "summary.json");
        auto pos = summary.find("max_energy_residual");
        REQUIRE(pos != std::string::npos);
        // the residual value is on the same line; a zero or denormal prints as 0
        CHECK(summary.find("\"max_energy_residual\": 0.0") != std::string::npos);
        CHECK(fs::exists(dir / "out" / "trajectory.csv"));
        CHECK(fs::exists(dir / "out" / "final_state.json"));
        CHECK(fs::exists(dir / "out" / "manifest.json"));
        CHECK_FALSE(fs::exists(dir / "out" / ".lock"));  // released on exit
    }

    SUBCASE("configuration errors exit 2") {
        write(dir / "bad.cfg",
              "[manifold]\nkind = sphere\nvariant = hodge\ncutoff = 1\n"
              "[run]\nnu = 0.01\ndt = 0.001\nt_end = 0.1\nscheme = integrating_factor_rk4\n"
              "[initial]\ntype = zero\n");
        CHECK(run_tool("run --config " + (dir / "bad.cfg").string() + " --out " +
                       (dir / "bad_out").string()) == 2);
        CHECK(run_tool("run --out " + (dir / "noconf").string()) == 2);
    }

    SUBCASE("blow-up exits 3 with partial outputs retained") {
        write(dir / "blow.cfg",
              "[manifold]\nkind = torus\nvariant = hodge\ncutoff = 19\n"
              "[run]\nnu = 0\ndt = 0.5\nt_end = 50\nscheme = integrating_factor_rk4\n"
              "monitor_cadence = 1\n"
              "[initial]\ntype = random\namplitude = 1e6\nseed = 1\n");
        int rc = run_tool("run --config " + (dir / "blow.cfg").string() + " --out " +
                          (dir / "blow_out").string() + " --cache " + (dir / "cache").string());
        CHECK(rc == 3);
        CHECK(fs::exists(dir / "blow_out" / "trajectory.csv"));
        CHECK(slurp(dir / "blow_out" / "summary.json").find("\"blow_up\": true") !=
              std::string::npos);
    }

    SUBCASE("a held lock exits 4") {
        fs::create_directories(dir / "locked");
        write(dir / "locked" / ".lock", "locked\n");
        write(dir / "run.cfg", kRunConfig);
        CHECK(run_tool("run --config " + (dir / "run.cfg").string() + " --out " +
                       (dir / "locked").string()) == 4);
    }

    SUBCASE("manifest re-run reproduces outputs byte-identically") {
        write(dir / "run.cfg", kRunConfig);
        REQUIRE(run_tool("run --config " + (dir / "run.cfg").string() + " --out " +
                         (dir / "m1").string() + " --cache " + (dir / "cache").string()) == 0);
        REQUIRE(run_tool("run --manifest " + (dir / "m1" / "manifest.json").string() + " --out " +
                         (dir / "m2").string() + " --cache " + (dir / "cache").string()) == 0);
        for (const char* f : {"trajectory.csv", "final_state.json", "summary.json"}) {
            CHECK(slurp(dir / "m1" / f) == slurp(dir / "m2" / f));
            CHECK_FALSE(slurp(dir / "m1" / f).empty());
        }
    }

    SUBCASE("trap, estimates, export run end to end") {
        write(dir / "trap.cfg",
              "[manifold]\nkind = sphere\nvariant = hodge\ncutoff = 18\n"
              "[initial]\ntype = envelope\namplitude = 0.5\nr = 2\nseed = 3\n"
              "[trap]\nr = 2\na0 = 0.5\nk0 = 11.5\nnu = 0.1\nt_horizon = 1\nk_count = 5\n");
        CHECK(run_tool("trap --config " + (dir / "trap.cfg").string() + " --out " +
                       (dir / "trap_out").string()) == 0);
        CHECK(fs::exists(dir / "trap_out" / "margins.csv"));
        CHECK(fs::exists(dir / "trap_out" / "reports.json"));
        CHECK(fs::exists(dir / "trap_out" / "fit.json"));

        // K0 below lambda1 + 10 is a configuration error
        write(dir / "trap_bad.cfg",
              "[manifold]\nkind = sphere\nvariant = hodge\ncutoff = 18\n"
              "[initial]\ntype = zero\n"
              "[trap]\nr = 2\na0 = 0.5\nk0 = 6.4\nnu = 0.1\nk_count = 5\n");
        CHECK(run_tool("trap --config " + (dir / "trap_bad.cfg").string() + " --out " +
                       (dir / "trap_bad").string()) == 2);

        write(dir / "est.cfg",
              "[manifold]\nkind = sphere\nvariant = hodge\ncutoff = 8\n"
              "[estimates]\nops = bilinear,fourier,appendix\n"
              "l1_min = 1\nl1_max = 4\ntrials = 2\nseed = 5\ncases = 10\n");
        CHECK(run_tool("estimates --config " + (dir / "est.cfg").string() + " --out " +
                       (dir / "est_out").string()) == 0);
        CHECK(fs::exists(dir / "est_out" / "bilinear.csv"));
        CHECK(fs::exists(dir / "est_out" / "fourier.csv"));
        CHECK(fs::exists(dir / "est_out" / "appendix.csv"));

        write(dir / "exp.cfg",
              "[manifold]\nkind = torus\nvariant = hodge\ncutoff = 13\n"
              "[export]\nwhat = spectrum\n");
        CHECK(run_tool("export --config " + (dir / "exp.cfg").string() + " --out " +
                       (dir / "exp_out").string() + " --cache " + (dir / "cache").string()) == 0);
        CHECK(fs::exists(dir / "exp_out" / "spectrum.csv"));
    }

    SUBCASE("snapshot restart continues the trajectory exactly") {
        auto cfg_text = [](double t_end, const std::string& initial) {
            return std::string("[manifold]\nkind = torus\nvariant = hodge\ncutoff = 13\n") +
                   "[run]\nnu = 0.02\ndt = 0.002\nt_end = " + std::to_string(t_end) +
                   "\nscheme = integrating_factor_rk4\nmonitor_cadence = 10\n[initial]\n" +
                   initial;
        };
        write(dir / "a.cfg", cfg_text(0.1, "type = random\namplitude = 0.7\nseed = 9\n"));
        REQUIRE(run_tool("run --config " + (dir / "a.cfg").string() + " --out " +
                         (dir / "leg1").string() + " --cache " + (dir / "cache").string()) == 0);
        write(dir / "b.cfg",
              cfg_text(0.1, "type = file\nfile = " +
                                (dir / "leg1" / "final_state.json").string() + "\n"));
        REQUIRE(run_tool("run --config " + (dir / "b.cfg").string() + " --out " +
                         (dir / "leg2").string() + " --cache " + (dir / "cache").string()) == 0);
        write(dir / "c.cfg", cfg_text(0.2, "type = random\namplitude = 0.7\nseed = 9\n"));
        REQUIRE(run_tool("run --config " + (dir / "c.cfg").string() + " --out " +
                         (dir / "whole").string() + " --cache " + (dir / "cache").string()) == 0);
        auto table = nsshell::test::torus_table(13.0);
        auto restarted =
            nsshell::state_from_json(table, slurp(dir / "leg2" / "final_state.json"));
        auto straight =
            nsshell::state_from_json(table, slurp(dir / "whole" / "final_state.json"));
        CHECK(restarted.omega.coeffs() == straight.omega.coeffs());
        CHECK(restarted.harmonic == straight.harmonic);
    }

    SUBCASE("cache root env var is honored") {
        write(dir / "run.cfg", kRunConfig);
        fs::path env_cache = dir / "env_cache";
        std::string cmd = "NSSHELL_CACHE_ROOT=" + env_cache.string() + " " + tool_path() +
                          " spectrum --config " + (dir / "run.cfg").string() +
                          " --quiet >/dev/null 2>&1";
        CHECK(WEXITSTATUS(std::system(cmd.c_str())) == 0);
        bool has_cache = false;
        for (const auto& e : fs::directory_iterator(env_cache)) has_cache = has_cache || e.is_regular_file();
        CHECK(has_cache);
    }
}
