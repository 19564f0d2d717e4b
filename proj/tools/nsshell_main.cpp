// nsshell: spectral Galerkin solver and diagnostics for 2D incompressible flow
// on the flat torus and the round sphere.
//
// Subcommands: spectrum, run, trap, estimates, export. Exit codes: 0 success,
// 2 configuration error, 3 numerical blow-up, 4 I/O error.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "cli_config.hpp"
#include "nsshell/errors.hpp"
#include "nsshell/estimates.hpp"
#include "nsshell/io.hpp"
#include "nsshell/trapping.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace nsshell;

namespace {

constexpr const char* kVersion = "0.1.0";

struct CommonArgs {
    std::string config_path;
    std::string manifest_path;
    std::string out_dir;
    std::string cache_dir;
    std::optional<std::uint64_t> seed;
    bool quiet = false;
};

// a single invocation owns the output directory
struct DirLock {
    fs::path path;
    explicit DirLock(const fs::path& dir) : path(dir / ".lock") {
        std::error_code ec;
        fs::create_directories(dir, ec);
        if (fs::exists(path))
            throw IoError("output directory is locked by another invocation: " + dir.string());
        std::ofstream lock(path, std::ios::out | std::ios::trunc);
        lock << "locked\n";
        if (!lock) throw IoError("cannot create lockfile in " + dir.string());
    }
    ~DirLock() {
        std::error_code ec;
        fs::remove(path, ec);
    }
};

std::string read_file(const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    if (!is) throw IoError("cannot open " + p.string());
    std::ostringstream buf;
    buf << is.rdbuf();
    return buf.str();
}

void write_file(const fs::path& p, const std::string& content) {
    std::ofstream os(p, std::ios::binary | std::ios::trunc);
    os << content;
    if (!os) throw IoError("cannot write " + p.string());
}

cli::IniFile load_config(const CommonArgs& args) {
    if (!args.manifest_path.empty()) {
        json m = json::parse(read_file(args.manifest_path));
        return cli::IniFile::parse_text(m.at("config_text").get<std::string>());
    }
    if (args.config_path.empty()) throw ConfigError("--config or --manifest is required");
    return cli::IniFile::parse_file(args.config_path);
}

fs::path cache_root(const CommonArgs& args) {
    if (!args.cache_dir.empty()) return args.cache_dir;
    if (const char* env = std::getenv("NSSHELL_CACHE_ROOT")) return env;
    return "nsshell_cache";
}

// manifest first, outputs second; timestamps live only here
void write_manifest(const fs::path& out, const cli::IniFile& ini, const CommonArgs& args,
                    const std::string& command) {
    json m;
    m["tool"] = "nsshell";
    m["version"] = kVersion;
    m["command"] = command;
    m["seed"] = args.seed ? json(*args.seed) : json(nullptr);
    m["config_path"] = args.config_path;
    m["output_dir"] = out.string();
    m["config_text"] = ini.raw_text;
    m["written_at_unix"] = static_cast<long>(std::time(nullptr));
    write_file(out / "manifest.json", m.dump(2));
}

struct SpectrumBundle {
    SpectrumTable table;
    TriadTensor triads;
    bool has_triads = false;
};

bool triads_feasible(const SpectrumTable& table) {
    return table.kind == ManifoldKind::Torus || table.max_label() <= kTriadSphereDegreeLimit;
}

SpectrumBundle load_or_build(const ManifoldConfig& mc, const CommonArgs& args, bool want_triads,
                             bool write_if_missing) {
    SpectrumBundle b;
    b.table = build_spectrum(mc);
    fs::path file = cache_root(args) / cache_file_name(mc.kind, mc.cutoff, b.table.quad_degree);
    if (fs::exists(file)) {
        std::ifstream is(file, std::ios::binary);
        read_cache(is, b.table, b.triads);
        b.has_triads = true;
        return b;
    }
    if (want_triads && triads_feasible(b.table)) {
        b.triads = build_triads(b.table);
        b.has_triads = true;
        if (write_if_missing) {
            fs::create_directories(file.parent_path());
            std::ostringstream buf(std::ios::binary);
            write_cache(buf, b.table, b.triads);
            write_file(file, buf.str());
        }
    }
    return b;
}

int cmd_spectrum(const CommonArgs& args) {
    cli::IniFile ini = load_config(args);
    ManifoldConfig mc = cli::load_manifold(ini);
    SpectrumTable table = build_spectrum(mc);
    if (!triads_feasible(table))
        throw ConfigError("cutoff too large for stored triads; transform-based commands remain available");
    fs::path file = cache_root(args) / cache_file_name(mc.kind, mc.cutoff, table.quad_degree);
    bool hit = fs::exists(file);
    TriadTensor triads;
    if (hit) {
        std::ifstream is(file, std::ios::binary);
        read_cache(is, table, triads);
    } else {
        triads = build_triads(table);
        fs::create_directories(file.parent_path());
        std::ostringstream buf(std::ios::binary);
        write_cache(buf, table, triads);
        write_file(file, buf.str());
    }
    if (!args.quiet) {
        std::cout << (hit ? "cache hit: " : "built: ") << file.string() << "\n"
                  << "modes: " << table.size() << "  lambda1: " << format_double(table.lambda1)
                  << "\nproduct nnz: " << triads.product_entries.size()
                  << "  advection nnz: " << triads.advection_entries.size() << "\n";
    }
    return 0;
}

int cmd_run(const CommonArgs& args) {
    cli::IniFile ini = load_config(args);
    RunConfig rc = cli::load_run(ini);
    fs::path out = args.out_dir.empty() ? fs::path("out") : fs::path(args.out_dir);
    DirLock lock(out);
    write_manifest(out, ini, args, "run");

    SpectrumBundle b = load_or_build(rc.manifold, args, true, false);
    if (!b.has_triads)
        throw ConfigError("the Galerkin dynamics needs stored triads; lower the cutoff");
    GalerkinState init = cli::build_initial_state(ini, b.table, args.seed);
    GalerkinRhs system(b.table, b.triads, rc);
    init.shells = system.shells();
    for (const Mode& m : b.table.modes)
        if (m.s > 0.0 && !init.shells.count(m.shell)) init.omega[m.id] = 0.0;
    RunResult result = run(rc, init, system);

    {
        std::ofstream os(out / "trajectory.csv", std::ios::binary);
        write_trajectory_csv(os, b.table, result.records);
    }
    write_file(out / "final_state.json", state_to_json(result.final_state, rc.manifold));
    json summary;
    summary["max_energy_residual"] = result.max_energy_residual;
    summary["max_enstrophy_residual"] = result.max_enstrophy_residual;
    summary["enstrophy_constant_C"] = result.enstrophy_constant;
    summary["records"] = result.records.size();
    summary["final_t"] = result.final_state.t;
    summary["blow_up"] = result.blew_up;
    if (result.blew_up) summary["blowup_time"] = result.blowup_time;
    write_file(out / "summary.json", summary.dump(2));
    if (!args.quiet)
        std::cout << "run: " << result.records.size() << " records, final t "
                  << format_double(result.final_state.t)
                  << (result.blew_up ? " (blow-up)" : "") << "\n";
    if (result.blew_up) return 3;
    return 0;
}

int cmd_trap(const CommonArgs& args) {
    cli::IniFile ini = load_config(args);
    ManifoldConfig mc = cli::load_manifold(ini);
    fs::path out = args.out_dir.empty() ? fs::path("out") : fs::path(args.out_dir);
    DirLock lock(out);
    write_manifest(out, ini, args, "trap");

    double r = ini.require_double("trap", "r");
    double a0 = ini.require_double("trap", "a0");
    double k0 = ini.require_double("trap", "k0");
    double nu = ini.require_double("trap", "nu");
    double t_horizon = ini.get_double_or("trap", "t_horizon", 0.0);
    long k_count = ini.get_long_or("trap", "k_count", 10);
    double slack = ini.get_double_or("trap", "slack", 0.3);

    SpectrumBundle b = load_or_build(mc, args, true, false);
    GalerkinState state;
    if (ini.has("trap", "state_file")) {
        state = state_from_json(b.table, read_file(ini.require("trap", "state_file")));
    } else {
        state = cli::build_initial_state(ini, b.table, args.seed);
    }

    double e_star = ini.get_double_or("trap", "e_star", 0.0);
    if (e_star <= 0.0) {
        double w0 = state.omega.norm_l2();
        double u0 = std::sqrt(velocity_energy(state.omega, state.harmonic));
        double c = enstrophy_constant(mc);
        e_star = (w0 + u0) * (w0 + u0) * std::exp(2.0 * nu * c * t_horizon);
        e_star = std::max(e_star, 1.0 + 1e-12);  // the envelope normalizes E* > 1
    }
    TrappingEnvelope env = make_envelope(r, a0, k0, e_star, b.table.lambda1);

    auto margins = envelope_margins(state.omega, env);
    {
        std::ofstream os(out / "margins.csv", std::ios::binary);
        write_margin_csv(os, margins);
    }

    Transform tr(b.table);
    DominationScan scan(b.table, tr, state.omega, state.harmonic,
                        b.has_triads ? &b.triads : nullptr);
    std::vector<DominationReport> reports;
    json report_array = json::array();
    for (const auto& [n, ids] : b.table.shells) {
        if (!(b.table.shell_key(n) > k0)) continue;
        if (static_cast<long>(reports.size()) >= k_count) break;
        reports.push_back(scan.report(n, env, nu, mc.variant));
        report_array.push_back(json::parse(report_to_json(reports.back())));
    }
    json header;
    header["e_star"] = e_star;
    header["a1"] = env.a1;
    header["k0"] = k0;
    header["r"] = r;
    header["nu"] = nu;
    header["reports"] = std::move(report_array);
    write_file(out / "reports.json", header.dump(2));
    {
        std::ofstream os(out / "sweep.csv", std::ios::binary);
        write_report_sweep_csv(os, reports);
    }
    json fitj;
    try {
        DecayFit fit = decay_fit(reports, r, slack);
        fitj["ok"] = fit.ok;
        fitj["flag"] = fit.flag;
        fitj["slope"] = fit.slope;
        fitj["intercept"] = fit.intercept;
        fitj["rms_residual"] = fit.rms_residual;
        fitj["n_points"] = fit.n_points;
        fitj["within_bound"] = fit.within_bound;
        fitj["bound"] = -(r - 1.75) + slack;
    } catch (const ConfigError& e) {
        fitj["ok"] = false;
        fitj["flag"] = "insufficient-data";
        fitj["error"] = e.what();
    }
    write_file(out / "fit.json", fitj.dump(2));
    if (!args.quiet)
        std::cout << "trap: " << reports.size() << " reports, A1 " << format_double(env.a1)
                  << ", E* " << format_double(e_star) << "\n";
    return 0;
}

int cmd_estimates(const CommonArgs& args) {
    cli::IniFile ini = load_config(args);
    ManifoldConfig mc = cli::load_manifold(ini);
    fs::path out = args.out_dir.empty() ? fs::path("out") : fs::path(args.out_dir);
    DirLock lock(out);
    write_manifest(out, ini, args, "estimates");

    SpectrumTable table = build_spectrum(mc);
    std::uint64_t seed = args.seed ? *args.seed
                                   : static_cast<std::uint64_t>(
                                         ini.get_long_or("estimates", "seed", 0));
    std::string ops = ini.require("estimates", "ops");
    json summary;

    auto has_op = [&](const std::string& op) {
        return ops.find(op) != std::string::npos;
    };

    if (has_op("bilinear")) {
        BilinearSweepConfig cfg;
        cfg.l1_min = int(ini.require_long("estimates", "l1_min"));
        cfg.l1_max = int(ini.require_long("estimates", "l1_max"));
        cfg.l2_min = int(ini.get_long_or("estimates", "l2_min", cfg.l1_min));
        cfg.l2_max = int(ini.get_long_or("estimates", "l2_max", cfg.l1_max));
        cfg.a = int(ini.get_long_or("estimates", "a", 0));
        cfg.b = int(ini.get_long_or("estimates", "b", 0));
        cfg.c = int(ini.get_long_or("estimates", "c", 0));
        cfg.trials = int(ini.require_long("estimates", "trials"));
        cfg.seed = seed;
        int need = bilinear_required_degree(table, cfg.l1_max, cfg.l2_max, cfg.a, cfg.b);
        Transform tr(table, std::max(need, table.quad_degree));
        auto cells = bilinear_sweep(tr, cfg);
        std::ostringstream os;
        os << "l1_shell,l2_shell,l1,l2,a,b,c,trials,max_ratio,mean_ratio,max_raw\n";
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        int npts = 0;
        for (const auto& c : cells) {
            os << c.l1_shell << ',' << c.l2_shell << ',' << format_double(c.l1) << ','
               << format_double(c.l2) << ',' << c.a << ',' << c.b << ',' << c.c << ','
               << c.trials << ',' << format_double(c.max_ratio) << ','
               << format_double(c.mean_ratio) << ',' << format_double(c.max_raw) << '\n';
            if (c.l1_shell == c.l2_shell && c.max_raw > 0.0) {
                double x = std::log(c.l1), y = std::log(c.max_raw);
                sx += x;
                sy += y;
                sxx += x * x;
                sxy += x * y;
                ++npts;
            }
        }
        write_file(out / "bilinear.csv", os.str());
        if (npts >= 2) {
            double slope = (npts * sxy - sx * sy) / (npts * sxx - sx * sx);
            summary["bilinear_equal_shell_slope"] = slope;
        }
    }
    if (has_op("trilinear")) {
        TrilinearConfig cfg;
        cfg.l2_shell = int(ini.require_long("estimates", "l2"));
        cfg.l3_shell = int(ini.require_long("estimates", "l3"));
        cfg.l1_min = int(ini.require_long("estimates", "l1_min"));
        cfg.l1_max = int(ini.require_long("estimates", "l1_max"));
        cfg.j_decay = int(ini.get_long_or("estimates", "J", 4));
        cfg.trials = int(ini.require_long("estimates", "trials"));
        cfg.seed = seed;
        Transform tr(table);
        auto cells = trilinear_decay(tr, cfg);
        std::ostringstream os;
        os << "l1_shell,l1,l2,l3,K,max_value,reference\n";
        for (const auto& c : cells)
            os << c.l1_shell << ',' << format_double(c.l1) << ',' << format_double(c.l2) << ','
               << format_double(c.l3) << ',' << format_double(c.k_separation) << ','
               << format_double(c.max_value) << ',' << format_double(c.reference) << '\n';
        write_file(out / "trilinear.csv", os.str());
    }
    if (has_op("fourier")) {
        long cases = ini.get_long_or("estimates", "cases", 50);
        Transform tr(table);
        std::ostringstream os;
        os << "case,shell,k,theta,eigenvalues_in_shell,residual\n";
        double max_res = 0.0;
        std::vector<int> shell_ids;
        for (const auto& [n, ids] : table.shells) shell_ids.push_back(n);
        for (long c = 0; c < cases; ++c) {
            std::mt19937_64 rng(derive_seed(seed, 0xf0, std::uint64_t(c), 0));
            std::normal_distribution<double> gauss;
            SpectralField f(table);
            for (std::size_t i = 1; i < f.size(); ++i) f.coeffs()[i] = gauss(rng);
            int shell = shell_ids[rng() % shell_ids.size()];
            double theta = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
            double res = fourier_trick_residual(tr, f, shell, theta);
            max_res = std::max(max_res, res);
            int ngroups = 0;
            for (const auto& [group, ids] : table.eigenspaces) {
                auto sh = table.shell_of(table.modes[ids.front()].s);
                if (sh && *sh == shell) ++ngroups;
            }
            os << c << ',' << shell << ',' << format_double(table.shell_key(shell)) << ','
               << format_double(theta) << ',' << ngroups << ',' << format_double(res) << '\n';
        }
        write_file(out / "fourier.csv", os.str());
        summary["fourier_max_residual"] = max_res;
    }
    if (has_op("appendix")) {
        long cases = ini.get_long_or("estimates", "cases", 100);
        Transform tr(table);
        std::ostringstream os;
        os << "case,e1,e2,e3,residual\n";
        double max_res = 0.0;
        for (long c = 0; c < cases; ++c) {
            std::mt19937_64 rng(derive_seed(seed, 0xa9, std::uint64_t(c), 0));
            auto pick = [&]() { return ModeId(1 + rng() % (table.size() - 1)); };
            ModeId e1 = pick(), e2 = pick(), e3 = pick();
            double res = triple_product_identity_residual(tr, e1, e2, e3);
            max_res = std::max(max_res, res);
            os << c << ',' << e1 << ',' << e2 << ',' << e3 << ',' << format_double(res) << '\n';
        }
        write_file(out / "appendix.csv", os.str());
        summary["appendix_max_residual"] = max_res;
    }
    write_file(out / "summary.json", summary.dump(2));
    if (!args.quiet) std::cout << "estimates: done (" << ops << ")\n";
    return 0;
}

int cmd_export(const CommonArgs& args) {
    cli::IniFile ini = load_config(args);
    fs::path out = args.out_dir.empty() ? fs::path("out") : fs::path(args.out_dir);
    DirLock lock(out);
    write_manifest(out, ini, args, "export");
    std::string what = ini.require("export", "what");
    if (what == "spectrum") {
        ManifoldConfig mc = cli::load_manifold(ini);
        SpectrumBundle b = load_or_build(mc, args, false, false);
        std::ostringstream os;
        os << "id,s,shell,shell_key,label\n";
        for (const Mode& m : b.table.modes)
            os << m.id << ',' << format_double(m.s) << ',' << m.shell << ','
               << (m.shell >= 0 ? format_double(b.table.shell_key(m.shell)) : "") << ','
               << '"' << m.label(b.table.kind) << '"' << '\n';
        write_file(out / "spectrum.csv", os.str());
        if (!args.quiet) std::cout << "export: spectrum.csv (" << b.table.size() << " modes)\n";
        return 0;
    }
    if (what == "state") {
        ManifoldConfig mc = cli::load_manifold(ini);
        SpectrumTable table = build_spectrum(mc);
        GalerkinState s = state_from_json(table, read_file(ini.require("export", "state_file")));
        std::ostringstream os;
        os << "id,label,coefficient\n";
        for (std::size_t i = 0; i < s.omega.size(); ++i)
            if (s.omega.coeffs()[i] != 0.0)
                os << i << ',' << '"' << table.modes[i].label(table.kind) << '"' << ','
                   << format_double(s.omega.coeffs()[i]) << '\n';
        write_file(out / "field.csv", os.str());
        if (!args.quiet) std::cout << "export: field.csv\n";
        return 0;
    }
    throw ConfigError("unknown export target: " + what);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"spectral Galerkin flow solver and diagnostics on closed surfaces"};
    app.require_subcommand(1);

    CommonArgs args;
    long seed_arg = -1;
    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", args.config_path, "config file (key = value with [sections])");
        cmd->add_option("--manifest", args.manifest_path, "re-run from a manifest.json");
        cmd->add_option("--out", args.out_dir, "output directory");
        cmd->add_option("--cache", args.cache_dir, "spectrum cache directory");
        cmd->add_option("--seed", seed_arg, "seed override");
        cmd->add_flag("--quiet", args.quiet, "suppress progress output");
    };
    CLI::App* c_spectrum = app.add_subcommand("spectrum", "build and cache spectrum + triads");
    CLI::App* c_run = app.add_subcommand("run", "integrate the truncated vorticity flow");
    CLI::App* c_trap = app.add_subcommand("trap", "envelope margins and domination reports");
    CLI::App* c_est = app.add_subcommand("estimates", "multilinear estimate sweeps");
    CLI::App* c_export = app.add_subcommand("export", "export cached data as CSV");
    for (auto* c : {c_spectrum, c_run, c_trap, c_est, c_export}) add_common(c);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }
    if (seed_arg >= 0) args.seed = static_cast<std::uint64_t>(seed_arg);

    try {
        if (c_spectrum->parsed()) return cmd_spectrum(args);
        if (c_run->parsed()) return cmd_run(args);
        if (c_trap->parsed()) return cmd_trap(args);
        if (c_est->parsed()) return cmd_estimates(args);
        if (c_export->parsed()) return cmd_export(args);
    } catch (const BlowupError& e) {
        std::cerr << "blow-up: " << e.what() << " at t = " << e.time << "\n";
        return 3;
    } catch (const IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return 4;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
