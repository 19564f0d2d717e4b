#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <memory>

#include "nsshell/dynamics.hpp"
#include "nsshell/errors.hpp"
#include "nsshell/estimates.hpp"
#include "nsshell/io.hpp"
#include "nsshell/trapping.hpp"
#include "nsshell/velocity.hpp"

namespace py = pybind11;
using namespace nsshell;

namespace {

ManifoldConfig make_config(const std::string& kind, const std::string& variant, double cutoff,
                           int quad_degree) {
    ManifoldConfig mc;
    mc.kind = manifold_kind_from_string(kind);
    mc.variant = laplacian_variant_from_string(variant);
    mc.cutoff = cutoff;
    mc.quad_degree = quad_degree;
    mc.validate();
    return mc;
}

// keeps the spectrum, triads and transform together for the python surface
struct Workspace {
    ManifoldConfig config;
    SpectrumTable table;
    TriadTensor triads;
    bool has_triads = false;
    std::unique_ptr<Transform> transform;

    Workspace(const std::string& kind, const std::string& variant, double cutoff,
              int quad_degree, bool with_triads)
        : config(make_config(kind, variant, cutoff, quad_degree)) {
        table = build_spectrum(config);
        if (with_triads) {
            triads = build_triads(table);
            has_triads = true;
        }
        transform = std::make_unique<Transform>(table);
    }

    py::dict spectrum_info() const {
        py::dict d;
        d["n_modes"] = table.size();
        d["lambda1"] = table.lambda1;
        d["quad_degree"] = table.quad_degree;
        py::dict shells;
        for (const auto& [n, ids] : table.shells)
            shells[py::float_(table.shell_key(n))] = ids.size();
        d["shells"] = shells;
        return d;
    }

    std::vector<double> shell_norms(const std::vector<double>& coeffs) const {
        std::vector<double> out;
        for (const auto& [n, ids] : table.shells) out.push_back(table.shell_norm(coeffs, n));
        return out;
    }

    py::dict run_simulation(const std::vector<double>& omega, const std::vector<double>& harmonic,
                            double nu, double dt, double t_end, const std::string& scheme,
                            int cadence) const {
        if (!has_triads) throw ConfigError("workspace built without triads");
        RunConfig rc;
        rc.manifold = config;
        rc.nu = nu;
        rc.dt = dt;
        rc.t_end = t_end;
        rc.scheme = time_scheme_from_string(scheme);
        rc.monitor_cadence = cadence;
        GalerkinRhs sys(table, triads, rc);
        GalerkinState s;
        for (const auto& [n, ids] : table.shells) s.shells.insert(n);
        s.omega = SpectralField(table, omega);
        s.harmonic = harmonic;
        auto rr = run(rc, s, sys);
        py::dict out;
        py::list t, energy, enstrophy;
        for (const auto& rec : rr.records) {
            t.append(rec.t);
            energy.append(rec.energy);
            enstrophy.append(rec.enstrophy);
        }
        out["t"] = t;
        out["energy"] = energy;
        out["enstrophy"] = enstrophy;
        out["max_energy_residual"] = rr.max_energy_residual;
        out["max_enstrophy_residual"] = rr.max_enstrophy_residual;
        out["blew_up"] = rr.blew_up;
        out["final_omega"] = rr.final_state.omega.coeffs();
        out["final_harmonic"] = rr.final_state.harmonic;
        return out;
    }

    py::dict domination(const std::vector<double>& omega, const std::vector<double>& harmonic,
                        int shell, double r, double a0, double k0, double e_star,
                        double nu) const {
        SpectralField w(table, omega);
        auto env = make_envelope(r, a0, k0, e_star, table.lambda1);
        DominationScan scan(table, *transform, w, harmonic, has_triads ? &triads : nullptr);
        auto rep = scan.report(shell, env, nu, config.variant);
        py::dict d;
        d["k"] = rep.key;
        py::dict regions;
        for (const auto& [tag, v] : rep.convective_by_region) regions[tag.c_str()] = v;
        d["regions"] = regions;
        d["harmonic"] = rep.harmonic_term;
        d["linear"] = rep.linear_terms;
        d["diffusion"] = rep.diffusion_magnitude;
        d["total_nondiffusive"] = rep.total_nondiffusive;
        d["dominated"] = rep.dominated;
        d["tail_bound"] = rep.tail_bound;
        return d;
    }

    double bilinear_ratio(int l1_shell, int l2_shell, int trials, std::uint64_t seed) const {
        BilinearSweepConfig cfg;
        cfg.l1_min = cfg.l1_max = l1_shell;
        cfg.l2_min = cfg.l2_max = l2_shell;
        cfg.trials = trials;
        cfg.seed = seed;
        Transform tr(table, bilinear_required_degree(table, l1_shell, l2_shell, 0, 0));
        return bilinear_sweep(tr, cfg).at(0).max_raw;
    }

    double identity_residual(ModeId e1, ModeId e2, ModeId e3) const {
        return triple_product_identity_residual(*transform, e1, e2, e3);
    }

    double fourier_residual(const std::vector<double>& coeffs, int shell, double theta) const {
        return fourier_trick_residual(*transform, SpectralField(table, coeffs), shell, theta);
    }

    std::vector<double> mode_info(ModeId id) const {
        const Mode& m = table.modes.at(id);
        return {m.s, double(m.shell), double(m.a), double(m.b), double(m.trig)};
    }
};

}  // namespace

PYBIND11_MODULE(nsshell, m) {
    m.doc() = "spectral Galerkin flow solver and diagnostics on the torus and sphere";

    py::register_exception<ConfigError>(m, "ConfigError");
    py::register_exception<DomainError>(m, "DomainError");
    py::register_exception<BlowupError>(m, "BlowupError");

    py::class_<Workspace>(m, "Workspace")
        .def(py::init<const std::string&, const std::string&, double, int, bool>(),
             py::arg("kind"), py::arg("variant"), py::arg("cutoff"), py::arg("quad_degree") = 0,
             py::arg("with_triads") = true)
        .def("spectrum_info", &Workspace::spectrum_info)
        .def("n_modes", [](const Workspace& w) { return w.table.size(); })
        .def("lambda1", [](const Workspace& w) { return w.table.lambda1; })
        .def("mode_info", &Workspace::mode_info, py::arg("id"))
        .def("shell_norms", &Workspace::shell_norms, py::arg("coeffs"))
        .def("run", &Workspace::run_simulation, py::arg("omega"), py::arg("harmonic"),
             py::arg("nu"), py::arg("dt"), py::arg("t_end"),
             py::arg("scheme") = "integrating_factor_rk4", py::arg("cadence") = 1)
        .def("domination_report", &Workspace::domination, py::arg("omega"), py::arg("harmonic"),
             py::arg("shell"), py::arg("r"), py::arg("a0"), py::arg("k0"), py::arg("e_star"),
             py::arg("nu"))
        .def("bilinear_ratio", &Workspace::bilinear_ratio, py::arg("l1_shell"),
             py::arg("l2_shell"), py::arg("trials") = 4, py::arg("seed") = 0)
        .def("triple_product_identity_residual", &Workspace::identity_residual, py::arg("e1"),
             py::arg("e2"), py::arg("e3"))
        .def("fourier_trick_residual", &Workspace::fourier_residual, py::arg("coeffs"),
             py::arg("shell"), py::arg("theta"));

    m.def("envelope_amplitude", &envelope_amplitude, py::arg("r"), py::arg("a0"), py::arg("k0"),
          py::arg("e_star"), py::arg("lambda1"));
    m.def(
        "region_of",
        [](double k, double l1, double l2) { return to_string(region_of(k, l1, l2)); },
        py::arg("k"), py::arg("l1"), py::arg("l2"));
    m.attr("__version__") = "0.1.0";
}
