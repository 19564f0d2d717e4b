#include "nsshell/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

#include "nsshell/errors.hpp"

namespace nsshell {

std::string to_string(TimeScheme s) {
    return s == TimeScheme::ImexEuler ? "imex_euler" : "integrating_factor_rk4";
}

TimeScheme time_scheme_from_string(const std::string& s) {
    if (s == "imex_euler") return TimeScheme::ImexEuler;
    if (s == "integrating_factor_rk4") return TimeScheme::IntegratingFactorRk4;
    throw ConfigError("unknown time scheme: " + s);
}

void RunConfig::validate() const {
    manifold.validate();
    if (!(nu >= 0.0)) throw ConfigError("nu must be nonnegative");
    if (!(dt >= 0.0)) throw ConfigError("dt must be nonnegative");
    if (!(t_end >= 0.0)) throw ConfigError("t_end must be nonnegative");
    if (t_end > 0.0 && dt == 0.0) throw ConfigError("dt must be positive for a nonzero horizon");
    if (monitor_cadence < 1) throw ConfigError("monitor cadence must be >= 1");
}

void GalerkinState::validate(const SpectrumTable& table) const {
    if (omega.size() != table.size()) throw DomainError("state does not match the spectrum table");
    if (!omega.mean_zero()) throw DomainError("pi_0 omega = 0 violated");
    int hdim = table.kind == ManifoldKind::Torus ? 2 : 0;
    if (static_cast<int>(harmonic.size()) != hdim)
        throw DimensionError("harmonic sector has dimension " + std::to_string(hdim));
    for (const Mode& m : table.modes) {
        if (m.s == 0.0) continue;
        if (omega[m.id] != 0.0 && !shells.count(m.shell))
            throw DomainError("omega supported outside the truncation set Z");
    }
}

GalerkinRhs::GalerkinRhs(const SpectrumTable& table, const TriadTensor& triads,
                         const RunConfig& config)
    : table_(&table), triads_(&triads), config_(config) {
    config_.validate();
    if (triads.table_fingerprint != table.fingerprint())
        throw DomainError("triad tensor does not match the spectrum table");
    if (config.shells.empty()) {
        for (const auto& [n, ids] : table.shells) shells_.insert(n);
    } else {
        for (int n : config.shells)
            if (table.shells.count(n)) shells_.insert(n);
    }
    in_z_.assign(table.size(), 0);
    inv_s2_.assign(table.size(), 0.0);
    lin_.assign(table.size(), 0.0);
    double c = config_.manifold.ricci_shift();
    for (const Mode& m : table.modes) {
        if (m.s == 0.0) continue;
        if (shells_.count(m.shell)) in_z_[m.id] = 1;
        inv_s2_[m.id] = 1.0 / m.s2;
        lin_[m.id] = in_z_[m.id] ? -config_.nu * (m.s2 - c) : 0.0;
    }
    // keep only entries whose output can land in Z; inputs outside Z carry zero
    // coefficients and drop out on their own
    for (const auto& e : triads.advection_entries) {
        if (in_z_[e.i] || in_z_[e.j] || in_z_[e.k]) entries_.push_back(e);
    }
    for (std::size_t h = 0; h < triads.harmonic.size(); ++h) {
        for (const auto& [key, value] : triads.harmonic[h]) {
            ModeId j = ModeId(key >> 32), k = ModeId(key & 0xffffffffu);
            if (in_z_[k]) harmonic_ops_.push_back({int(h), j, k, value});
        }
    }
    std::sort(harmonic_ops_.begin(), harmonic_ops_.end(), [](const HarmonicOp& a, const HarmonicOp& b) {
        return std::tie(a.h, a.j, a.k) < std::tie(b.h, b.j, b.k);
    });
}

void GalerkinRhs::advection(const std::vector<double>& omega, const std::vector<double>& harmonic,
                            std::vector<double>& out) const {
    out.assign(omega.size(), 0.0);
    std::vector<double> psi(omega.size());
    for (std::size_t i = 0; i < omega.size(); ++i) psi[i] = omega[i] * inv_s2_[i];
    // d/dt omega_i -= sum advection(i,j,k) psi_j omega_k over the full antisymmetric
    // expansion of each canonical entry
    for (const auto& e : entries_) {
        double v = e.value;
        ModeId i = e.i, j = e.j, k = e.k;
        if (in_z_[i]) out[i] -= v * (psi[j] * omega[k] - psi[k] * omega[j]);
        if (in_z_[j]) out[j] -= v * (psi[k] * omega[i] - psi[i] * omega[k]);
        if (in_z_[k]) out[k] -= v * (psi[i] * omega[j] - psi[j] * omega[i]);
    }
    if (!harmonic.empty()) {
        for (const auto& op : harmonic_ops_)
            out[op.k] -= harmonic[op.h] * op.value * omega[op.j];
    }
}

StateDeriv GalerkinRhs::operator()(const GalerkinState& state) const {
    StateDeriv d;
    d.domega = SpectralField(*table_);
    advection(state.omega.coeffs(), state.harmonic, d.domega.coeffs());
    for (std::size_t i = 0; i < d.domega.size(); ++i)
        d.domega.coeffs()[i] += lin_[i] * state.omega.coeffs()[i];
    // P_H grad_U U vanishes for constant harmonic fields and div-free U, and
    // P_H Delta_M U = 0 on the flat torus: the harmonic momentum is steady.
    d.dharmonic.assign(state.harmonic.size(), 0.0);
    return d;
}

StateDeriv rhs(const GalerkinState& state, const GalerkinRhs& system) { return system(state); }

namespace {

void check_finite(const std::vector<double>& w, double t) {
    for (double c : w) {
        if (!std::isfinite(c) || std::abs(c) > kBlowupThreshold)
            throw BlowupError("coefficient magnitude exceeded the blow-up threshold", t);
    }
}

}  // namespace

GalerkinState step(const GalerkinState& state, const GalerkinRhs& system) {
    return step(state, system, system.config().dt);
}

GalerkinState step(const GalerkinState& state, const GalerkinRhs& system, double dt) {
    GalerkinState next = state;
    if (dt == 0.0) return next;
    const auto& lin = system.linear_symbol();
    const std::size_t n = state.omega.size();
    const std::vector<double>& w0 = state.omega.coeffs();
    std::vector<double>& w1 = next.omega.coeffs();

    if (system.config().scheme == TimeScheme::ImexEuler) {
        std::vector<double> adv;
        system.advection(w0, state.harmonic, adv);
        for (std::size_t i = 0; i < n; ++i)
            w1[i] = (w0[i] + dt * adv[i]) / (1.0 - dt * lin[i]);
    } else {
        // integrating-factor RK4: exact exp(lin dt) on the diagonal symbol,
        // classical RK4 on the advection in the transformed variable
        std::vector<double> e_full(n), e_half(n);
        for (std::size_t i = 0; i < n; ++i) {
            e_full[i] = std::exp(lin[i] * dt);
            e_half[i] = std::exp(lin[i] * 0.5 * dt);
        }
        std::vector<double> k1, k2, k3, k4, tmp(n);
        system.advection(w0, state.harmonic, k1);
        for (std::size_t i = 0; i < n; ++i) tmp[i] = e_half[i] * (w0[i] + 0.5 * dt * k1[i]);
        system.advection(tmp, state.harmonic, k2);
        for (std::size_t i = 0; i < n; ++i) tmp[i] = e_half[i] * w0[i] + 0.5 * dt * k2[i];
        system.advection(tmp, state.harmonic, k3);
        for (std::size_t i = 0; i < n; ++i) tmp[i] = e_full[i] * w0[i] + dt * e_half[i] * k3[i];
        system.advection(tmp, state.harmonic, k4);
        for (std::size_t i = 0; i < n; ++i) {
            w1[i] = e_full[i] * w0[i] +
                    dt / 6.0 *
                        (e_full[i] * k1[i] + 2.0 * e_half[i] * (k2[i] + k3[i]) + k4[i]);
        }
    }
    next.t = state.t + dt;
    check_finite(w1, next.t);
    return next;
}

MonitorRecord diagnostics(const GalerkinState& state) {
    MonitorRecord r;
    r.t = state.t;
    r.energy = velocity_energy(state.omega, state.harmonic);
    double ens = 0.0;
    for (const Mode& m : state.omega.table().modes) {
        if (m.s == 0.0) continue;
        ens += state.omega[m.id] * state.omega[m.id];
    }
    r.enstrophy = ens;
    for (const auto& [n, ids] : state.omega.table().shells)
        r.shell_norms.push_back(state.omega.shell_norm(n));
    return r;
}

double enstrophy_constant(const ManifoldConfig& manifold) { return manifold.ricci_shift(); }

RunResult run(const RunConfig& config, const GalerkinState& initial, const GalerkinRhs& system) {
    initial.validate(system.table());
    RunResult result;
    result.enstrophy_constant = enstrophy_constant(config.manifold);

    const double u0 = std::sqrt(velocity_energy(initial.omega, initial.harmonic));
    const double w0 = initial.omega.norm_l2();
    auto record = [&](const GalerkinState& s) {
        MonitorRecord r = diagnostics(s);
        r.energy_residual = std::max(0.0, std::sqrt(r.energy) - u0);
        double envelope = (w0 + u0) * std::exp(config.nu * result.enstrophy_constant * s.t);
        r.enstrophy_residual = std::max(0.0, std::sqrt(r.enstrophy) - envelope);
        result.max_energy_residual = std::max(result.max_energy_residual, r.energy_residual);
        result.max_enstrophy_residual =
            std::max(result.max_enstrophy_residual, r.enstrophy_residual);
        result.records.push_back(std::move(r));
    };

    GalerkinState state = initial;
    record(state);
    long nsteps =
        config.dt > 0.0 ? static_cast<long>(std::floor(config.t_end / config.dt + 1e-9)) : 0;
    // a trailing fractional step covers horizons that are not multiples of dt
    double remainder = config.t_end - nsteps * config.dt;
    if (remainder > 1e-12 * std::max(1.0, config.t_end)) {
        ++nsteps;
    } else {
        remainder = 0.0;
    }
    try {
        for (long s = 1; s <= nsteps; ++s) {
            double dt = (remainder > 0.0 && s == nsteps) ? remainder : config.dt;
            state = step(state, system, dt);
            if (s % config.monitor_cadence == 0 || s == nsteps) record(state);
        }
    } catch (const BlowupError& e) {
        result.blew_up = true;
        result.blowup_time = e.time;
        result.final_state = state;
        return result;
    }
    result.final_state = state;
    return result;
}

}  // namespace nsshell
