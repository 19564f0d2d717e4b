#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <set>
#include <vector>

#include "nsshell/field.hpp"
#include "nsshell/triads.hpp"
#include "nsshell/velocity.hpp"

namespace nsshell {

enum class TimeScheme { ImexEuler, IntegratingFactorRk4 };

std::string to_string(TimeScheme s);
TimeScheme time_scheme_from_string(const std::string& s);

struct RunConfig {
    ManifoldConfig manifold;
    std::set<int> shells;  // truncation set Z (shell indices); empty = all shells
    double nu = 0.0;
    double dt = 0.0;
    double t_end = 0.0;
    TimeScheme scheme = TimeScheme::IntegratingFactorRk4;
    int monitor_cadence = 1;  // steps between monitor records

    void validate() const;
};

struct GalerkinState {
    double t = 0.0;
    std::set<int> shells;  // Z
    SpectralField omega;
    std::vector<double> harmonic;

    void validate(const SpectrumTable& table) const;
};

struct MonitorRecord {
    double t = 0.0;
    double energy = 0.0;     // ||U||_2^2
    double enstrophy = 0.0;  // ||omega||_2^2
    std::vector<double> shell_norms;  // ||P_k omega||_2 per table shell, ascending n
    double energy_residual = 0.0;     // max(0, ||U(t)|| - ||U(0)||)
    double enstrophy_residual = 0.0;  // excess over the Gronwall envelope
};

struct StateDeriv {
    SpectralField domega;
    std::vector<double> dharmonic;
};

// Precompiled right-hand side of the truncated vorticity system. Holds the
// triad contraction plan for a fixed (table, Z); immutable once built, safe
// to share between runs.
class GalerkinRhs {
  public:
    GalerkinRhs(const SpectrumTable& table, const TriadTensor& triads, const RunConfig& config);

    const SpectrumTable& table() const { return *table_; }
    const RunConfig& config() const { return config_; }
    const std::set<int>& shells() const { return shells_; }

    // d/dt omega = -P_Z(<curl psi, grad omega> + <P_H U, grad omega>) + nu P_Z star d Delta_M flat U,
    // d/dt P_H U = 0 (flat harmonic sector; exact on both backends).
    StateDeriv operator()(const GalerkinState& state) const;

    // Advection part only (the integrating-factor scheme handles the linear
    // symbol separately).
    void advection(const std::vector<double>& omega, const std::vector<double>& harmonic,
                   std::vector<double>& out) const;

    // Per-mode linear symbol -nu * (s^2 - c); zero outside Z.
    const std::vector<double>& linear_symbol() const { return lin_; }

  private:
    const SpectrumTable* table_;
    const TriadTensor* triads_;
    RunConfig config_;
    std::set<int> shells_;
    std::vector<std::uint8_t> in_z_;   // per mode
    std::vector<double> inv_s2_;
    std::vector<double> lin_;
    // canonical advection entries restricted to retained support
    std::vector<TriadTensor::Entry> entries_;
    struct HarmonicOp {
        int h;
        ModeId j, k;
        double value;
    };
    std::vector<HarmonicOp> harmonic_ops_;
};

StateDeriv rhs(const GalerkinState& state, const GalerkinRhs& system);

// One time step. dt == 0 returns the state unchanged. The integrating-factor
// scheme applies exp(lin * dt) exactly per mode and classical RK4 to the
// advection; IMEX Euler treats diffusion implicitly and advection explicitly.
// Throws BlowupError when a coefficient exceeds 1e30 or turns non-finite.
GalerkinState step(const GalerkinState& state, const GalerkinRhs& system);
GalerkinState step(const GalerkinState& state, const GalerkinRhs& system, double dt);

MonitorRecord diagnostics(const GalerkinState& state);

struct RunResult {
    std::vector<MonitorRecord> records;
    GalerkinState final_state;
    bool blew_up = false;
    double blowup_time = 0.0;
    double max_energy_residual = 0.0;
    double max_enstrophy_residual = 0.0;
    double enstrophy_constant = 0.0;  // C in the Gronwall envelope
};

// Integrate to t_end, recording monitors every `monitor_cadence` steps (plus the
// initial and final states). On blow-up the partial trajectory is returned with
// blew_up set.
RunResult run(const RunConfig& config, const GalerkinState& initial, const GalerkinRhs& system);

// Gronwall envelope constant: the Ricci shift c of the variant, from
// d/dt ||omega||^2 <= 2 nu c ||omega||^2.
double enstrophy_constant(const ManifoldConfig& manifold);

inline constexpr double kBlowupThreshold = 1e30;

}  // namespace nsshell
