#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "nsshell/dynamics.hpp"
#include "nsshell/field.hpp"
#include "nsshell/trapping.hpp"
#include "nsshell/triads.hpp"

namespace nsshell {

// binary64 -> shortest text that parses back bit-exactly
std::string format_double(double v);

// ---- SpectralField JSON: {"table": {...}, "coeffs": [[mode_id, value], ...]}

std::string field_to_json(const SpectralField& f);
SpectralField field_from_json(const SpectrumTable& table, const std::string& json_text);

// ---- GalerkinState snapshot (restart-exact)

std::string state_to_json(const GalerkinState& state, const ManifoldConfig& manifold);
GalerkinState state_from_json(const SpectrumTable& table, const std::string& json_text,
                              ManifoldConfig* manifold_out = nullptr);

// ---- trajectory CSV: t,energy,enstrophy,shell:<k>...,energy_residual,enstrophy_residual

void write_trajectory_csv(std::ostream& os, const SpectrumTable& table,
                          const std::vector<MonitorRecord>& records);

// ---- DominationReport JSON

std::string report_to_json(const DominationReport& report);
void write_margin_csv(std::ostream& os, const std::vector<ShellMargin>& margins);
void write_report_sweep_csv(std::ostream& os, const std::vector<DominationReport>& reports);

// ---- spectrum + triads binary cache
//
// Little-endian layout: magic "NSSHELLSPX1\n", u32 version, u8 kind, f64 cutoff,
// u32 quad_degree, f64 lambda1, u64 n_modes, modes (u32 id, f64 s, i32 shell,
// i32 a, i32 b, u8 trig), u64 counts + entries for product / advection
// (u32,u32,u32,f64) and harmonic (u8,u32,u32,f64). Deterministic: a fresh
// assembly always serializes to the same bytes.

void write_cache(std::ostream& os, const SpectrumTable& table, const TriadTensor& triads);
void read_cache(std::istream& is, SpectrumTable& table, TriadTensor& triads);
std::string cache_file_name(ManifoldKind kind, double cutoff, int quad_degree);

}  // namespace nsshell
