#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "nsshell/dynamics.hpp"
#include "nsshell/field.hpp"
#include "nsshell/grid.hpp"
#include "nsshell/triads.hpp"

namespace nsshell {

// Envelope ||P_k omega||_2 <= A1 sqrt(E_star) / k^r with
// A1 = (K0^r + 1)(A0/sqrt(E_star) + 1) + lambda1.
struct TrappingEnvelope {
    double r = 0.0;
    double a0 = 0.0;
    double k0 = 0.0;
    double e_star = 0.0;
    double lambda1 = 0.0;
    double a1 = 0.0;

    double bound(double k) const;  // A1 sqrt(E_star) / k^r
};

// Validates r > 1, K0 >= lambda1 + 10, E_star > 1 (ConfigError otherwise).
TrappingEnvelope make_envelope(double r, double a0, double k0, double e_star, double lambda1);
double envelope_amplitude(double r, double a0, double k0, double e_star, double lambda1);

struct ShellMargin {
    int shell = 0;
    double key = 0.0;
    double norm = 0.0;
    double bound = 0.0;
    double margin = 0.0;     // bound - norm; negative = envelope violated
    bool boundary_contact = false;
};

inline constexpr double kBoundaryContactRel = 1e-6;

std::vector<ShellMargin> envelope_margins(const SpectralField& omega,
                                          const TrappingEnvelope& envelope);

// Interaction-region tag of a shell pair (l1, l2) against output shell k.
// T* : |l1 - l2| <= k <= l1 + l2 (split by l1 vs k/2, 2k)
// A* : |l1 - l2| > k            (split by the distant thresholds k+2l+2, 2k+2)
// B* : l1 + l2 < k              (split by l1+2l2+2 / 2l1+l2+2 vs k and k/2)
enum class RegionTag { T1, T2, T3, A1a, A1b, A2a, A2b, A3a, A3b, B1a, B1b, B1c, B2a, B2b, B2c };

std::string to_string(RegionTag tag);
RegionTag region_of(double k, double l1, double l2);
const std::vector<RegionTag>& all_region_tags();

// Per-shell accounting of every non-diffusive term against the diffusion term.
struct DominationReport {
    int shell = 0;
    double key = 0.0;
    std::map<std::string, double> convective_by_region;  // region tag -> summed ||.||_2
    double harmonic_term = 0.0;
    double linear_terms = 0.0;
    double diffusion_magnitude = 0.0;   // nu |<<Delta P_k w, P_k w>>| / ||P_k w||
    double total_nondiffusive = 0.0;
    bool dominated = false;
    double tail_bound = 0.0;  // A1 sqrt(E_star) sum_{l > cutoff} l^{-r}
};

// Machinery shared by a k-sweep over one state: per-shell grids of
// curl (-Delta)^{-1} P_l omega and grad P_l omega plus their pairwise
// interactions analyzed back to coefficients. Uses the stored triads when
// provided, the exact transform otherwise.
class DominationScan {
  public:
    DominationScan(const SpectrumTable& table, const Transform& transform,
                   const SpectralField& omega, const std::vector<double>& harmonic,
                   const TriadTensor* triads = nullptr);

    // k is the shell index; its key must exceed K0 (DomainError otherwise).
    DominationReport report(int k, const TrappingEnvelope& envelope, double nu,
                            LaplacianVariant variant) const;

  private:
    const SpectrumTable* table_;
    const SpectralField* omega_;
    std::vector<double> harmonic_;
    // pair_norms_[(l1,l2)][shell n] = ||P_n <curl inv_lap P_l1 w, grad P_l2 w>||_2
    std::map<std::pair<int, int>, std::vector<double>> pair_norms_;
    std::map<int, std::vector<double>> harmonic_norms_;  // l -> per-shell norms
    std::vector<int> shell_ids_;

    void build_transform(const Transform& transform);
    void build_triads(const TriadTensor& triads);
};

double envelope_tail_bound(const TrappingEnvelope& envelope, double cutoff);

struct DecayFit {
    bool ok = false;
    std::string flag;  // "", "insufficient-data", "zero-signal", "degenerate"
    double slope = 0.0;
    double intercept = 0.0;
    double rms_residual = 0.0;
    int n_points = 0;
    bool within_bound = false;  // slope <= -(r - 7/4) + slack
};

// Least-squares slope of log(total non-diffusive) against log k. Requires at
// least five distinct k values (ConfigError otherwise as insufficient data).
DecayFit decay_fit(const std::vector<DominationReport>& reports, double r, double slack);

}  // namespace nsshell
