#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "nsshell/manifold.hpp"

namespace nsshell {

using ModeId = std::uint32_t;

// One real orthonormal eigenfunction of the Laplace-Beltrami operator.
//
// Torus: a = n1, b = n2 of the canonical wavevector (n1 > 0, or n1 == 0 and
// n2 > 0), trig selects sqrt(2)*cos(2 pi n.x) (0) or sqrt(2)*sin(2 pi n.x) (1).
// Sphere: a = l, b = m of the real spherical harmonic Y_{l,m} (m < 0 are the
// sine-type harmonics). The constant mode has a = b = trig = 0 and s = 0.
struct Mode {
    ModeId id = 0;
    double s = 0.0;   // eigenvalue of sqrt(-Laplacian)
    double s2 = 0.0;  // eigenvalue of -Laplacian, exact: l(l+1) or 4 pi^2 |n|^2
    int shell = -1;   // integer shell index n (key = lambda1 + n); -1 for the constant
    int a = 0;
    int b = 0;
    int trig = 0;

    std::string label(ManifoldKind kind) const;
};

// Eigenstructure below the cutoff: modes, frequency shells [k, k+1) with
// k = lambda1 + n, and eigenspace grouping. Immutable after construction and
// safe to share across threads.
class SpectrumTable {
  public:
    ManifoldKind kind = ManifoldKind::Torus;
    double cutoff = 0.0;
    int quad_degree = 0;
    double lambda1 = 0.0;

    std::vector<Mode> modes;                      // sorted by (s, label); modes[id].id == id
    std::map<int, std::vector<ModeId>> shells;    // shell index n -> mode ids
    std::map<int, std::vector<ModeId>> eigenspaces;  // torus: |n|^2; sphere: l

    std::size_t size() const { return modes.size(); }
    double shell_key(int n) const { return lambda1 + n; }
    const std::vector<ModeId>* shell_modes(int n) const;

    // Unique shell index n with s in [lambda1 + n, lambda1 + n + 1).
    // s == 0 yields nullopt (the constant mode has no shell); s < 0 is a DomainError.
    std::optional<int> shell_of(double s) const;

    // Largest torus wavevector component / largest sphere degree retained.
    int max_label() const;
    // L^2 norm of the shell-restricted coefficient slice of `coeffs`.
    double shell_norm(const std::vector<double>& coeffs, int n) const;

    std::uint64_t fingerprint() const;
};

SpectrumTable build_spectrum(const ManifoldConfig& config);

int default_quad_degree(ManifoldKind kind, double cutoff);

}  // namespace nsshell
