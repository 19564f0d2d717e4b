#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "nsshell/field.hpp"
#include "nsshell/grid.hpp"

namespace nsshell {

// Random (or concentrated) unit-norm field supported on a single shell.
// trial 0: the shell's highest-label mode (sectoral on the sphere);
// trial 1: the shell's first mode (zonal on the sphere);
// trial >= 2: seeded Gaussian coefficients. All normalized to ||.||_2 = 1.
SpectralField shell_trial_field(const SpectrumTable& table, int shell, int trial,
                                std::uint64_t seed);

struct BilinearCell {
    int l1_shell = 0, l2_shell = 0;
    double l1 = 0.0, l2 = 0.0;  // shell keys
    int a = 0, b = 0, c = 0;
    int trials = 0;
    double max_ratio = 0.0;
    double mean_ratio = 0.0;
    double max_raw = 0.0;  // ||product|| / (||f|| ||g||), no scaling divided out
};

struct BilinearSweepConfig {
    int l1_min = 0, l1_max = 0;  // shell indices
    int l2_min = 0, l2_max = 0;
    int a = 0, b = 0, c = 0;  // derivative orders; a + b <= 2
    int trials = 1;
    std::uint64_t seed = 0;
};

// Measures ||(grad^a P_l1 f) * (grad^b (-Delta)^{-c} P_l2 g)||_2 against
// min(l1,l2)^{1/4} l1^a l2^{b-2c} ||P_l1 f|| ||P_l2 g|| by quadrature.
// The transform degree must cover the product (ConfigError otherwise).
std::vector<BilinearCell> bilinear_sweep(const Transform& tr, const BilinearSweepConfig& config);

struct TrilinearCell {
    int l1_shell = 0, l2_shell = 0, l3_shell = 0;
    double l1 = 0.0, l2 = 0.0, l3 = 0.0;
    double k_separation = 0.0;  // (l1 - l2 - 2)/l3; > 1 marks the distant regime
    double max_value = 0.0;     // |integral| / prod l_j^{a_j-2b_j} ||P_lj f_j||
    double reference = 0.0;     // l3^{1/4} / K^J for the configured J (distant cells)
};

struct TrilinearConfig {
    int l2_shell = 0, l3_shell = 0;
    int l1_min = 0, l1_max = 0;  // swept output shells
    std::array<int, 3> a = {0, 0, 0};
    std::array<int, 3> b = {0, 0, 0};
    int j_decay = 4;  // reference exponent J in the decay curve l3^{1/4}/K^J
    int trials = 1;
    std::uint64_t seed = 0;
};

std::vector<TrilinearCell> trilinear_decay(const Transform& tr, const TrilinearConfig& config);

// Modulates f over the shell by e^{i 2 pi z theta} per eigenvalue offset z and
// returns | ||P_l f_theta||_(quadrature) - ||P_l f||_(coefficients) |.
// Also verifies P_l f = sum of eigenspace projections over the shell (exact).
double fourier_trick_residual(const Transform& tr, const SpectralField& f, int shell,
                              double theta);

// Relative residual of n1^2 I = (n2^2 + n3^2) I - 2 D with I = int e1 e2 e3 and
// D = int e1 <grad e2, grad e3>, both by quadrature. The resonant case
// n1^2 = n2^2 + n3^2 is checked in the same undivided form.
double triple_product_identity_residual(const Transform& tr, ModeId e1, ModeId e2, ModeId e3);

// Quadrature needed by bilinear_sweep for the given orders (degree of the
// squared product plus slack).
int bilinear_required_degree(const SpectrumTable& table, int l1_shell, int l2_shell, int a, int b);

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t c1, std::uint64_t c2,
                          std::uint64_t c3);

}  // namespace nsshell
