#pragma once

#include <string>

namespace nsshell {

enum class ManifoldKind { Torus, Sphere };

// Vector Laplacian acting on divergence-free fields: Hodge, Bochner = Hodge + Ric,
// Deformation = Hodge + 2 Ric.
enum class LaplacianVariant { Hodge, Bochner, Deformation };

struct ManifoldConfig {
    ManifoldKind kind = ManifoldKind::Torus;
    LaplacianVariant variant = LaplacianVariant::Hodge;
    // Retain every eigenvalue s of sqrt(-Laplacian) with s < cutoff.
    double cutoff = 0.0;
    // Quadrature degree; 0 selects the default (exact for triple products).
    int quad_degree = 0;

    // Smallest nonzero eigenvalue of sqrt(-Laplacian): 2*pi on the unit square
    // torus, sqrt(2) on the unit sphere.
    double lambda1() const;
    // Multiplier c of the Ricci shift on 1-forms: the viscous symbol per mode is
    // s^2 - c. Zero on the flat torus for every variant.
    double ricci_shift() const;
    // Dimension of the harmonic 1-form space (first Betti number): 2 or 0.
    int harmonic_dim() const;

    void validate() const;  // throws ConfigError
};

std::string to_string(ManifoldKind kind);
std::string to_string(LaplacianVariant variant);
ManifoldKind manifold_kind_from_string(const std::string& s);
LaplacianVariant laplacian_variant_from_string(const std::string& s);

}  // namespace nsshell
