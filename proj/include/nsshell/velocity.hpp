#pragma once

#include <vector>

#include "nsshell/field.hpp"
#include "nsshell/grid.hpp"
#include "nsshell/manifold.hpp"

namespace nsshell {

// Divergence-free velocity U = P_H U + curl (-Delta)^{-1} omega, stored as the
// harmonic coefficients (dim 2 on the torus, 0 on the sphere) plus the stream
// function psi = (-Delta)^{-1} omega.
struct VelocityRepr {
    std::vector<double> harmonic;
    SpectralField stream;

    // ||U||_2^2 = |harmonic|^2 + sum_i s_i^2 psi_i^2  (= sum omega_i^2 / s_i^2).
    double energy() const;
};

// Requires pi_0 omega = 0; harmonic must have the manifold's harmonic dimension
// (DimensionError otherwise).
VelocityRepr velocity_from_vorticity(const SpectralField& omega,
                                     const std::vector<double>& harmonic);

// Recomputes omega = star d flat U from the stream function (exact inverse of
// velocity_from_vorticity up to rounding).
SpectralField vorticity_of(const VelocityRepr& u);

// star d Delta_M flat U in coefficients: (-s^2 + c) omega_i with c the Ricci
// shift of the variant. Requires pi_0 omega = 0.
SpectralField viscous_term(const SpectralField& omega, const std::vector<double>& harmonic,
                           LaplacianVariant variant);

// P_H Delta_M U on the harmonic basis. Identically zero on the flat torus;
// DimensionError on the sphere (no harmonic sector).
std::vector<double> harmonic_viscous_term(const VelocityRepr& u, LaplacianVariant variant);

// Grid values of the two velocity components in the orthonormal frame
// (u1, u2) = (theta-hat, phi-hat) on the sphere, (x, y) on the torus.
void velocity_on_grid(const VelocityRepr& u, const Transform& tr, std::vector<double>& u1,
                      std::vector<double>& u2);

// Energy identity ||U||_2^2 = |harmonic|^2 + sum omega_i^2/s_i^2 evaluated from
// the vorticity side.
double velocity_energy(const SpectralField& omega, const std::vector<double>& harmonic);

}  // namespace nsshell
