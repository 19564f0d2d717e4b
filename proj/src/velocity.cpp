#include "nsshell/velocity.hpp"

#include <cmath>

#include "nsshell/errors.hpp"

namespace nsshell {

double VelocityRepr::energy() const {
    double e = 0.0;
    for (double h : harmonic) e += h * h;
    for (const Mode& m : stream.table().modes) {
        if (m.s == 0.0) continue;
        e += m.s2 * stream[m.id] * stream[m.id];
    }
    return e;
}

VelocityRepr velocity_from_vorticity(const SpectralField& omega,
                                     const std::vector<double>& harmonic) {
    const SpectrumTable& table = omega.table();
    int hdim = table.kind == ManifoldKind::Torus ? 2 : 0;
    if (static_cast<int>(harmonic.size()) != hdim)
        throw DimensionError("harmonic coefficient count must equal the first Betti number (" +
                             std::to_string(hdim) + " on the " + to_string(table.kind) + ")");
    VelocityRepr u;
    u.harmonic = harmonic;
    u.stream = inverse_laplacian(omega);
    return u;
}

SpectralField vorticity_of(const VelocityRepr& u) {
    SpectralField omega(u.stream.table());
    for (const Mode& m : u.stream.table().modes) {
        if (m.s == 0.0) continue;
        omega[m.id] = m.s2 * u.stream[m.id];  // omega = -Delta psi
    }
    return omega;
}

SpectralField viscous_term(const SpectralField& omega, const std::vector<double>& harmonic,
                           LaplacianVariant variant) {
    const SpectrumTable& table = omega.table();
    if (!omega.mean_zero())
        throw DomainError("viscous_term: pi_0 omega = 0 required");
    (void)harmonic;  // the harmonic part of U is curl-free and contributes nothing here
    ManifoldConfig mc;
    mc.kind = table.kind;
    mc.variant = variant;
    double c = mc.ricci_shift();
    SpectralField out(table);
    for (const Mode& m : table.modes) {
        if (m.s == 0.0) continue;
        out[m.id] = (-m.s2 + c) * omega[m.id];
    }
    return out;
}

std::vector<double> harmonic_viscous_term(const VelocityRepr& u, LaplacianVariant variant) {
    const SpectrumTable& table = u.stream.table();
    if (table.kind == ManifoldKind::Sphere)
        throw DimensionError("harmonic_viscous_term: the sphere has no harmonic sector");
    (void)variant;  // Delta_H kills harmonic fields and Ric = 0 on the flat torus
    return std::vector<double>(u.harmonic.size(), 0.0);
}

void velocity_on_grid(const VelocityRepr& u, const Transform& tr, std::vector<double>& u1,
                      std::vector<double>& u2) {
    // curl psi in the orthonormal frame: torus (psi_y, -psi_x);
    // sphere ((1/sin) psi_phi, -psi_theta) in (theta-hat, phi-hat).
    std::vector<double> g1, g2;
    tr.synthesize_gradient(u.stream.coeffs(), g1, g2);
    u1.assign(tr.n_points(), 0.0);
    u2.assign(tr.n_points(), 0.0);
    if (tr.table().kind == ManifoldKind::Torus) {
        for (std::size_t p = 0; p < u1.size(); ++p) {
            u1[p] = g2[p] + (u.harmonic.empty() ? 0.0 : u.harmonic[0]);
            u2[p] = -g1[p] + (u.harmonic.size() > 1 ? u.harmonic[1] : 0.0);
        }
    } else {
        for (std::size_t p = 0; p < u1.size(); ++p) {
            u1[p] = g2[p];
            u2[p] = -g1[p];
        }
    }
}

double velocity_energy(const SpectralField& omega, const std::vector<double>& harmonic) {
    double e = 0.0;
    for (double h : harmonic) e += h * h;
    for (const Mode& m : omega.table().modes) {
        if (m.s == 0.0) continue;
        e += omega[m.id] * omega[m.id] / m.s2;
    }
    return e;
}

}  // namespace nsshell
