#include "nsshell/field.hpp"

#include <cmath>

#include "nsshell/errors.hpp"

namespace nsshell {

SpectralField::SpectralField(const SpectrumTable& table, std::vector<double> coeffs)
    : table_(&table), coeffs_(std::move(coeffs)) {
    if (coeffs_.size() != table.size())
        throw DomainError("coefficient vector length does not match the spectrum table");
}

bool SpectralField::mean_zero(double tol) const { return std::abs(coeffs_[0]) <= tol; }

double SpectralField::norm_l2() const {
    double sum = 0.0;
    for (double c : coeffs_) sum += c * c;
    return std::sqrt(sum);
}

SpectralField shell_project(const SpectralField& f, int n) {
    SpectralField out(f.table());
    const auto* ids = f.table().shell_modes(n);
    if (!ids) return out;
    for (ModeId id : *ids) out[id] = f[id];
    return out;
}

SpectralField eigenspace_project(const SpectralField& f, int group) {
    SpectralField out(f.table());
    auto it = f.table().eigenspaces.find(group);
    if (it == f.table().eigenspaces.end()) return out;
    for (ModeId id : it->second) out[id] = f[id];
    return out;
}

SpectralField inverse_laplacian(const SpectralField& f, double tol) {
    if (!f.mean_zero(tol))
        throw DomainError("inverse_laplacian: constant-mode coefficient must vanish (pi_0 f = 0)");
    SpectralField out(f.table());
    for (const Mode& m : f.table().modes) {
        if (m.s == 0.0) continue;
        out[m.id] = f[m.id] / m.s2;
    }
    return out;
}

double sobolev_norm(const SpectralField& f, int m) {
    if (m < 0) throw DomainError("sobolev_norm: order must be a nonnegative integer");
    double harmonic = std::abs(f[0]);
    double sum = 0.0;
    for (const auto& [n, ids] : f.table().shells) {
        double k = f.table().shell_key(n);
        double sq = 0.0;
        for (ModeId id : ids) sq += f[id] * f[id];
        sum += std::pow(k, 2.0 * m) * sq;
    }
    return harmonic + std::sqrt(sum);
}

SpectralField operator+(const SpectralField& a, const SpectralField& b) {
    SpectralField out = a;
    for (std::size_t i = 0; i < out.size(); ++i) out[ModeId(i)] += b[ModeId(i)];
    return out;
}

SpectralField operator-(const SpectralField& a, const SpectralField& b) {
    SpectralField out = a;
    for (std::size_t i = 0; i < out.size(); ++i) out[ModeId(i)] -= b[ModeId(i)];
    return out;
}

SpectralField operator*(double a, const SpectralField& f) {
    SpectralField out = f;
    for (std::size_t i = 0; i < out.size(); ++i) out[ModeId(i)] *= a;
    return out;
}

}  // namespace nsshell
