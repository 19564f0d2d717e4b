#pragma once

#include <vector>

#include "nsshell/spectrum.hpp"

namespace nsshell {

// Real coefficient vector over the retained eigenbasis of one SpectrumTable.
// Operations never mutate their inputs.
class SpectralField {
  public:
    SpectralField() = default;
    explicit SpectralField(const SpectrumTable& table)
        : table_(&table), coeffs_(table.size(), 0.0) {}
    SpectralField(const SpectrumTable& table, std::vector<double> coeffs);

    const SpectrumTable& table() const { return *table_; }
    const std::vector<double>& coeffs() const { return coeffs_; }
    std::vector<double>& coeffs() { return coeffs_; }
    double operator[](ModeId id) const { return coeffs_[id]; }
    double& operator[](ModeId id) { return coeffs_[id]; }
    std::size_t size() const { return coeffs_.size(); }
    bool mean_zero(double tol = 0.0) const;

    double norm_l2() const;
    double shell_norm(int n) const { return table_->shell_norm(coeffs_, n); }

  private:
    const SpectrumTable* table_ = nullptr;
    std::vector<double> coeffs_;
};

// P_k: zero every coefficient outside shell n. Unknown shells yield the zero field.
SpectralField shell_project(const SpectralField& f, int n);

// pi_s: zero every coefficient outside the eigenspace with eigenvalue s
// (torus: |wavevector|^2 = q; sphere: degree l).
SpectralField eigenspace_project(const SpectralField& f, int group);

// (-Delta)^{-1}: divide each coefficient by s^2. The constant-mode coefficient
// must vanish (DomainError otherwise).
SpectralField inverse_laplacian(const SpectralField& f, double tol = 0.0);

// ||pi_0 f||_2 + sqrt(sum_k k^{2m} ||P_k f||_2^2) over shell keys k.
double sobolev_norm(const SpectralField& f, int m);

SpectralField operator+(const SpectralField& a, const SpectralField& b);
SpectralField operator-(const SpectralField& a, const SpectralField& b);
SpectralField operator*(double a, const SpectralField& f);

}  // namespace nsshell
