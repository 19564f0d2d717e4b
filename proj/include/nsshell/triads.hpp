#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "nsshell/spectrum.hpp"

namespace nsshell {

// Coupling integrals driving the Galerkin dynamics.
//
//   product:   (i,j,k) -> int e_i e_j e_k          (fully symmetric)
//   advection: (i,j,k) -> int e_i <curl e_j, grad e_k>  (fully antisymmetric)
//   harmonic_advection: (h,j,k) -> int e_k <H_h, grad e_j>  (torus only)
//
// Only canonical entries are stored (i <= j <= k for product, i < j < k for
// advection); accessors apply the symmetry, so the stored tensor satisfies the
// (anti)symmetry invariants structurally. Assembly is deterministic: entries
// are produced in mode-id order. Immutable after construction.
class TriadTensor {
  public:
    struct Entry {
        ModeId i, j, k;
        double value;
    };

    std::uint64_t table_fingerprint = 0;
    std::vector<Entry> product_entries;    // canonical i <= j <= k
    std::vector<Entry> advection_entries;  // canonical i < j < k
    // harmonic_advection[h] maps packed (j,k) -> value; only (cos,sin) partners
    // of one wavevector couple, so this is O(modes).
    std::vector<std::unordered_map<std::uint64_t, double>> harmonic;

    double product(ModeId i, ModeId j, ModeId k) const;
    double advection(ModeId i, ModeId j, ModeId k) const;
    double harmonic_advection(int h, ModeId j, ModeId k) const;

    std::size_t nnz() const { return product_entries.size() + advection_entries.size(); }

    static std::uint64_t pack(ModeId j, ModeId k) {
        return (std::uint64_t(j) << 32) | std::uint64_t(k);
    }
    static std::uint64_t key3(ModeId a, ModeId b, ModeId c) {
        return (std::uint64_t(a) << 42) | (std::uint64_t(b) << 21) | std::uint64_t(c);
    }

    // entries must be sorted by key3 for the accessors; assemblers and the cache
    // loader call this once after filling the entry vectors
    void finalize();
};

// Torus entries are closed-form (products of exponentials); sphere entries use
// the separable Gauss-Legendre x analytic-longitude quadrature at the table's
// degree, which is exact for these integrands.
TriadTensor build_triads(const SpectrumTable& table);

// Stored triads grow like l_max^5 on the sphere; beyond this the transform path
// must be used instead.
inline constexpr int kTriadSphereDegreeLimit = 28;

}  // namespace nsshell
