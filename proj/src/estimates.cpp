#include "nsshell/estimates.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "nsshell/errors.hpp"

namespace nsshell {

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t c1, std::uint64_t c2,
                          std::uint64_t c3) {
    // splitmix64 over the mixed counters; deterministic and schedule-independent
    std::uint64_t z = base + 0x9e3779b97f4a7c15ull * (c1 + 1) + 0xbf58476d1ce4e5b9ull * (c2 + 1) +
                      0x94d049bb133111ebull * (c3 + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

SpectralField shell_trial_field(const SpectrumTable& table, int shell, int trial,
                                std::uint64_t seed) {
    const auto* ids = table.shell_modes(shell);
    if (!ids || ids->empty()) throw ConfigError("trial field: empty shell");
    SpectralField f(table);
    if (trial == 0) {
        f[ids->back()] = 1.0;  // highest label: sectoral mode on the sphere
        return f;
    }
    if (trial == 1) {
        // zonal candidate on the sphere (m = 0 exists in every shell); first mode otherwise
        ModeId pick = ids->front();
        for (ModeId id : *ids)
            if (table.kind == ManifoldKind::Sphere && table.modes[id].b == 0) pick = id;
        f[pick] = 1.0;
        return f;
    }
    std::mt19937_64 rng(derive_seed(seed, std::uint64_t(shell), std::uint64_t(trial), 0));
    std::normal_distribution<double> gauss(0.0, 1.0);
    double sum = 0.0;
    for (ModeId id : *ids) {
        double c = gauss(rng);
        f[id] = c;
        sum += c * c;
    }
    double inv = 1.0 / std::sqrt(sum);
    for (ModeId id : *ids) f[id] *= inv;
    return f;
}

int bilinear_required_degree(const SpectrumTable& table, int l1_shell, int l2_shell, int a,
                             int b) {
    // squared products of two shell fields and their derivatives: polynomial
    // degree 2 (l1 + l2 + a + b) on the sphere; torus analog in wavenumbers
    double k1 = table.shell_key(l1_shell) + 1.0, k2 = table.shell_key(l2_shell) + 1.0;
    if (table.kind == ManifoldKind::Sphere) {
        return 2 * (int(std::ceil(k1)) + int(std::ceil(k2)) + a + b) + 4;
    }
    int n1 = int(std::ceil(k1 / (2.0 * std::numbers::pi)));
    int n2 = int(std::ceil(k2 / (2.0 * std::numbers::pi)));
    return 2 * (n1 + n2) + 4;
}

namespace {

// pointwise scalar of the contraction grad^a f * grad^b g for a+b <= 2,
// squared; the L2 norm is sqrt(int of this)
struct ContractionGrids {
    std::vector<double> f, f1, f2, fh11, fh12, fh22;
    int order = 0;
};

ContractionGrids make_grids(const Transform& tr, const std::vector<double>& coeffs, int order) {
    ContractionGrids g;
    g.order = order;
    if (order == 0) {
        g.f = tr.synthesize(coeffs);
    } else if (order == 1) {
        tr.synthesize_gradient(coeffs, g.f1, g.f2);
    } else {
        tr.synthesize_hessian(coeffs, g.fh11, g.fh12, g.fh22);
    }
    return g;
}

double product_norm(const Transform& tr, const ContractionGrids& A, const ContractionGrids& B) {
    double sum = 0.0;
    const auto& w = tr.weights();
    int a = A.order, b = B.order;
    for (std::size_t p = 0; p < w.size(); ++p) {
        double v2 = 0.0;
        if (a == 0 && b == 0) {
            double v = A.f[p] * B.f[p];
            v2 = v * v;
        } else if (a == 1 && b == 1) {
            double v = A.f1[p] * B.f1[p] + A.f2[p] * B.f2[p];
            v2 = v * v;
        } else if (a == 1 && b == 0) {
            v2 = (A.f1[p] * A.f1[p] + A.f2[p] * A.f2[p]) * B.f[p] * B.f[p];
        } else if (a == 0 && b == 1) {
            v2 = (B.f1[p] * B.f1[p] + B.f2[p] * B.f2[p]) * A.f[p] * A.f[p];
        } else if (a == 2 && b == 0) {
            double h2 = A.fh11[p] * A.fh11[p] + 2.0 * A.fh12[p] * A.fh12[p] +
                        A.fh22[p] * A.fh22[p];
            v2 = h2 * B.f[p] * B.f[p];
        } else if (a == 0 && b == 2) {
            double h2 = B.fh11[p] * B.fh11[p] + 2.0 * B.fh12[p] * B.fh12[p] +
                        B.fh22[p] * B.fh22[p];
            v2 = h2 * A.f[p] * A.f[p];
        } else {
            throw ConfigError("unsupported derivative contraction pattern");
        }
        sum += w[p] * v2;
    }
    return std::sqrt(sum);
}

}  // namespace

std::vector<BilinearCell> bilinear_sweep(const Transform& tr, const BilinearSweepConfig& config) {
    const SpectrumTable& table = tr.table();
    if (config.a + config.b > 2 || config.a < 0 || config.b < 0 || config.c < 0)
        throw ConfigError("bilinear sweep supports derivative orders with a + b <= 2");
    if (config.trials < 1) throw ConfigError("trials must be >= 1");
    std::vector<BilinearCell> cells;
    for (int l1 = config.l1_min; l1 <= config.l1_max; ++l1) {
        if (!table.shell_modes(l1)) continue;
        for (int l2 = config.l2_min; l2 <= config.l2_max; ++l2) {
            if (!table.shell_modes(l2)) continue;
            int need = bilinear_required_degree(table, l1, l2, config.a, config.b);
            if (tr.quad_degree() < need)
                throw ConfigError("quadrature degree " + std::to_string(tr.quad_degree()) +
                                  " below the required " + std::to_string(need));
            BilinearCell cell;
            cell.l1_shell = l1;
            cell.l2_shell = l2;
            cell.l1 = table.shell_key(l1);
            cell.l2 = table.shell_key(l2);
            cell.a = config.a;
            cell.b = config.b;
            cell.c = config.c;
            cell.trials = config.trials;
            double scale = std::pow(std::min(cell.l1, cell.l2), 0.25) *
                           std::pow(cell.l1, config.a) *
                           std::pow(cell.l2, config.b - 2.0 * config.c);
            double sum = 0.0;
            for (int t = 0; t < config.trials; ++t) {
                SpectralField f = shell_trial_field(table, l1, t, config.seed);
                SpectralField g = shell_trial_field(table, l2, t, config.seed + 0x517cc1b7ull);
                double den_norms = f.norm_l2() * g.norm_l2();  // shell norms before (-Delta)^{-c}
                if (config.c > 0) {
                    for (const Mode& m : table.modes)
                        if (g[m.id] != 0.0) g[m.id] /= std::pow(m.s2, double(config.c));
                }
                ContractionGrids A = make_grids(tr, f.coeffs(), config.a);
                ContractionGrids B = make_grids(tr, g.coeffs(), config.b);
                double num = product_norm(tr, A, B);
                double raw = num / den_norms;
                double ratio = raw / scale;
                cell.max_ratio = std::max(cell.max_ratio, ratio);
                cell.max_raw = std::max(cell.max_raw, raw);
                sum += ratio;
            }
            cell.mean_ratio = sum / config.trials;
            cells.push_back(cell);
        }
    }
    if (cells.empty()) throw ConfigError("bilinear sweep selected no valid shells");
    return cells;
}

std::vector<TrilinearCell> trilinear_decay(const Transform& tr, const TrilinearConfig& config) {
    const SpectrumTable& table = tr.table();
    int ones = 0;
    for (int j = 0; j < 3; ++j) {
        if (config.a[j] != 0 && config.a[j] != 1)
            throw ConfigError("trilinear: derivative orders a_j must be 0 or 1");
        ones += config.a[j];
    }
    if (ones != 0 && ones != 2)
        throw ConfigError("trilinear: the gradients must contract pairwise (zero or two a_j = 1)");
    if (!table.shell_modes(config.l2_shell) || !table.shell_modes(config.l3_shell))
        throw ConfigError("trilinear: empty l2/l3 shell");
    std::vector<TrilinearCell> cells;
    double l2 = table.shell_key(config.l2_shell);
    double l3 = table.shell_key(config.l3_shell);
    for (int l1s = config.l1_min; l1s <= config.l1_max; ++l1s) {
        if (!table.shell_modes(l1s)) continue;
        TrilinearCell cell;
        cell.l1_shell = l1s;
        cell.l2_shell = config.l2_shell;
        cell.l3_shell = config.l3_shell;
        cell.l1 = table.shell_key(l1s);
        cell.l2 = l2;
        cell.l3 = l3;
        cell.k_separation = (cell.l1 - l2 - 2.0) / l3;
        if (cell.k_separation > 1.0)
            cell.reference = std::pow(l3, 0.25) / std::pow(cell.k_separation, config.j_decay);
        double denom_scale = 1.0;
        std::array<double, 3> keys = {cell.l1, l2, l3};
        for (int j = 0; j < 3; ++j)
            denom_scale *= std::pow(keys[j], config.a[j] - 2.0 * config.b[j]);
        for (int t = 0; t < config.trials; ++t) {
            std::array<SpectralField, 3> f = {
                shell_trial_field(table, l1s, t, config.seed),
                shell_trial_field(table, config.l2_shell, t, config.seed + 0x9e37ull),
                shell_trial_field(table, config.l3_shell, t, config.seed + 0x85ebull)};
            std::array<double, 3> norms = {f[0].norm_l2(), f[1].norm_l2(), f[2].norm_l2()};
            for (int j = 0; j < 3; ++j) {
                if (config.b[j] > 0)
                    for (const Mode& m : table.modes)
                        if (f[j][m.id] != 0.0) f[j][m.id] /= std::pow(m.s2, double(config.b[j]));
            }
            // integrand: product of scalars and/or one contracted gradient pair
            std::vector<double> integrand(tr.n_points(), 1.0);
            int grad_first = -1;
            for (int j = 0; j < 3; ++j) {
                if (config.a[j] == 0) {
                    auto vals = tr.synthesize(f[j].coeffs());
                    for (std::size_t p = 0; p < integrand.size(); ++p) integrand[p] *= vals[p];
                } else if (grad_first < 0) {
                    grad_first = j;
                } else {
                    std::vector<double> a1, a2, b1, b2;
                    tr.synthesize_gradient(f[grad_first].coeffs(), a1, a2);
                    tr.synthesize_gradient(f[j].coeffs(), b1, b2);
                    for (std::size_t p = 0; p < integrand.size(); ++p)
                        integrand[p] *= a1[p] * b1[p] + a2[p] * b2[p];
                }
            }
            double val = std::abs(tr.integrate(integrand));
            double den = denom_scale * norms[0] * norms[1] * norms[2];
            cell.max_value = std::max(cell.max_value, val / den);
        }
        cells.push_back(cell);
    }
    if (cells.empty()) throw ConfigError("trilinear sweep selected no valid shells");
    return cells;
}

double fourier_trick_residual(const Transform& tr, const SpectralField& f, int shell,
                              double theta) {
    const SpectrumTable& table = tr.table();
    if (!table.shell_modes(shell)) throw ConfigError("fourier trick: unknown shell");
    SpectralField pf = shell_project(f, shell);
    // P_l f must equal the sum of eigenspace projections over [l, l+1) exactly
    SpectralField sum_pi(table);
    for (const auto& [group, ids] : table.eigenspaces) {
        double s = table.modes[ids.front()].s;
        auto sh = table.shell_of(s);
        if (sh && *sh == shell) sum_pi = sum_pi + eigenspace_project(f, group);
    }
    for (std::size_t i = 0; i < pf.size(); ++i)
        if (pf.coeffs()[i] != sum_pi.coeffs()[i])
            throw DomainError("shell projection disagrees with the eigenspace sum");

    // modulated field f_theta = sum_z pi_{l+z} f e^{i 2 pi z theta}; its L2 norm
    // is evaluated by quadrature on the complex grid values
    std::vector<double> re(table.size(), 0.0), im(table.size(), 0.0);
    double key = table.shell_key(shell);
    for (const Mode& m : table.modes) {
        if (m.s == 0.0 || m.shell != shell) continue;
        double z = m.s - key;
        double phase = 2.0 * std::numbers::pi * z * theta;
        re[m.id] = pf[m.id] * std::cos(phase);
        im[m.id] = pf[m.id] * std::sin(phase);
    }
    auto vre = tr.synthesize(re);
    auto vim = tr.synthesize(im);
    double nsq = 0.0;
    for (std::size_t p = 0; p < vre.size(); ++p)
        nsq += tr.weights()[p] * (vre[p] * vre[p] + vim[p] * vim[p]);
    return std::abs(std::sqrt(nsq) - pf.norm_l2());
}

double triple_product_identity_residual(const Transform& tr, ModeId e1, ModeId e2, ModeId e3) {
    const SpectrumTable& table = tr.table();
    const Mode& m1 = table.modes[e1];
    const Mode& m2 = table.modes[e2];
    const Mode& m3 = table.modes[e3];
    std::vector<double> c1(table.size(), 0.0), c2(table.size(), 0.0), c3(table.size(), 0.0);
    c1[e1] = 1.0;
    c2[e2] = 1.0;
    c3[e3] = 1.0;
    auto v1 = tr.synthesize(c1);
    auto v2 = tr.synthesize(c2);
    auto v3 = tr.synthesize(c3);
    std::vector<double> g21, g22, g31, g32;
    tr.synthesize_gradient(c2, g21, g22);
    tr.synthesize_gradient(c3, g31, g32);
    double I = 0.0, D = 0.0;
    const auto& w = tr.weights();
    for (std::size_t p = 0; p < w.size(); ++p) {
        I += w[p] * v1[p] * v2[p] * v3[p];
        D += w[p] * v1[p] * (g21[p] * g31[p] + g22[p] * g32[p]);
    }
    double n1 = m1.s2, n2 = m2.s2, n3 = m3.s2;
    double lhs = n1 * I;
    double rhs = (n2 + n3) * I - 2.0 * D;
    // the floor 1 + n1 keeps structurally-zero triples (selection rules) from
    // dividing quadrature noise by itself
    double scale = std::max({std::abs(lhs), std::abs((n2 + n3) * I), 2.0 * std::abs(D), 1.0 + n1});
    return std::abs(lhs - rhs) / scale;
}

}  // namespace nsshell
