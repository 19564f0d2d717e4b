#include "nsshell/trapping.hpp"

#include <algorithm>
#include <cmath>

#include "nsshell/errors.hpp"

namespace nsshell {

double TrappingEnvelope::bound(double k) const {
    return a1 * std::sqrt(e_star) / std::pow(k, r);
}

double envelope_amplitude(double r, double a0, double k0, double e_star, double lambda1) {
    if (!(r > 1.0)) throw ConfigError("envelope exponent r must exceed 1");
    if (!(k0 >= lambda1 + 10.0)) throw ConfigError("K0 must be at least lambda1 + 10");
    if (!(e_star > 1.0)) throw ConfigError("E_star must exceed 1");
    if (!(a0 >= 0.0)) throw ConfigError("A0 must be nonnegative");
    return (std::pow(k0, r) + 1.0) * (a0 / std::sqrt(e_star) + 1.0) + lambda1;
}

TrappingEnvelope make_envelope(double r, double a0, double k0, double e_star, double lambda1) {
    TrappingEnvelope env;
    env.r = r;
    env.a0 = a0;
    env.k0 = k0;
    env.e_star = e_star;
    env.lambda1 = lambda1;
    env.a1 = envelope_amplitude(r, a0, k0, e_star, lambda1);
    return env;
}

std::vector<ShellMargin> envelope_margins(const SpectralField& omega,
                                          const TrappingEnvelope& envelope) {
    std::vector<ShellMargin> out;
    for (const auto& [n, ids] : omega.table().shells) {
        ShellMargin m;
        m.shell = n;
        m.key = omega.table().shell_key(n);
        m.norm = omega.shell_norm(n);
        m.bound = envelope.bound(m.key);
        m.margin = m.bound - m.norm;
        m.boundary_contact = std::abs(m.margin) < kBoundaryContactRel * m.bound;
        out.push_back(m);
    }
    return out;
}

std::string to_string(RegionTag tag) {
    switch (tag) {
        case RegionTag::T1: return "T1";
        case RegionTag::T2: return "T2";
        case RegionTag::T3: return "T3";
        case RegionTag::A1a: return "A1a";
        case RegionTag::A1b: return "A1b";
        case RegionTag::A2a: return "A2a";
        case RegionTag::A2b: return "A2b";
        case RegionTag::A3a: return "A3a";
        case RegionTag::A3b: return "A3b";
        case RegionTag::B1a: return "B1a";
        case RegionTag::B1b: return "B1b";
        case RegionTag::B1c: return "B1c";
        case RegionTag::B2a: return "B2a";
        case RegionTag::B2b: return "B2b";
        case RegionTag::B2c: return "B2c";
    }
    return "?";
}

const std::vector<RegionTag>& all_region_tags() {
    static const std::vector<RegionTag> tags = {
        RegionTag::T1,  RegionTag::T2,  RegionTag::T3,  RegionTag::A1a, RegionTag::A1b,
        RegionTag::A2a, RegionTag::A2b, RegionTag::A3a, RegionTag::A3b, RegionTag::B1a,
        RegionTag::B1b, RegionTag::B1c, RegionTag::B2a, RegionTag::B2b, RegionTag::B2c};
    return tags;
}

RegionTag region_of(double k, double l1, double l2) {
    if (!(k > 0.0) || !(l1 > 0.0) || !(l2 > 0.0))
        throw DomainError("region_of: shell keys must be positive");
    if (l1 + l2 < k) {
        if (l1 >= l2) {
            if (k >= l1 + 2.0 * l2 + 2.0) return l1 <= 0.5 * k ? RegionTag::B1a : RegionTag::B1b;
            return RegionTag::B1c;
        }
        if (k >= 2.0 * l1 + l2 + 2.0) return l2 <= 0.5 * k ? RegionTag::B2a : RegionTag::B2b;
        return RegionTag::B2c;
    }
    if (std::abs(l1 - l2) > k) {
        if (l1 <= k) return l2 <= k + 2.0 * l1 + 2.0 ? RegionTag::A1a : RegionTag::A1b;
        if (l2 >= k) return std::abs(l1 - l2) < 2.0 * k + 2.0 ? RegionTag::A2a : RegionTag::A2b;
        return l1 < k + 2.0 * l2 + 2.0 ? RegionTag::A3a : RegionTag::A3b;
    }
    if (l1 <= 0.5 * k) return RegionTag::T1;
    return l1 <= 2.0 * k ? RegionTag::T2 : RegionTag::T3;
}

DominationScan::DominationScan(const SpectrumTable& table, const Transform& transform,
                               const SpectralField& omega, const std::vector<double>& harmonic,
                               const TriadTensor* triads)
    : table_(&table), omega_(&omega), harmonic_(harmonic) {
    for (const auto& [n, ids] : table.shells) shell_ids_.push_back(n);
    if (triads && triads->table_fingerprint != table.fingerprint())
        throw DomainError("triad tensor does not match the spectrum table");
    if (triads)
        build_triads(*triads);
    else
        build_transform(transform);
}

void DominationScan::build_transform(const Transform& tr) {
    // per-shell grids of curl psi_l = curl (-Delta)^{-1} P_l omega and grad P_l omega
    struct ShellGrids {
        std::vector<double> c1, c2, g1, g2;
        bool active = false;
    };
    std::map<int, ShellGrids> grids;
    for (int n : shell_ids_) {
        SpectralField wl = shell_project(*omega_, n);
        ShellGrids sg;
        sg.active = wl.norm_l2() > 0.0;
        if (sg.active) {
            SpectralField psi = inverse_laplacian(wl);
            std::vector<double> p1, p2;
            tr.synthesize_gradient(psi.coeffs(), p1, p2);
            // curl psi = (g2, -g1) in the orthonormal frame on both backends
            sg.c1 = std::move(p2);
            sg.c2.resize(sg.c1.size());
            for (std::size_t p = 0; p < sg.c2.size(); ++p) sg.c2[p] = -p1[p];
            tr.synthesize_gradient(wl.coeffs(), sg.g1, sg.g2);
        }
        grids[n] = std::move(sg);
    }
    std::vector<double> prod(tr.n_points());
    for (int l1 : shell_ids_) {
        const auto& a = grids[l1];
        if (!a.active) continue;
        for (int l2 : shell_ids_) {
            const auto& b = grids[l2];
            if (!b.active) continue;
            for (std::size_t p = 0; p < prod.size(); ++p)
                prod[p] = a.c1[p] * b.g1[p] + a.c2[p] * b.g2[p];
            std::vector<double> coeffs = tr.analyze(prod);
            std::vector<double> norms(shell_ids_.size(), 0.0);
            for (std::size_t s = 0; s < shell_ids_.size(); ++s)
                norms[s] = table_->shell_norm(coeffs, shell_ids_[s]);
            pair_norms_[{l1, l2}] = std::move(norms);
        }
    }
    // harmonic transport <P_H U, grad P_l omega> (torus only)
    bool has_harm = false;
    for (double h : harmonic_) has_harm = has_harm || h != 0.0;
    if (has_harm) {
        for (int l : shell_ids_) {
            const auto& b = grids[l];
            if (!b.active) continue;
            for (std::size_t p = 0; p < prod.size(); ++p)
                prod[p] = harmonic_[0] * b.g1[p] + harmonic_[1] * b.g2[p];
            std::vector<double> coeffs = tr.analyze(prod);
            std::vector<double> norms(shell_ids_.size(), 0.0);
            for (std::size_t s = 0; s < shell_ids_.size(); ++s)
                norms[s] = table_->shell_norm(coeffs, shell_ids_[s]);
            harmonic_norms_[l] = std::move(norms);
        }
    }
}

void DominationScan::build_triads(const TriadTensor& triads) {
    const auto& modes = table_->modes;
    const auto& w = omega_->coeffs();
    std::vector<double> psi(w.size(), 0.0);
    for (const Mode& m : modes)
        if (m.s > 0.0) psi[m.id] = w[m.id] / m.s2;
    // coefficient accumulators per (l1, l2) pair, indexed by output mode
    std::map<std::pair<int, int>, std::vector<double>> acc;
    auto slot = [&](int l1, int l2) -> std::vector<double>& {
        auto it = acc.find({l1, l2});
        if (it == acc.end()) it = acc.emplace(std::pair{l1, l2}, std::vector<double>(w.size(), 0.0)).first;
        return it->second;
    };
    auto add = [&](ModeId out, ModeId jpsi, ModeId komg, double v) {
        if (psi[jpsi] == 0.0 || w[komg] == 0.0) return;
        slot(modes[jpsi].shell, modes[komg].shell)[out] += v * psi[jpsi] * w[komg];
    };
    for (const auto& e : triads.advection_entries) {
        add(e.i, e.j, e.k, e.value);
        add(e.i, e.k, e.j, -e.value);
        add(e.j, e.k, e.i, e.value);
        add(e.j, e.i, e.k, -e.value);
        add(e.k, e.i, e.j, e.value);
        add(e.k, e.j, e.i, -e.value);
    }
    for (auto& [pair, coeffs] : acc) {
        std::vector<double> norms(shell_ids_.size(), 0.0);
        for (std::size_t s = 0; s < shell_ids_.size(); ++s)
            norms[s] = table_->shell_norm(coeffs, shell_ids_[s]);
        pair_norms_[pair] = std::move(norms);
    }
    bool has_harm = false;
    for (double h : harmonic_) has_harm = has_harm || h != 0.0;
    if (has_harm && !triads.harmonic.empty()) {
        std::map<int, std::vector<double>> hacc;
        for (std::size_t h = 0; h < triads.harmonic.size(); ++h) {
            for (const auto& [key, value] : triads.harmonic[h]) {
                ModeId j = ModeId(key >> 32), k = ModeId(key & 0xffffffffu);
                if (w[j] == 0.0) continue;
                auto it = hacc.find(modes[j].shell);
                if (it == hacc.end())
                    it = hacc.emplace(modes[j].shell, std::vector<double>(w.size(), 0.0)).first;
                it->second[k] += harmonic_[h] * value * w[j];
            }
        }
        for (auto& [l, coeffs] : hacc) {
            std::vector<double> norms(shell_ids_.size(), 0.0);
            for (std::size_t s = 0; s < shell_ids_.size(); ++s)
                norms[s] = table_->shell_norm(coeffs, shell_ids_[s]);
            harmonic_norms_[l] = std::move(norms);
        }
    }
}

DominationReport DominationScan::report(int k, const TrappingEnvelope& envelope, double nu,
                                        LaplacianVariant variant) const {
    double key = table_->shell_key(k);
    if (!(key > envelope.k0))
        throw DomainError("domination report requires a shell key beyond K0");
    DominationReport rep;
    rep.shell = k;
    rep.key = key;
    for (RegionTag tag : all_region_tags()) rep.convective_by_region[to_string(tag)] = 0.0;

    std::size_t kpos = shell_ids_.size();
    for (std::size_t s = 0; s < shell_ids_.size(); ++s)
        if (shell_ids_[s] == k) kpos = s;
    if (kpos == shell_ids_.size()) throw DomainError("domination report: unknown shell");

    double total = 0.0;
    for (const auto& [pair, norms] : pair_norms_) {
        double v = norms[kpos];
        RegionTag tag =
            region_of(key, table_->shell_key(pair.first), table_->shell_key(pair.second));
        rep.convective_by_region[to_string(tag)] += v;
        total += v;
    }
    for (const auto& [l, norms] : harmonic_norms_) rep.harmonic_term += norms[kpos];

    // linear terms from the concrete curvature operator F = c Id: the stream part
    // contributes nu c ||P_k omega|| (only l = k survives) and the harmonic part
    // has zero curl, so the first-order term vanishes.
    ManifoldConfig mc;
    mc.kind = table_->kind;
    mc.variant = variant;
    double c = mc.ricci_shift();
    double norm_k = omega_->shell_norm(k);
    rep.linear_terms = nu * c * norm_k;

    double diff = 0.0;
    const auto* ids = table_->shell_modes(k);
    if (ids)
        for (ModeId id : *ids)
            diff += table_->modes[id].s2 * omega_->coeffs()[id] * omega_->coeffs()[id];
    rep.diffusion_magnitude = norm_k > 0.0 ? nu * diff / norm_k : 0.0;

    rep.total_nondiffusive = total + rep.harmonic_term + rep.linear_terms;
    rep.dominated = rep.total_nondiffusive <= rep.diffusion_magnitude;
    rep.tail_bound = envelope_tail_bound(envelope, table_->cutoff);
    return rep;
}

double envelope_tail_bound(const TrappingEnvelope& envelope, double cutoff) {
    // sum over shell keys l > cutoff of A1 sqrt(E_star) l^{-r}: partial sum plus
    // the integral remainder bound
    double l0 = cutoff;
    double sum = 0.0;
    double l = l0;
    for (int i = 0; i < 10000; ++i) {
        l += 1.0;
        double term = std::pow(l, -envelope.r);
        sum += term;
        if (term < 1e-16 * sum) break;
    }
    sum += std::pow(l, 1.0 - envelope.r) / (envelope.r - 1.0);
    return envelope.a1 * std::sqrt(envelope.e_star) * sum;
}

DecayFit decay_fit(const std::vector<DominationReport>& reports, double r, double slack) {
    DecayFit fit;
    if (reports.size() < 5) {
        fit.flag = "insufficient-data";
        throw ConfigError("decay_fit requires at least 5 distinct shells");
    }
    std::vector<double> xs, ys;
    for (const auto& rep : reports) {
        if (rep.total_nondiffusive > 0.0) {
            xs.push_back(std::log(rep.key));
            ys.push_back(std::log(rep.total_nondiffusive));
        }
    }
    if (xs.empty()) {
        fit.flag = "zero-signal";
        return fit;
    }
    if (xs.size() < 5) {
        fit.flag = "degenerate";
        return fit;
    }
    double n = double(xs.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    double denom = n * sxx - sx * sx;
    if (denom == 0.0) {
        fit.flag = "degenerate";
        return fit;
    }
    fit.slope = (n * sxy - sx * sy) / denom;
    fit.intercept = (sy - fit.slope * sx) / n;
    double ss = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        double e = ys[i] - (fit.slope * xs[i] + fit.intercept);
        ss += e * e;
    }
    fit.rms_residual = std::sqrt(ss / n);
    fit.n_points = static_cast<int>(xs.size());
    fit.ok = true;
    fit.within_bound = fit.slope <= -(r - 1.75) + slack;
    return fit;
}

}  // namespace nsshell
