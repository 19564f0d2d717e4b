#include "nsshell/triads.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numbers>

#include "nsshell/errors.hpp"
#include "nsshell/grid.hpp"

namespace nsshell {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kDropThreshold = 1e-13;

using Cplx = std::complex<double>;

// A real torus/longitude basis factor as a two-term exponential combination.
struct TrigWave {
    std::array<Cplx, 2> coef;
    std::array<int, 2> freq;
    int n = 0;  // number of active terms
};

// longitude factor Phi_m: m=0 -> 1/sqrt(2 pi); m>0 -> cos(m phi)/sqrt(pi);
// m<0 -> sin(|m| phi)/sqrt(pi)
TrigWave phi_wave(int m) {
    TrigWave w;
    if (m == 0) {
        w.coef[0] = 1.0 / std::sqrt(kTwoPi);
        w.freq[0] = 0;
        w.n = 1;
        return w;
    }
    int am = std::abs(m);
    double c = 0.5 / std::sqrt(std::numbers::pi);
    if (m > 0) {
        w.coef = {Cplx(c, 0.0), Cplx(c, 0.0)};
    } else {
        w.coef = {Cplx(0.0, -c), Cplx(0.0, c)};
    }
    w.freq = {am, -am};
    w.n = 2;
    return w;
}

// d/dphi of phi_wave
TrigWave phi_wave_deriv(int m) {
    TrigWave w = phi_wave(m);
    for (int t = 0; t < w.n; ++t) w.coef[t] *= Cplx(0.0, double(w.freq[t]));
    return w;
}

// int_0^{2pi} product of three waves
double triple_phi_integral(const TrigWave& a, const TrigWave& b, const TrigWave& c) {
    Cplx sum = 0.0;
    for (int i = 0; i < a.n; ++i)
        for (int j = 0; j < b.n; ++j)
            for (int k = 0; k < c.n; ++k)
                if (a.freq[i] + b.freq[j] + c.freq[k] == 0)
                    sum += a.coef[i] * b.coef[j] * c.coef[k];
    return kTwoPi * sum.real();
}

// ---- torus closed forms via the full 2D complex representation

struct TorusWave2 {
    std::array<Cplx, 2> coef;
    std::array<std::array<int, 2>, 2> freq;  // wavevectors
    int n = 0;
};

TorusWave2 torus_mode_wave(const Mode& m) {
    TorusWave2 w;
    if (m.s == 0.0) {
        w.coef[0] = 1.0;
        w.freq[0] = {0, 0};
        w.n = 1;
        return w;
    }
    double h = std::sqrt(2.0) / 2.0;
    if (m.trig == 0) {
        w.coef = {Cplx(h, 0.0), Cplx(h, 0.0)};
    } else {
        w.coef = {Cplx(0.0, -h), Cplx(0.0, h)};
    }
    w.freq[0] = {m.a, m.b};
    w.freq[1] = {-m.a, -m.b};
    w.n = 2;
    return w;
}

double torus_product(const Mode& mi, const Mode& mj, const Mode& mk) {
    TorusWave2 a = torus_mode_wave(mi), b = torus_mode_wave(mj), c = torus_mode_wave(mk);
    Cplx sum = 0.0;
    for (int i = 0; i < a.n; ++i)
        for (int j = 0; j < b.n; ++j)
            for (int k = 0; k < c.n; ++k)
                if (a.freq[i][0] + b.freq[j][0] + c.freq[k][0] == 0 &&
                    a.freq[i][1] + b.freq[j][1] + c.freq[k][1] == 0)
                    sum += a.coef[i] * b.coef[j] * c.coef[k];
    return sum.real();
}

// int e_i <curl e_j, grad e_k>; J(E_m, E_p) = 4 pi^2 (m1 p2 - m2 p1) E_{m+p}
double torus_advection(const Mode& mi, const Mode& mj, const Mode& mk) {
    TorusWave2 a = torus_mode_wave(mi), b = torus_mode_wave(mj), c = torus_mode_wave(mk);
    Cplx sum = 0.0;
    for (int i = 0; i < a.n; ++i)
        for (int j = 0; j < b.n; ++j)
            for (int k = 0; k < c.n; ++k) {
                if (a.freq[i][0] + b.freq[j][0] + c.freq[k][0] != 0 ||
                    a.freq[i][1] + b.freq[j][1] + c.freq[k][1] != 0)
                    continue;
                double cross = double(b.freq[j][0]) * c.freq[k][1] -
                               double(b.freq[j][1]) * c.freq[k][0];
                sum += a.coef[i] * b.coef[j] * c.coef[k] * (4.0 * std::numbers::pi *
                                                            std::numbers::pi * cross);
            }
    return sum.real();
}

// ---- sphere: separable Gauss-Legendre x analytic longitude assembly

struct SphereTables {
    int lmax = 0;
    int ntheta = 0;
    std::vector<double> x, wx;
    std::vector<double> theta;   // [pair][i]
    std::vector<double> dtheta;  // d/dx
    std::size_t pair(int l, int m) const {
        return std::size_t(m) * (lmax + 1) - (std::size_t(m) * (m - 1)) / 2 + (l - m);
    }
};

SphereTables sphere_tables(const SpectrumTable& table) {
    SphereTables t;
    t.lmax = table.max_label();
    t.ntheta = table.quad_degree / 2 + 1;
    gauss_legendre(t.ntheta, t.x, t.wx);
    std::size_t npairs = t.pair(t.lmax, t.lmax) + 1;
    t.theta.assign(npairs * t.ntheta, 0.0);
    t.dtheta.assign(npairs * t.ntheta, 0.0);
    std::vector<double> vals, dvals;
    for (int m = 0; m <= t.lmax; ++m)
        for (int i = 0; i < t.ntheta; ++i) {
            normalized_legendre(t.lmax, m, t.x[i], vals, dvals);
            for (int l = m; l <= t.lmax; ++l) {
                t.theta[t.pair(l, m) * t.ntheta + i] = vals[l - m];
                t.dtheta[t.pair(l, m) * t.ntheta + i] = dvals[l - m];
            }
        }
    return t;
}

// the constant mode's theta factor is Theta_{0,0} = 1/sqrt(2)
const double* theta_row(const SphereTables& t, const Mode& m, std::vector<double>& const_buf) {
    if (m.s == 0.0) {
        const_buf.assign(t.ntheta, 1.0 / std::sqrt(2.0));
        return const_buf.data();
    }
    return &t.theta[t.pair(m.a, std::abs(m.b)) * t.ntheta];
}

const double* dtheta_row(const SphereTables& t, const Mode& m, std::vector<double>& const_buf) {
    if (m.s == 0.0) {
        const_buf.assign(t.ntheta, 0.0);
        return const_buf.data();
    }
    return &t.dtheta[t.pair(m.a, std::abs(m.b)) * t.ntheta];
}

}  // namespace

namespace {
double lookup(const std::vector<TriadTensor::Entry>& entries, std::uint64_t key) {
    auto it = std::lower_bound(entries.begin(), entries.end(), key,
                               [](const TriadTensor::Entry& e, std::uint64_t k) {
                                   return TriadTensor::key3(e.i, e.j, e.k) < k;
                               });
    if (it == entries.end() || TriadTensor::key3(it->i, it->j, it->k) != key) return 0.0;
    return it->value;
}
}  // namespace

void TriadTensor::finalize() {
    auto by_key = [](const Entry& a, const Entry& b) {
        return key3(a.i, a.j, a.k) < key3(b.i, b.j, b.k);
    };
    if (!std::is_sorted(product_entries.begin(), product_entries.end(), by_key))
        std::sort(product_entries.begin(), product_entries.end(), by_key);
    if (!std::is_sorted(advection_entries.begin(), advection_entries.end(), by_key))
        std::sort(advection_entries.begin(), advection_entries.end(), by_key);
}

double TriadTensor::product(ModeId i, ModeId j, ModeId k) const {
    ModeId a = i, b = j, c = k;
    if (a > b) std::swap(a, b);
    if (b > c) std::swap(b, c);
    if (a > b) std::swap(a, b);
    return lookup(product_entries, key3(a, b, c));
}

double TriadTensor::advection(ModeId i, ModeId j, ModeId k) const {
    if (i == j || j == k || i == k) return 0.0;  // fully antisymmetric
    ModeId p[3] = {i, j, k};
    int sign = 1;
    if (p[0] > p[1]) {
        std::swap(p[0], p[1]);
        sign = -sign;
    }
    if (p[1] > p[2]) {
        std::swap(p[1], p[2]);
        sign = -sign;
    }
    if (p[0] > p[1]) {
        std::swap(p[0], p[1]);
        sign = -sign;
    }
    return sign * lookup(advection_entries, key3(p[0], p[1], p[2]));
}

double TriadTensor::harmonic_advection(int h, ModeId j, ModeId k) const {
    if (h < 0 || h >= static_cast<int>(harmonic.size())) return 0.0;
    auto it = harmonic[h].find(pack(j, k));
    return it == harmonic[h].end() ? 0.0 : it->second;
}

TriadTensor build_triads(const SpectrumTable& table) {
    TriadTensor t;
    t.table_fingerprint = table.fingerprint();
    const auto& modes = table.modes;
    std::size_t n = modes.size();

    if (table.kind == ManifoldKind::Torus) {
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i; j < n; ++j)
                for (std::size_t k = j; k < n; ++k) {
                    // wavevector closure: some +/- combination must vanish
                    bool any = false;
                    for (int sj : {1, -1})
                        for (int sk : {1, -1})
                            if (modes[i].a + sj * modes[j].a + sk * modes[k].a == 0 &&
                                modes[i].b + sj * modes[j].b + sk * modes[k].b == 0)
                                any = true;
                    if (!any) continue;
                    double pv = torus_product(modes[i], modes[j], modes[k]);
                    if (std::abs(pv) > kDropThreshold)
                        t.product_entries.push_back({ModeId(i), ModeId(j), ModeId(k), pv});
                    if (i < j && j < k && modes[i].s > 0.0) {
                        double av = torus_advection(modes[i], modes[j], modes[k]);
                        if (std::abs(av) > kDropThreshold)
                            t.advection_entries.push_back({ModeId(i), ModeId(j), ModeId(k), av});
                    }
                }
        // harmonic advection: int e_k d_h e_j couples cos/sin partners of one wavevector
        t.harmonic.resize(2);
        for (std::size_t j = 1; j < n; ++j) {
            const Mode& mj = modes[j];
            if (mj.trig != 0) continue;
            // partner sin mode has the next id by the sort order
            std::size_t k = j + 1;
            if (k >= n || modes[k].a != mj.a || modes[k].b != mj.b || modes[k].trig != 1) continue;
            double f0 = kTwoPi * mj.a, f1 = kTwoPi * mj.b;
            // int e_sin * d_h e_cos = -2 pi n_h ; int e_cos * d_h e_sin = +2 pi n_h
            if (f0 != 0.0) {
                t.harmonic[0][TriadTensor::pack(ModeId(j), ModeId(k))] = -f0;
                t.harmonic[0][TriadTensor::pack(ModeId(k), ModeId(j))] = f0;
            }
            if (f1 != 0.0) {
                t.harmonic[1][TriadTensor::pack(ModeId(j), ModeId(k))] = -f1;
                t.harmonic[1][TriadTensor::pack(ModeId(k), ModeId(j))] = f1;
            }
        }
        t.finalize();
        return t;
    }

    // sphere
    int lmax = table.max_label();
    if (lmax > kTriadSphereDegreeLimit)
        throw ConfigError("stored triad assembly is limited to degree " +
                          std::to_string(kTriadSphereDegreeLimit) +
                          "; use the transform-based operations at this cutoff");
    SphereTables st = sphere_tables(table);
    std::vector<double> cb1, cb2, cb3;

    auto gl_triple = [&](const double* a, const double* b, const double* c) {
        double sum = 0.0;
        for (int i = 0; i < st.ntheta; ++i) sum += st.wx[i] * a[i] * b[i] * c[i];
        return sum;
    };

    for (std::size_t i = 0; i < n; ++i) {
        const Mode& mi = modes[i];
        int li = mi.s == 0.0 ? 0 : mi.a;
        for (std::size_t j = i; j < n; ++j) {
            const Mode& mj = modes[j];
            int lj = mj.s == 0.0 ? 0 : mj.a;
            for (std::size_t k = j; k < n; ++k) {
                const Mode& mk = modes[k];
                int lk = mk.s == 0.0 ? 0 : mk.a;
                // triangle rule on degrees
                if (lk > li + lj || lk < std::abs(li - lj)) continue;
                int mi_m = mi.s == 0.0 ? 0 : mi.b;
                int mj_m = mj.s == 0.0 ? 0 : mj.b;
                int mk_m = mk.s == 0.0 ? 0 : mk.b;
                // longitude selection: some combination of |m| must cancel
                int am1 = std::abs(mi_m), am2 = std::abs(mj_m), am3 = std::abs(mk_m);
                bool mok = (am1 + am2 == am3) || (am1 + am3 == am2) || (am2 + am3 == am1);
                TrigWave p1 = phi_wave(mi_m), p2 = phi_wave(mj_m), p3 = phi_wave(mk_m);
                if (mok && (li + lj + lk) % 2 == 0) {
                    double phi_int = triple_phi_integral(p1, p2, p3);
                    if (phi_int != 0.0) {
                        const double* t1 = theta_row(st, mi, cb1);
                        const double* t2 = theta_row(st, mj, cb2);
                        const double* t3 = theta_row(st, mk, cb3);
                        double v = gl_triple(t1, t2, t3) * phi_int;
                        if (std::abs(v) > kDropThreshold)
                            t.product_entries.push_back({ModeId(i), ModeId(j), ModeId(k), v});
                    }
                }
                if (i < j && j < k && mi.s > 0.0 && mok && (li + lj + lk) % 2 == 1) {
                    // adv = -[int Th_i Th_j dTh_k dx] * int Phi_i Phi_j' Phi_k
                    //       +[int Th_i dTh_j Th_k dx] * int Phi_i Phi_j Phi_k'
                    double phi_a = triple_phi_integral(p1, phi_wave_deriv(mj_m), p3);
                    double phi_b = triple_phi_integral(p1, p2, phi_wave_deriv(mk_m));
                    if (phi_a == 0.0 && phi_b == 0.0) continue;
                    const double* t1 = theta_row(st, mi, cb1);
                    double v = 0.0;
                    if (phi_a != 0.0) {
                        std::vector<double> tmpj, tmpk;
                        const double* t2 = theta_row(st, mj, tmpj);
                        const double* d3 = dtheta_row(st, mk, tmpk);
                        v -= gl_triple(t1, t2, d3) * phi_a;
                    }
                    if (phi_b != 0.0) {
                        std::vector<double> tmpj, tmpk;
                        const double* d2 = dtheta_row(st, mj, tmpj);
                        const double* t3 = theta_row(st, mk, tmpk);
                        v += gl_triple(t1, d2, t3) * phi_b;
                    }
                    if (std::abs(v) > kDropThreshold)
                        t.advection_entries.push_back({ModeId(i), ModeId(j), ModeId(k), v});
                }
            }
        }
    }
    t.finalize();
    return t;
}

}  // namespace nsshell
