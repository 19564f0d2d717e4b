#include "nsshell/grid.hpp"

#include <cmath>
#include <numbers>

#include "nsshell/errors.hpp"

namespace nsshell {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}  // namespace

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
    nodes.assign(n, 0.0);
    weights.assign(n, 0.0);
    for (int i = 0; i < n; ++i) {
        // Chebyshev initial guess, Newton on P_n
        double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int l = 2; l <= n; ++l) {
                double p2 = ((2.0 * l - 1.0) * x * p1 - (l - 1.0) * p0) / l;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) {
                // one polishing pass
                double q0 = 1.0, q1 = x;
                for (int l = 2; l <= n; ++l) {
                    double q2 = ((2.0 * l - 1.0) * x * q1 - (l - 1.0) * q0) / l;
                    q0 = q1;
                    q1 = q2;
                }
                dp = n * (x * q1 - q0) / (x * x - 1.0);
                x -= q1 / dp;
                break;
            }
        }
        nodes[i] = x;
        weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
}

void normalized_legendre(int lmax, int m, double x, std::vector<double>& values,
                         std::vector<double>& dvalues) {
    values.assign(std::max(lmax - m + 1, 0), 0.0);
    dvalues.assign(values.size(), 0.0);
    if (lmax < m) return;
    double omx2 = 1.0 - x * x;
    // seed Theta_{m,m} = c_m (1-x^2)^{m/2}, c_m = c_{m-1} sqrt((2m+1)/(2m)), c_0 = 1/sqrt(2)
    double c = 1.0 / std::sqrt(2.0);
    for (int mm = 1; mm <= m; ++mm) c *= std::sqrt((2.0 * mm + 1.0) / (2.0 * mm));
    double pmm = c * std::pow(omx2, 0.5 * m);
    values[0] = pmm;
    if (lmax > m) {
        values[1] = std::sqrt(2.0 * m + 3.0) * x * pmm;
        for (int l = m + 2; l <= lmax; ++l) {
            double al = std::sqrt((2.0 * l + 1.0) * (2.0 * l - 1.0) /
                                  (double(l - m) * (l + m)));
            double bl = std::sqrt((2.0 * l + 1.0) * (l - 1.0 - m) * (l - 1.0 + m) /
                                  ((2.0 * l - 3.0) * (l - m) * (l + m)));
            values[l - m] = al * x * values[l - m - 1] - bl * values[l - m - 2];
        }
    }
    // (1 - x^2) d/dx Theta_{l,m} = -l x Theta_{l,m} + d_{l,m} Theta_{l-1,m}
    for (int l = m; l <= lmax; ++l) {
        double dl = l == m ? 0.0
                           : std::sqrt((2.0 * l + 1.0) * (double(l) * l - double(m) * m) /
                                       (2.0 * l - 1.0));
        double prev = l == m ? 0.0 : values[l - m - 1];
        dvalues[l - m] = (-double(l) * x * values[l - m] + dl * prev) / omx2;
    }
}

Transform::Transform(const SpectrumTable& table, int quad_degree) : table_(&table) {
    degree_ = quad_degree > 0 ? quad_degree : table.quad_degree;
    if (table.kind == ManifoldKind::Sphere)
        build_sphere();
    else
        build_torus();
}

std::size_t Transform::pair_index(int l, int m) const {
    // (l, m >= 0) pairs packed m-major: offset(m) + (l - m)
    // offset(m) = sum_{mm<m} (lmax - mm + 1)
    return static_cast<std::size_t>(m) * (lmax_ + 1) - (std::size_t(m) * (m - 1)) / 2 + (l - m);
}

void Transform::build_sphere() {
    lmax_ = table_->max_label();
    ntheta_ = degree_ / 2 + 1;
    nphi_ = degree_ + 1;
    gauss_legendre(ntheta_, x_, wx_);
    sin_theta_.resize(ntheta_);
    for (int i = 0; i < ntheta_; ++i) sin_theta_[i] = std::sqrt(1.0 - x_[i] * x_[i]);

    std::size_t npairs = pair_index(lmax_, lmax_) + 1;
    theta_tab_.assign(npairs * ntheta_, 0.0);
    dtheta_tab_.assign(npairs * ntheta_, 0.0);
    std::vector<double> vals, dvals;
    for (int m = 0; m <= lmax_; ++m) {
        for (int i = 0; i < ntheta_; ++i) {
            normalized_legendre(lmax_, m, x_[i], vals, dvals);
            for (int l = m; l <= lmax_; ++l) {
                theta_tab_[pair_index(l, m) * ntheta_ + i] = vals[l - m];
                dtheta_tab_[pair_index(l, m) * ntheta_ + i] = dvals[l - m];
            }
        }
    }
    cos_m_.assign(std::size_t(lmax_ + 1) * nphi_, 0.0);
    sin_m_.assign(std::size_t(lmax_ + 1) * nphi_, 0.0);
    for (int m = 0; m <= lmax_; ++m) {
        for (int j = 0; j < nphi_; ++j) {
            double phi = kTwoPi * j / nphi_;
            cos_m_[std::size_t(m) * nphi_ + j] = std::cos(m * phi);
            sin_m_[std::size_t(m) * nphi_ + j] = std::sin(m * phi);
        }
    }
    weights_.assign(std::size_t(ntheta_) * nphi_, 0.0);
    double wphi = kTwoPi / nphi_;
    for (int i = 0; i < ntheta_; ++i)
        for (int j = 0; j < nphi_; ++j) weights_[std::size_t(i) * nphi_ + j] = wx_[i] * wphi;
}

void Transform::build_torus() {
    nmax_ = table_->max_label();
    n_ = degree_;
    if (n_ < 3 * nmax_ + 1)
        throw ConfigError("torus quadrature grid too coarse for triple products");
    cos_t_.assign(std::size_t(nmax_ + 1) * n_, 0.0);
    sin_t_.assign(std::size_t(nmax_ + 1) * n_, 0.0);
    for (int n = 0; n <= nmax_; ++n) {
        for (int i = 0; i < n_; ++i) {
            double arg = kTwoPi * n * i / n_;
            cos_t_[std::size_t(n) * n_ + i] = std::cos(arg);
            sin_t_[std::size_t(n) * n_ + i] = std::sin(arg);
        }
    }
    weights_.assign(std::size_t(n_) * n_, 1.0 / (double(n_) * n_));
}

// cos/sin(2 pi (n1 x + n2 y)) split by angle addition; negative n2 handled by
// parity. deriv_* in {0,1,2} applies that many d/dx (2 pi n factors included).
void Transform::torus_mode_tables(const Mode& m, int deriv_x, int deriv_y,
                                  std::vector<double>& out) const {
    out.assign(std::size_t(n_) * n_, 0.0);
    if (m.s == 0.0) {
        if (deriv_x == 0 && deriv_y == 0)
            std::fill(out.begin(), out.end(), 1.0);
        return;
    }
    int a = m.a, b = std::abs(m.b);
    double sb = m.b < 0 ? -1.0 : 1.0;
    const double* ca = &cos_t_[std::size_t(a) * n_];
    const double* sa = &sin_t_[std::size_t(a) * n_];
    const double* cb = &cos_t_[std::size_t(b) * n_];
    const double* sb_t = &sin_t_[std::size_t(b) * n_];
    double amp = std::sqrt(2.0);
    // cos(A+B) = cAcB - sAsB, sin(A+B) = sAcB + cAsB with A = 2 pi a x, B = 2 pi b~ y
    // where b~ = |m.b| and sin(B) carries the sign flip. Each derivative rotates the
    // corresponding unsigned trig pair by 90 degrees and contributes a 2 pi |n| factor.
    int rot_a = deriv_x;
    int rot_b = deriv_y;
    double factor = amp;
    for (int d = 0; d < deriv_x; ++d) factor *= kTwoPi * a;
    for (int d = 0; d < deriv_y; ++d) factor *= kTwoPi * b;
    auto wave = [&](int rot, bool want_sin, const double* c, const double* s, int i) {
        // returns the rot-times-rotated cos or sin at sample i
        int phase = (rot + (want_sin ? 3 : 0)) % 4;  // cos rotated by 90deg*rot
        switch (phase) {
            case 0: return c[i];
            case 1: return -s[i];
            case 2: return -c[i];
            default: return s[i];
        }
    };
    for (int i = 0; i < n_; ++i) {
        double cA = wave(rot_a, false, ca, sa, i);
        double sA = wave(rot_a, true, ca, sa, i);
        for (int j = 0; j < n_; ++j) {
            double cB = wave(rot_b, false, cb, sb_t, j);
            double sB = wave(rot_b, true, cb, sb_t, j);
            if (sb < 0.0) sB = -sB;  // sin(-|b|y) = -sin(|b|y); cos even
            double v = m.trig == 0 ? cA * cB - sA * sB : sA * cB + cA * sB;
            out[std::size_t(i) * n_ + j] = factor * v;
        }
    }
}

std::vector<double> Transform::synthesize(const std::vector<double>& coeffs) const {
    std::vector<double> out(n_points(), 0.0);
    if (table_->kind == ManifoldKind::Torus) {
        std::vector<double> tmp;
        for (const Mode& m : table_->modes) {
            double c = coeffs[m.id];
            if (c == 0.0) continue;
            torus_mode_tables(m, 0, 0, tmp);
            for (std::size_t p = 0; p < out.size(); ++p) out[p] += c * tmp[p];
        }
        return out;
    }
    // sphere: A_m(theta_i), B_m(theta_i) accumulation, then the phi stage
    std::vector<double> am(std::size_t(lmax_ + 1) * ntheta_, 0.0);
    std::vector<double> bm(std::size_t(lmax_ + 1) * ntheta_, 0.0);
    const double inv_sqrt_2pi = 1.0 / std::sqrt(kTwoPi);
    const double inv_sqrt_pi = 1.0 / std::sqrt(kPi);
    for (const Mode& m : table_->modes) {
        double c = coeffs[m.id];
        if (c == 0.0) continue;
        if (m.s == 0.0) {
            double v = c / std::sqrt(2.0) * inv_sqrt_2pi;  // Theta_{0,0} = 1/sqrt(2)
            for (int i = 0; i < ntheta_; ++i) am[i] += v;
            continue;
        }
        int l = m.a, mm = std::abs(m.b);
        const double* th = &theta_tab_[pair_index(l, mm) * ntheta_];
        double norm = mm == 0 ? inv_sqrt_2pi : inv_sqrt_pi;
        double* dst = m.b < 0 ? &bm[std::size_t(mm) * ntheta_] : &am[std::size_t(mm) * ntheta_];
        for (int i = 0; i < ntheta_; ++i) dst[i] += c * norm * th[i];
    }
    for (int i = 0; i < ntheta_; ++i) {
        for (int j = 0; j < nphi_; ++j) {
            double v = am[i];  // m = 0
            for (int mm = 1; mm <= lmax_; ++mm) {
                v += am[std::size_t(mm) * ntheta_ + i] * cos_m_[std::size_t(mm) * nphi_ + j] +
                     bm[std::size_t(mm) * ntheta_ + i] * sin_m_[std::size_t(mm) * nphi_ + j];
            }
            out[std::size_t(i) * nphi_ + j] = v;
        }
    }
    return out;
}

void Transform::synthesize_gradient(const std::vector<double>& coeffs, std::vector<double>& g1,
                                    std::vector<double>& g2) const {
    g1.assign(n_points(), 0.0);
    g2.assign(n_points(), 0.0);
    if (table_->kind == ManifoldKind::Torus) {
        std::vector<double> tmp;
        for (const Mode& m : table_->modes) {
            double c = coeffs[m.id];
            if (c == 0.0 || m.s == 0.0) continue;
            torus_mode_tables(m, 1, 0, tmp);
            for (std::size_t p = 0; p < g1.size(); ++p) g1[p] += c * tmp[p];
            torus_mode_tables(m, 0, 1, tmp);
            for (std::size_t p = 0; p < g2.size(); ++p) g2[p] += c * tmp[p];
        }
        return;
    }
    // d_theta = -sin(theta) d/dx on the Theta factor; (1/sin theta) d_phi swaps cos<->sin
    std::vector<double> am_d(std::size_t(lmax_ + 1) * ntheta_, 0.0);
    std::vector<double> bm_d(std::size_t(lmax_ + 1) * ntheta_, 0.0);
    std::vector<double> am_p(std::size_t(lmax_ + 1) * ntheta_, 0.0);
    std::vector<double> bm_p(std::size_t(lmax_ + 1) * ntheta_, 0.0);
    const double inv_sqrt_2pi = 1.0 / std::sqrt(kTwoPi);
    const double inv_sqrt_pi = 1.0 / std::sqrt(kPi);
    for (const Mode& m : table_->modes) {
        double c = coeffs[m.id];
        if (c == 0.0 || m.s == 0.0) continue;
        int l = m.a, mm = std::abs(m.b);
        const double* th = &theta_tab_[pair_index(l, mm) * ntheta_];
        const double* dth = &dtheta_tab_[pair_index(l, mm) * ntheta_];
        double norm = mm == 0 ? inv_sqrt_2pi : inv_sqrt_pi;
        // theta-derivative accumulates into the same trig slot
        double* dst_d = m.b < 0 ? &bm_d[std::size_t(mm) * ntheta_] : &am_d[std::size_t(mm) * ntheta_];
        for (int i = 0; i < ntheta_; ++i)
            dst_d[i] += c * norm * (-sin_theta_[i]) * dth[i];
        if (mm > 0) {
            // (1/sin) d_phi: cos(m phi) -> -m sin(m phi), sin(m phi) -> m cos(m phi)
            for (int i = 0; i < ntheta_; ++i) {
                double v = c * norm * th[i] * mm / sin_theta_[i];
                if (m.b < 0)
                    am_p[std::size_t(mm) * ntheta_ + i] += v;   // sin -> cos slot
                else
                    bm_p[std::size_t(mm) * ntheta_ + i] -= v;   // cos -> -sin slot
            }
        }
    }
    for (int i = 0; i < ntheta_; ++i) {
        for (int j = 0; j < nphi_; ++j) {
            double v1 = am_d[i], v2 = 0.0;
            for (int mm = 1; mm <= lmax_; ++mm) {
                double cm = cos_m_[std::size_t(mm) * nphi_ + j];
                double sm = sin_m_[std::size_t(mm) * nphi_ + j];
                v1 += am_d[std::size_t(mm) * ntheta_ + i] * cm +
                      bm_d[std::size_t(mm) * ntheta_ + i] * sm;
                v2 += am_p[std::size_t(mm) * ntheta_ + i] * cm +
                      bm_p[std::size_t(mm) * ntheta_ + i] * sm;
            }
            g1[std::size_t(i) * nphi_ + j] = v1;
            g2[std::size_t(i) * nphi_ + j] = v2;
        }
    }
}

void Transform::synthesize_hessian(const std::vector<double>& coeffs, std::vector<double>& h11,
                                   std::vector<double>& h12, std::vector<double>& h22) const {
    h11.assign(n_points(), 0.0);
    h12.assign(n_points(), 0.0);
    h22.assign(n_points(), 0.0);
    if (table_->kind == ManifoldKind::Torus) {
        std::vector<double> tmp;
        for (const Mode& m : table_->modes) {
            double c = coeffs[m.id];
            if (c == 0.0 || m.s == 0.0) continue;
            torus_mode_tables(m, 2, 0, tmp);
            for (std::size_t p = 0; p < h11.size(); ++p) h11[p] += c * tmp[p];
            torus_mode_tables(m, 1, 1, tmp);
            for (std::size_t p = 0; p < h12.size(); ++p) h12[p] += c * tmp[p];
            torus_mode_tables(m, 0, 2, tmp);
            for (std::size_t p = 0; p < h22.size(); ++p) h22[p] += c * tmp[p];
        }
        return;
    }
    // Covariant Hessian in the (theta-hat, phi-hat) frame:
    //   h11 = f_tt                     (per mode: f_tt = -cot f_t - (l(l+1) - m^2/sin^2) f)
    //   h12 = (f_tp - cot f_p) / sin
    //   h22 = f_pp/sin^2 + cot f_t = Lap f - f_tt   (the Hessian trace is the Laplacian)
    std::vector<double> ft, fp;  // f_theta, f_phi/sin
    synthesize_gradient(coeffs, ft, fp);
    std::vector<double> lap = synthesize_laplacian(coeffs);
    std::vector<double> am_tp(std::size_t(lmax_ + 1) * ntheta_, 0.0);
    std::vector<double> bm_tp(std::size_t(lmax_ + 1) * ntheta_, 0.0);
    std::vector<double> am_lam(std::size_t(lmax_ + 1) * ntheta_, 0.0);  // (l(l+1)-m^2/sin^2) f
    std::vector<double> bm_lam(std::size_t(lmax_ + 1) * ntheta_, 0.0);
    const double inv_sqrt_2pi = 1.0 / std::sqrt(kTwoPi);
    const double inv_sqrt_pi = 1.0 / std::sqrt(kPi);
    for (const Mode& m : table_->modes) {
        double c = coeffs[m.id];
        if (c == 0.0 || m.s == 0.0) continue;
        int l = m.a, mm = std::abs(m.b);
        const double* th = &theta_tab_[pair_index(l, mm) * ntheta_];
        const double* dth = &dtheta_tab_[pair_index(l, mm) * ntheta_];
        double norm = mm == 0 ? inv_sqrt_2pi : inv_sqrt_pi;
        for (int i = 0; i < ntheta_; ++i) {
            double st = sin_theta_[i];
            double lam = double(l) * (l + 1) - (mm > 0 ? double(mm) * mm / (st * st) : 0.0);
            if (mm > 0) {
                // f_tp/sin: d_theta on Theta, (1/sin) d_phi on Phi
                double v = c * norm * (-st * dth[i]) * mm / st;
                if (m.b < 0)
                    am_tp[std::size_t(mm) * ntheta_ + i] += v;
                else
                    bm_tp[std::size_t(mm) * ntheta_ + i] -= v;
            }
            double vlam = c * norm * lam * th[i];
            if (m.b < 0)
                bm_lam[std::size_t(mm) * ntheta_ + i] += vlam;
            else
                am_lam[std::size_t(mm) * ntheta_ + i] += vlam;
        }
    }
    for (int i = 0; i < ntheta_; ++i) {
        double cot = x_[i] / sin_theta_[i];
        for (int j = 0; j < nphi_; ++j) {
            std::size_t p = std::size_t(i) * nphi_ + j;
            double ftp = 0.0, flam = am_lam[i];
            for (int mm = 1; mm <= lmax_; ++mm) {
                double cm = cos_m_[std::size_t(mm) * nphi_ + j];
                double sm = sin_m_[std::size_t(mm) * nphi_ + j];
                ftp += am_tp[std::size_t(mm) * ntheta_ + i] * cm +
                       bm_tp[std::size_t(mm) * ntheta_ + i] * sm;
                flam += am_lam[std::size_t(mm) * ntheta_ + i] * cm +
                        bm_lam[std::size_t(mm) * ntheta_ + i] * sm;
            }
            h11[p] = -cot * ft[p] - flam;
            h12[p] = ftp - cot * fp[p];
            h22[p] = lap[p] - h11[p];
        }
    }
}

std::vector<double> Transform::synthesize_laplacian(const std::vector<double>& coeffs) const {
    std::vector<double> scaled(coeffs.size(), 0.0);
    for (const Mode& m : table_->modes) scaled[m.id] = -m.s2 * coeffs[m.id];
    return synthesize(scaled);
}

std::vector<double> Transform::analyze(const std::vector<double>& values) const {
    std::vector<double> coeffs(table_->size(), 0.0);
    if (table_->kind == ManifoldKind::Torus) {
        // stage 1: x-transform rows for every n1 in [0, nmax]
        // partial_c[n1][j] = sum_i f(i,j) cos(2 pi n1 i / N) / N, same for sin
        std::vector<double> pc(std::size_t(nmax_ + 1) * n_, 0.0);
        std::vector<double> ps(std::size_t(nmax_ + 1) * n_, 0.0);
        for (int n1 = 0; n1 <= nmax_; ++n1) {
            const double* ct = &cos_t_[std::size_t(n1) * n_];
            const double* st = &sin_t_[std::size_t(n1) * n_];
            for (int i = 0; i < n_; ++i) {
                const double* row = &values[std::size_t(i) * n_];
                double c = ct[i], s = st[i];
                double* pcn = &pc[std::size_t(n1) * n_];
                double* psn = &ps[std::size_t(n1) * n_];
                for (int j = 0; j < n_; ++j) {
                    pcn[j] += c * row[j];
                    psn[j] += s * row[j];
                }
            }
        }
        double inv = 1.0 / (double(n_) * n_);
        for (const Mode& m : table_->modes) {
            if (m.s == 0.0) {
                double sum = 0.0;
                for (int j = 0; j < n_; ++j) sum += pc[j];
                coeffs[m.id] = sum * inv;
                continue;
            }
            int a = m.a, b = std::abs(m.b);
            double sb = m.b < 0 ? -1.0 : 1.0;
            const double* pcn = &pc[std::size_t(a) * n_];
            const double* psn = &ps[std::size_t(a) * n_];
            const double* cb = &cos_t_[std::size_t(b) * n_];
            const double* sbt = &sin_t_[std::size_t(b) * n_];
            double sum = 0.0;
            if (m.trig == 0) {
                // cos(A+B) = cA cB - sA sB
                for (int j = 0; j < n_; ++j) sum += pcn[j] * cb[j] - sb * psn[j] * sbt[j];
            } else {
                for (int j = 0; j < n_; ++j) sum += psn[j] * cb[j] + sb * pcn[j] * sbt[j];
            }
            coeffs[m.id] = std::sqrt(2.0) * sum * inv;
        }
        return coeffs;
    }
    // sphere: phi stage then theta stage
    double wphi = kTwoPi / nphi_;
    std::vector<double> am(std::size_t(lmax_ + 1) * ntheta_, 0.0);
    std::vector<double> bm(std::size_t(lmax_ + 1) * ntheta_, 0.0);
    for (int i = 0; i < ntheta_; ++i) {
        const double* row = &values[std::size_t(i) * nphi_];
        for (int mm = 0; mm <= lmax_; ++mm) {
            const double* cm = &cos_m_[std::size_t(mm) * nphi_];
            const double* sm = &sin_m_[std::size_t(mm) * nphi_];
            double sc = 0.0, ss = 0.0;
            for (int j = 0; j < nphi_; ++j) {
                sc += row[j] * cm[j];
                ss += row[j] * sm[j];
            }
            am[std::size_t(mm) * ntheta_ + i] = sc * wphi;
            bm[std::size_t(mm) * ntheta_ + i] = ss * wphi;
        }
    }
    const double inv_sqrt_2pi = 1.0 / std::sqrt(kTwoPi);
    const double inv_sqrt_pi = 1.0 / std::sqrt(kPi);
    for (const Mode& m : table_->modes) {
        if (m.s == 0.0) {
            double sum = 0.0;
            for (int i = 0; i < ntheta_; ++i) sum += wx_[i] * am[i];
            coeffs[m.id] = sum * inv_sqrt_2pi / std::sqrt(2.0);
            continue;
        }
        int l = m.a, mm = std::abs(m.b);
        const double* th = &theta_tab_[pair_index(l, mm) * ntheta_];
        const double* src = m.b < 0 ? &bm[std::size_t(mm) * ntheta_] : &am[std::size_t(mm) * ntheta_];
        double norm = mm == 0 ? inv_sqrt_2pi : inv_sqrt_pi;
        double sum = 0.0;
        for (int i = 0; i < ntheta_; ++i) sum += wx_[i] * th[i] * src[i];
        coeffs[m.id] = sum * norm;
    }
    return coeffs;
}

double Transform::integrate(const std::vector<double>& values) const {
    double sum = 0.0;
    for (std::size_t p = 0; p < values.size(); ++p) sum += weights_[p] * values[p];
    return sum;
}

double Transform::inner(const std::vector<double>& u, const std::vector<double>& v) const {
    double sum = 0.0;
    for (std::size_t p = 0; p < u.size(); ++p) sum += weights_[p] * u[p] * v[p];
    return sum;
}

double Transform::norm_l2(const std::vector<double>& values) const {
    return std::sqrt(inner(values, values));
}

std::vector<double> Transform::mode_values(ModeId id) const {
    std::vector<double> coeffs(table_->size(), 0.0);
    coeffs[id] = 1.0;
    return synthesize(coeffs);
}

}  // namespace nsshell
