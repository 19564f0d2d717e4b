#include "nsshell/spectrum.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstring>
#include <numbers>

#include "nsshell/errors.hpp"

namespace nsshell {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// FNV-1a over the table's defining data, for snapshot sanity checks.
std::uint64_t fnv1a(std::uint64_t h, std::uint64_t v) {
    h ^= v;
    return h * 1099511628211ull;
}

}  // namespace

std::string Mode::label(ManifoldKind kind) const {
    if (s == 0.0) return "const";
    if (kind == ManifoldKind::Torus) {
        return "n=(" + std::to_string(a) + "," + std::to_string(b) + ")," +
               (trig == 0 ? "cos" : "sin");
    }
    return "l=" + std::to_string(a) + ",m=" + std::to_string(b);
}

const std::vector<ModeId>* SpectrumTable::shell_modes(int n) const {
    auto it = shells.find(n);
    return it == shells.end() ? nullptr : &it->second;
}

std::optional<int> SpectrumTable::shell_of(double s) const {
    if (s < 0.0) throw DomainError("shell_of: eigenvalue must be nonnegative");
    if (s == 0.0) return std::nullopt;
    if (s < lambda1) throw DomainError("shell_of: eigenvalue below lambda1");
    return static_cast<int>(std::floor(s - lambda1));
}

int SpectrumTable::max_label() const {
    int m = 0;
    for (const auto& mode : modes) {
        m = std::max(m, std::abs(mode.a));
        m = std::max(m, std::abs(mode.b));
    }
    return m;
}

double SpectrumTable::shell_norm(const std::vector<double>& coeffs, int n) const {
    const auto* ids = shell_modes(n);
    if (!ids) return 0.0;
    double sum = 0.0;
    for (ModeId id : *ids) sum += coeffs[id] * coeffs[id];
    return std::sqrt(sum);
}

std::uint64_t SpectrumTable::fingerprint() const {
    std::uint64_t h = 14695981039346656037ull;
    h = fnv1a(h, kind == ManifoldKind::Torus ? 1 : 2);
    std::uint64_t bits;
    static_assert(sizeof(double) == sizeof(std::uint64_t));
    std::memcpy(&bits, &cutoff, sizeof(bits));
    h = fnv1a(h, bits);
    h = fnv1a(h, static_cast<std::uint64_t>(quad_degree));
    h = fnv1a(h, modes.size());
    return h;
}

int default_quad_degree(ManifoldKind kind, double cutoff) {
    if (kind == ManifoldKind::Sphere) {
        int lmax = 0;
        while (std::sqrt(double(lmax + 1) * (lmax + 2)) < cutoff) ++lmax;
        return 3 * std::max(lmax, 1) + 2;
    }
    int nmax = static_cast<int>(std::floor(cutoff / kTwoPi));
    return 3 * std::max(nmax, 1) + 2;
}

SpectrumTable build_spectrum(const ManifoldConfig& config) {
    config.validate();

    SpectrumTable table;
    table.kind = config.kind;
    table.cutoff = config.cutoff;
    table.lambda1 = config.lambda1();
    table.quad_degree =
        config.quad_degree > 0 ? config.quad_degree : default_quad_degree(config.kind, config.cutoff);

    std::vector<Mode> modes;
    modes.push_back(Mode{0, 0.0, 0.0, -1, 0, 0, 0});

    if (config.kind == ManifoldKind::Sphere) {
        for (int l = 1;; ++l) {
            double s2 = double(l) * (l + 1);
            double s = std::sqrt(s2);
            if (s >= config.cutoff) break;
            for (int m = -l; m <= l; ++m) modes.push_back(Mode{0, s, s2, 0, l, m, 0});
        }
    } else {
        int r = static_cast<int>(std::ceil(config.cutoff / kTwoPi)) + 1;
        std::vector<std::array<int, 2>> reps;
        for (int n1 = 0; n1 <= r; ++n1) {
            for (int n2 = (n1 == 0 ? 1 : -r); n2 <= r; ++n2) {
                double s = kTwoPi * std::hypot(double(n1), double(n2));
                if (s == 0.0 || s >= config.cutoff) continue;
                reps.push_back({n1, n2});
            }
        }
        std::sort(reps.begin(), reps.end(), [](const auto& u, const auto& v) {
            int qu = u[0] * u[0] + u[1] * u[1], qv = v[0] * v[0] + v[1] * v[1];
            if (qu != qv) return qu < qv;
            return u < v;
        });
        for (const auto& n : reps) {
            double q = double(n[0]) * n[0] + double(n[1]) * n[1];
            double s2 = kTwoPi * kTwoPi * q;
            double s = kTwoPi * std::sqrt(q);
            for (int trig = 0; trig < 2; ++trig)
                modes.push_back(Mode{0, s, s2, 0, n[0], n[1], trig});
        }
    }

    std::stable_sort(modes.begin(), modes.end(), [&](const Mode& u, const Mode& v) {
        if (u.s != v.s) return u.s < v.s;
        if (u.a != v.a) return u.a < v.a;
        if (u.b != v.b) return u.b < v.b;
        return u.trig < v.trig;
    });

    if (modes.size() < 2)
        throw ConfigError("cutoff retains only the constant mode; the dynamics is empty");

    for (std::size_t i = 0; i < modes.size(); ++i) {
        Mode& m = modes[i];
        m.id = static_cast<ModeId>(i);
        if (m.s > 0.0) {
            m.shell = static_cast<int>(std::floor(m.s - table.lambda1));
            table.shells[m.shell].push_back(m.id);
            int group = config.kind == ManifoldKind::Sphere ? m.a : m.a * m.a + m.b * m.b;
            table.eigenspaces[group].push_back(m.id);
        }
    }
    table.modes = std::move(modes);
    return table;
}

}  // namespace nsshell
