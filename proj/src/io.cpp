#include "nsshell/io.hpp"

#include <algorithm>
#include <cstdio>
#include <cstring>
#include <ostream>
#include <sstream>

#include "nsshell/errors.hpp"
#include <json.hpp>

namespace nsshell {

using nlohmann::json;

std::string format_double(double v) {
    // 17 significant digits: enough to reproduce any binary64 exactly
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// ---- SpectralField

std::string field_to_json(const SpectralField& f) {
    json j;
    j["table"] = {{"kind", to_string(f.table().kind)},
                  {"cutoff", f.table().cutoff},
                  {"quad_degree", f.table().quad_degree},
                  {"n_modes", f.table().size()}};
    json coeffs = json::array();
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (f.coeffs()[i] != 0.0) coeffs.push_back({i, f.coeffs()[i]});
    }
    j["coeffs"] = std::move(coeffs);
    return j.dump();
}

SpectralField field_from_json(const SpectrumTable& table, const std::string& json_text) {
    json j = json::parse(json_text);
    if (j.at("table").at("n_modes").get<std::size_t>() != table.size())
        throw IoError("field does not match the spectrum table");
    SpectralField f(table);
    for (const auto& pair : j.at("coeffs")) {
        std::size_t id = pair.at(0).get<std::size_t>();
        if (id >= table.size()) throw IoError("mode id out of range");
        f[ModeId(id)] = pair.at(1).get<double>();
    }
    return f;
}

// ---- GalerkinState snapshot

std::string state_to_json(const GalerkinState& state, const ManifoldConfig& manifold) {
    json j;
    j["manifold"] = {{"kind", to_string(manifold.kind)},
                     {"variant", to_string(manifold.variant)},
                     {"cutoff", manifold.cutoff},
                     {"quad_degree", state.omega.table().quad_degree}};
    j["t"] = state.t;
    j["shells"] = state.shells;
    j["harmonic"] = state.harmonic;
    json coeffs = json::array();
    for (std::size_t i = 0; i < state.omega.size(); ++i)
        if (state.omega.coeffs()[i] != 0.0) coeffs.push_back({i, state.omega.coeffs()[i]});
    j["omega"] = std::move(coeffs);
    return j.dump(2);
}

GalerkinState state_from_json(const SpectrumTable& table, const std::string& json_text,
                              ManifoldConfig* manifold_out) {
    json j = json::parse(json_text);
    GalerkinState s;
    s.t = j.at("t").get<double>();
    for (int n : j.at("shells")) s.shells.insert(n);
    s.harmonic = j.at("harmonic").get<std::vector<double>>();
    s.omega = SpectralField(table);
    for (const auto& pair : j.at("omega")) {
        std::size_t id = pair.at(0).get<std::size_t>();
        if (id >= table.size()) throw IoError("mode id out of range");
        s.omega[ModeId(id)] = pair.at(1).get<double>();
    }
    if (manifold_out) {
        manifold_out->kind = manifold_kind_from_string(j.at("manifold").at("kind"));
        manifold_out->variant = laplacian_variant_from_string(j.at("manifold").at("variant"));
        manifold_out->cutoff = j.at("manifold").at("cutoff").get<double>();
        manifold_out->quad_degree = j.at("manifold").at("quad_degree").get<int>();
    }
    return s;
}

// ---- CSV

void write_trajectory_csv(std::ostream& os, const SpectrumTable& table,
                          const std::vector<MonitorRecord>& records) {
    os << "t,energy,enstrophy";
    for (const auto& [n, ids] : table.shells) os << ",shell:" << format_double(table.shell_key(n));
    os << ",energy_residual,enstrophy_residual\n";
    for (const auto& r : records) {
        os << format_double(r.t) << ',' << format_double(r.energy) << ','
           << format_double(r.enstrophy);
        for (double v : r.shell_norms) os << ',' << format_double(v);
        os << ',' << format_double(r.energy_residual) << ','
           << format_double(r.enstrophy_residual) << '\n';
    }
}

std::string report_to_json(const DominationReport& report) {
    json j;
    j["k"] = report.key;
    j["shell"] = report.shell;
    json regions;
    for (const auto& [tag, value] : report.convective_by_region) regions[tag] = value;
    j["regions"] = std::move(regions);
    j["harmonic"] = report.harmonic_term;
    j["linear"] = report.linear_terms;
    j["diffusion"] = report.diffusion_magnitude;
    j["total_nondiffusive"] = report.total_nondiffusive;
    j["dominated"] = report.dominated;
    j["tail_bound"] = report.tail_bound;
    return j.dump(2);
}

void write_margin_csv(std::ostream& os, const std::vector<ShellMargin>& margins) {
    os << "shell,k,norm,bound,margin,contact\n";
    for (const auto& m : margins) {
        os << m.shell << ',' << format_double(m.key) << ',' << format_double(m.norm) << ','
           << format_double(m.bound) << ',' << format_double(m.margin) << ','
           << (m.boundary_contact ? 1 : 0) << '\n';
    }
}

void write_report_sweep_csv(std::ostream& os, const std::vector<DominationReport>& reports) {
    os << "shell,k,total_nondiffusive,harmonic,linear,diffusion,dominated,tail_bound\n";
    for (const auto& r : reports) {
        os << r.shell << ',' << format_double(r.key) << ','
           << format_double(r.total_nondiffusive) << ',' << format_double(r.harmonic_term) << ','
           << format_double(r.linear_terms) << ',' << format_double(r.diffusion_magnitude) << ','
           << (r.dominated ? 1 : 0) << ',' << format_double(r.tail_bound) << '\n';
    }
}

// ---- binary cache

namespace {

constexpr char kMagic[] = "NSSHELLSPX1\n";
constexpr std::uint32_t kVersion = 1;

template <typename T>
void put(std::ostream& os, T v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof(v));
}

template <typename T>
T get(std::istream& is) {
    T v;
    is.read(reinterpret_cast<char*>(&v), sizeof(v));
    if (!is) throw IoError("truncated cache file");
    return v;
}

void put_entries(std::ostream& os, const std::vector<TriadTensor::Entry>& entries) {
    put<std::uint64_t>(os, entries.size());
    for (const auto& e : entries) {
        put<std::uint32_t>(os, e.i);
        put<std::uint32_t>(os, e.j);
        put<std::uint32_t>(os, e.k);
        put<double>(os, e.value);
    }
}

void get_entries(std::istream& is, std::vector<TriadTensor::Entry>& entries) {
    auto n = get<std::uint64_t>(is);
    entries.resize(n);
    for (auto& e : entries) {
        e.i = get<std::uint32_t>(is);
        e.j = get<std::uint32_t>(is);
        e.k = get<std::uint32_t>(is);
        e.value = get<double>(is);
    }
}

}  // namespace

void write_cache(std::ostream& os, const SpectrumTable& table, const TriadTensor& triads) {
    os.write(kMagic, sizeof(kMagic) - 1);
    put<std::uint32_t>(os, kVersion);
    put<std::uint8_t>(os, table.kind == ManifoldKind::Torus ? 0 : 1);
    put<double>(os, table.cutoff);
    put<std::uint32_t>(os, table.quad_degree);
    put<double>(os, table.lambda1);
    put<std::uint64_t>(os, table.modes.size());
    for (const Mode& m : table.modes) {
        put<std::uint32_t>(os, m.id);
        put<double>(os, m.s);
        put<double>(os, m.s2);
        put<std::int32_t>(os, m.shell);
        put<std::int32_t>(os, m.a);
        put<std::int32_t>(os, m.b);
        put<std::uint8_t>(os, std::uint8_t(m.trig));
    }
    put<std::uint64_t>(os, triads.table_fingerprint);
    put_entries(os, triads.product_entries);
    put_entries(os, triads.advection_entries);
    put<std::uint64_t>(os, triads.harmonic.size());
    for (const auto& hmap : triads.harmonic) {
        // deterministic order: sorted by packed key
        std::vector<std::pair<std::uint64_t, double>> items(hmap.begin(), hmap.end());
        std::sort(items.begin(), items.end());
        put<std::uint64_t>(os, items.size());
        for (const auto& [key, value] : items) {
            put<std::uint64_t>(os, key);
            put<double>(os, value);
        }
    }
}

void read_cache(std::istream& is, SpectrumTable& table, TriadTensor& triads) {
    char magic[sizeof(kMagic) - 1];
    is.read(magic, sizeof(magic));
    if (!is || std::memcmp(magic, kMagic, sizeof(magic)) != 0)
        throw IoError("not a spectrum cache file");
    if (get<std::uint32_t>(is) != kVersion) throw IoError("unsupported cache version");
    table = SpectrumTable{};
    table.kind = get<std::uint8_t>(is) == 0 ? ManifoldKind::Torus : ManifoldKind::Sphere;
    table.cutoff = get<double>(is);
    table.quad_degree = static_cast<int>(get<std::uint32_t>(is));
    table.lambda1 = get<double>(is);
    auto n = get<std::uint64_t>(is);
    table.modes.resize(n);
    for (auto& m : table.modes) {
        m.id = get<std::uint32_t>(is);
        m.s = get<double>(is);
        m.s2 = get<double>(is);
        m.shell = get<std::int32_t>(is);
        m.a = get<std::int32_t>(is);
        m.b = get<std::int32_t>(is);
        m.trig = get<std::uint8_t>(is);
        if (m.s > 0.0) {
            table.shells[m.shell].push_back(m.id);
            int group = table.kind == ManifoldKind::Sphere ? m.a : m.a * m.a + m.b * m.b;
            table.eigenspaces[group].push_back(m.id);
        }
    }
    triads = TriadTensor{};
    triads.table_fingerprint = get<std::uint64_t>(is);
    get_entries(is, triads.product_entries);
    get_entries(is, triads.advection_entries);
    triads.finalize();
    auto nh = get<std::uint64_t>(is);
    triads.harmonic.resize(nh);
    for (auto& hmap : triads.harmonic) {
        auto cnt = get<std::uint64_t>(is);
        for (std::uint64_t i = 0; i < cnt; ++i) {
            auto key = get<std::uint64_t>(is);
            hmap[key] = get<double>(is);
        }
    }
}

std::string cache_file_name(ManifoldKind kind, double cutoff, int quad_degree) {
    std::uint64_t bits;
    std::memcpy(&bits, &cutoff, sizeof(bits));
    std::ostringstream name;
    name << to_string(kind) << "-c" << std::hex << bits << "-q" << std::dec << quad_degree
         << ".spx";
    return name.str();
}

}  // namespace nsshell
