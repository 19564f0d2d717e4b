#include "cli_config.hpp"

#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "nsshell/errors.hpp"
#include "nsshell/estimates.hpp"
#include "nsshell/io.hpp"

namespace nsshell::cli {

namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

}  // namespace

IniFile IniFile::parse_text(const std::string& text) {
    IniFile ini;
    ini.raw_text = text;
    std::istringstream is(text);
    std::string line, section;
    while (std::getline(is, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[' && line.back() == ']') {
            section = trim(line.substr(1, line.size() - 2));
            ini.sections[section];
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("bad config line (expected key = value): " + line);
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        ini.sections[section][key] = value;
    }
    return ini;
}

IniFile IniFile::parse_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw IoError("cannot open config file: " + path);
    std::ostringstream buf;
    buf << is.rdbuf();
    return parse_text(buf.str());
}

bool IniFile::has(const std::string& section, const std::string& key) const {
    auto s = sections.find(section);
    if (s == sections.end()) return false;
    auto k = s->second.find(key);
    return k != s->second.end() && !k->second.empty();
}

std::string IniFile::require(const std::string& section, const std::string& key) const {
    if (!has(section, key))
        throw ConfigError("missing required config key [" + section + "] " + key);
    return sections.at(section).at(key);
}

std::string IniFile::get_or(const std::string& section, const std::string& key,
                            const std::string& fallback) const {
    return has(section, key) ? sections.at(section).at(key) : fallback;
}

double IniFile::require_double(const std::string& section, const std::string& key) const {
    const std::string v = require(section, key);
    try {
        std::size_t pos = 0;
        double d = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        throw ConfigError("config key [" + section + "] " + key + " is not a number: " + v);
    }
}

double IniFile::get_double_or(const std::string& section, const std::string& key,
                              double fallback) const {
    return has(section, key) ? require_double(section, key) : fallback;
}

long IniFile::require_long(const std::string& section, const std::string& key) const {
    const std::string v = require(section, key);
    try {
        std::size_t pos = 0;
        long l = std::stol(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return l;
    } catch (const std::exception&) {
        throw ConfigError("config key [" + section + "] " + key + " is not an integer: " + v);
    }
}

long IniFile::get_long_or(const std::string& section, const std::string& key,
                          long fallback) const {
    return has(section, key) ? require_long(section, key) : fallback;
}

ManifoldConfig load_manifold(const IniFile& ini) {
    ManifoldConfig mc;
    mc.kind = manifold_kind_from_string(ini.require("manifold", "kind"));
    mc.variant = laplacian_variant_from_string(ini.require("manifold", "variant"));
    mc.cutoff = ini.require_double("manifold", "cutoff");
    mc.quad_degree = static_cast<int>(ini.get_long_or("manifold", "quad_degree", 0));
    mc.validate();
    return mc;
}

RunConfig load_run(const IniFile& ini) {
    RunConfig rc;
    rc.manifold = load_manifold(ini);
    rc.nu = ini.require_double("run", "nu");
    rc.dt = ini.require_double("run", "dt");
    rc.t_end = ini.require_double("run", "t_end");
    rc.scheme = time_scheme_from_string(ini.require("run", "scheme"));
    rc.monitor_cadence = static_cast<int>(ini.get_long_or("run", "monitor_cadence", 1));
    if (ini.has("run", "z_min") || ini.has("run", "z_max")) {
        long zmin = ini.require_long("run", "z_min");
        long zmax = ini.require_long("run", "z_max");
        for (long z = zmin; z <= zmax; ++z) rc.shells.insert(static_cast<int>(z));
    }
    rc.validate();
    return rc;
}

std::uint64_t initial_seed(const IniFile& ini, std::optional<std::uint64_t> seed_override) {
    if (seed_override) return *seed_override;
    return static_cast<std::uint64_t>(ini.get_long_or("initial", "seed", 0));
}

namespace {

std::vector<double> parse_harmonic(const IniFile& ini, const SpectrumTable& table) {
    int hdim = table.kind == ManifoldKind::Torus ? 2 : 0;
    std::vector<double> h(hdim, 0.0);
    if (ini.has("initial", "harmonic")) {
        if (hdim == 0)
            throw ConfigError("harmonic coefficients are not available on the sphere");
        std::string v = ini.require("initial", "harmonic");
        auto comma = v.find(',');
        if (comma == std::string::npos)
            throw ConfigError("harmonic must be 'h1,h2'");
        h[0] = std::stod(v.substr(0, comma));
        h[1] = std::stod(v.substr(comma + 1));
    }
    return h;
}

ModeId find_mode(const SpectrumTable& table, const std::string& label) {
    // torus: "n1,n2,cos|sin"; sphere: "l,m"
    std::vector<std::string> parts;
    std::string cur;
    for (char c : label) {
        if (c == ',') {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    parts.push_back(cur);
    if (table.kind == ManifoldKind::Torus) {
        if (parts.size() != 3) throw ConfigError("torus mode label must be 'n1,n2,cos|sin'");
        int a = std::stoi(parts[0]), b = std::stoi(parts[1]);
        int trig = parts[2] == "sin" ? 1 : 0;
        for (const Mode& m : table.modes)
            if (m.s > 0.0 && m.a == a && m.b == b && m.trig == trig) return m.id;
    } else {
        if (parts.size() != 2) throw ConfigError("sphere mode label must be 'l,m'");
        int l = std::stoi(parts[0]), mm = std::stoi(parts[1]);
        for (const Mode& m : table.modes)
            if (m.s > 0.0 && m.a == l && m.b == mm) return m.id;
    }
    throw ConfigError("mode label not found in the spectrum: " + label);
}

}  // namespace

GalerkinState build_initial_state(const IniFile& ini, const SpectrumTable& table,
                                  std::optional<std::uint64_t> seed_override) {
    GalerkinState s;
    s.t = 0.0;
    for (const auto& [n, ids] : table.shells) s.shells.insert(n);
    s.omega = SpectralField(table);
    s.harmonic = parse_harmonic(ini, table);

    std::string type = ini.require("initial", "type");
    std::uint64_t seed = initial_seed(ini, seed_override);
    if (type == "zero") {
        return s;
    }
    if (type == "file") {
        std::ifstream is(ini.require("initial", "file"));
        if (!is) throw IoError("cannot open snapshot file");
        std::ostringstream buf;
        buf << is.rdbuf();
        return nsshell::state_from_json(table, buf.str());
    }
    double amplitude = ini.require_double("initial", "amplitude");
    if (type == "single_mode") {
        s.omega[find_mode(table, ini.require("initial", "mode"))] = amplitude;
        return s;
    }
    if (type == "taylor_green") {
        if (table.kind != ManifoldKind::Torus)
            throw ConfigError("taylor_green initial data lives on the torus");
        double c = amplitude / std::sqrt(2.0);
        s.omega[find_mode(table, "1,1,cos")] = c;
        s.omega[find_mode(table, "1,-1,cos")] = c;
        return s;
    }
    if (type == "random" || type == "envelope") {
        double r = ini.get_double_or("initial", "r", 0.0);
        std::mt19937_64 rng(derive_seed(seed, 0x1c0, 0, 0));
        std::normal_distribution<double> gauss(0.0, 1.0);
        for (const auto& [n, ids] : table.shells) {
            double key = table.shell_key(n);
            std::vector<double> dir(ids.size());
            double sum = 0.0;
            for (auto& d : dir) {
                d = gauss(rng);
                sum += d * d;
            }
            double target = std::pow(key, -r);
            double scale = sum > 0.0 ? target / std::sqrt(sum) : 0.0;
            for (std::size_t i = 0; i < ids.size(); ++i) s.omega[ids[i]] = scale * dir[i];
        }
        if (type == "random") {
            double norm = s.omega.norm_l2();
            if (norm > 0.0)
                for (std::size_t i = 0; i < s.omega.size(); ++i)
                    s.omega.coeffs()[i] *= amplitude / norm;
        } else {
            // envelope: per-shell norms exactly amplitude * k^{-r}
            for (std::size_t i = 0; i < s.omega.size(); ++i) s.omega.coeffs()[i] *= amplitude;
        }
        return s;
    }
    throw ConfigError("unknown initial data type: " + type);
}

}  // namespace nsshell::cli
