#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include "nsshell/dynamics.hpp"
#include "nsshell/spectrum.hpp"

namespace nsshell::cli {

// line-based key = value text with [sections]; '#' starts a comment
struct IniFile {
    std::map<std::string, std::map<std::string, std::string>> sections;
    std::string raw_text;

    static IniFile parse_file(const std::string& path);
    static IniFile parse_text(const std::string& text);

    bool has(const std::string& section, const std::string& key) const;
    // physics keys have no defaults: missing -> ConfigError
    std::string require(const std::string& section, const std::string& key) const;
    std::string get_or(const std::string& section, const std::string& key,
                       const std::string& fallback) const;
    double require_double(const std::string& section, const std::string& key) const;
    double get_double_or(const std::string& section, const std::string& key, double fallback) const;
    long require_long(const std::string& section, const std::string& key) const;
    long get_long_or(const std::string& section, const std::string& key, long fallback) const;
};

ManifoldConfig load_manifold(const IniFile& ini);
RunConfig load_run(const IniFile& ini);

// [initial] section; seed_override (from --seed) wins over the file seed
GalerkinState build_initial_state(const IniFile& ini, const SpectrumTable& table,
                                  std::optional<std::uint64_t> seed_override);

std::uint64_t initial_seed(const IniFile& ini, std::optional<std::uint64_t> seed_override);

}  // namespace nsshell::cli
