#pragma once

#include <stdexcept>
#include <string>

namespace nsshell {

// Invalid physical or numerical configuration (bad cutoff, bad parameters, ...).
class ConfigError : public std::runtime_error {
  public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Violated mathematical precondition (nonzero mean where pi_0 f = 0 is required, ...).
class DomainError : public std::runtime_error {
  public:
    explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

// Harmonic-sector dimension mismatch (e.g. harmonic coefficients on the sphere).
class DimensionError : public std::runtime_error {
  public:
    explicit DimensionError(const std::string& what) : std::runtime_error(what) {}
};

// Numerical blow-up during time integration; carries the time of detection.
class BlowupError : public std::runtime_error {
  public:
    BlowupError(const std::string& what, double t) : std::runtime_error(what), time(t) {}
    double time;
};

class IoError : public std::runtime_error {
  public:
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace nsshell
