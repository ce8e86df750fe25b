#pragma once

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>

namespace mlring {

/// Raised for malformed or out-of-range configuration. The CLI maps it to exit code 2.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised when a numerical procedure cannot produce a trustworthy result. Exit code 3.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Physical and coupling constants of the ring of mode-locked lasers.
///
/// The pump parameter (unsaturated gain g0) is not stored here; every operation
/// takes it explicitly as `alpha`. Defaults are the case-study values, with
/// kappa read as the attenuation whose square root multiplies the field
/// (see README, "Parameter conventions").
struct LaserParams {
    double gamma_g = 0.01;  ///< carrier relaxation rate, gain section
    double gamma_q = 1.0;   ///< carrier relaxation rate, absorber section
    double gamma = 15.0;    ///< field decay rate
    double kappa = 0.2;     ///< attenuation; enters the field equation as sqrt(kappa)
    double q0 = 2.0;        ///< unsaturated absorption
    double E_g = 1.0;       ///< saturation energy, gain
    double E_q = 0.1;       ///< saturation energy, absorber
    double T = 2.5;         ///< cold-cavity round-trip time (the delay)
    double eta_g = 1.0;     ///< linewidth enhancement factor, gain
    double eta_q = 1.0;     ///< linewidth enhancement factor, absorber
    double psi = 0.0;       ///< coupling phase
    double eta = 2.0;       ///< coupling strength
    int n = 8;              ///< number of lasers in the ring

    /// Throws ConfigError when an invariant is violated.
    void validate() const;
};

/// Parses `key=value` lines. '#' starts a comment; blank lines are ignored.
/// Keys must match field names exactly. Unset keys keep the value in `base`.
LaserParams parse_params(std::istream& in, LaserParams base = {});

LaserParams load_params(const std::filesystem::path& path, LaserParams base = {});

/// Serializes every field as `key=value` lines (12 significant digits).
std::string format_params(const LaserParams& p);

}  // namespace mlring
