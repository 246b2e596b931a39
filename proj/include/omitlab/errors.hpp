#pragma once

#include <stdexcept>
#include <string>

namespace omitlab {

// A denominator that is exactly zero for the requested parameter point
// (e.g. the inter-cavity coupling term J^2/(i(Delta_l -+ xi) -+ kappa) at a
// point where its denominator vanishes, or the second-cavity steady state at
// i*Delta_l - kappa = 0).
struct SingularPoint : std::runtime_error {
    explicit SingularPoint(const std::string& what) : std::runtime_error(what) {}
};

// The steady-state cubic produced no acceptable real root; for a real cubic
// this can only mean a solver fault, so it is an error, not a physics result.
struct NoRealRoot : std::runtime_error {
    explicit NoRealRoot(const std::string& what) : std::runtime_error(what) {}
};

// The near-balance approximation diverges when kappa*gamma == J^2.
struct BalancePole : std::runtime_error {
    explicit BalancePole(const std::string& what) : std::runtime_error(what) {}
};

// Time-domain state left the basin of the steady state (self-oscillation or
// runaway gain); the demodulation result would be meaningless.
struct Diverged : std::runtime_error {
    explicit Diverged(const std::string& what) : std::runtime_error(what) {}
};

// The post-transient trajectory tail holds fewer beat periods than the
// demodulation needs for a trustworthy harmonic estimate.
struct WindowTooShort : std::runtime_error {
    explicit WindowTooShort(const std::string& what) : std::runtime_error(what) {}
};

// Bad user input: malformed config file, unknown key, invalid field value.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace omitlab
