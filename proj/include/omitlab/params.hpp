#pragma once

// Physical parameters and drive amplitudes shared by every other module.
// One SystemParams instance describes either a single optomechanical cavity
// (fiber-coupled, net optical rate kappa: > 0 gain, < 0 loss) or a compound
// pair: the fiber-coupled optomechanical cavity with loss gamma, tunnel-coupled
// at rate J to a second resonator carrying the gain kappa.

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace omitlab::params {

enum class Topology { Single, Double };

inline const char* to_string(Topology t) {
    return t == Topology::Single ? "single" : "double";
}

struct SystemParams {
    Topology topology = Topology::Single;

    double m = 0.0;            // effective mechanical mass, kg
    double omega_m = 0.0;      // mechanical frequency, rad/s
    double gamma_m = 0.0;      // mechanical damping, 1/s
    double omega_c = 0.0;      // cavity resonance, 1/s (literal convention)
    double gamma = 0.0;        // passive decay / fiber coupling rate, 1/s
    double kappa = 0.0;        // gain rate, 1/s (signed; see file header)
    double coupling_j = 0.0;   // inter-cavity tunneling J, 1/s (Double only)
    double radius = 0.0;       // resonator radius R, m
    double delta_l = 0.0;      // pump detuning omega_c - omega_l, rad/s
    double p_l = 0.0;          // pump power, W
    double probe_ratio = 0.0;  // eps_p / eps_l
    double hbar = 1.0545718e-34;  // J*s

    // COM coupling, rad/(s*m); derived so it can never drift out of sync with
    // omega_c and R. radius = +inf is the supported way to switch coupling off.
    double g() const { return omega_c / radius; }
};

struct DriveFields {
    double eps_l = 0.0;  // pump amplitude, sqrt(photon flux)
    double eps_p = 0.0;  // probe amplitude, same units
};

inline SystemParams paper_defaults(Topology topology) {
    SystemParams p;
    p.topology = topology;
    p.m = 50e-12;                    // 50 ng
    p.omega_m = 2.0 * M_PI * 23.4e6; // 23.4 MHz mechanical mode
    p.gamma_m = 2.4e5;
    p.omega_c = 1.93e14;             // 1550 nm band
    p.gamma = 6.43e6;
    p.radius = 34.5e-6;
    p.delta_l = p.omega_m;           // pump parked one mechanical frequency below the line
    p.p_l = 933e-6;
    p.probe_ratio = 0.05;
    if (topology == Topology::Single) {
        p.kappa = -p.gamma;          // passive baseline
        p.coupling_j = 0.0;
    } else {
        p.kappa = p.gamma;           // gain-loss balance baseline
        p.coupling_j = p.gamma;
    }
    return p;
}

inline DriveFields drive_amplitudes(const SystemParams& p) {
    if (p.p_l < 0.0)
        throw std::invalid_argument("drive_amplitudes: p_l must be >= 0");
    const double omega_l = p.omega_c - p.delta_l;
    DriveFields d;
    d.eps_l = std::sqrt(2.0 * p.gamma * p.p_l / (p.hbar * omega_l));
    d.eps_p = p.probe_ratio * d.eps_l;
    return d;
}

// Collects violations instead of aborting so a CLI can report all of them.
inline std::vector<std::string> validate(const SystemParams& p) {
    std::vector<std::string> v;
    auto require = [&](bool ok, const std::string& msg) {
        if (!ok) v.push_back(msg);
    };
    require(p.m > 0.0, "m: must be > 0");
    require(p.omega_m > 0.0, "omega_m: must be > 0");
    require(p.gamma_m >= 0.0, "gamma_m: must be >= 0");
    require(p.gamma > 0.0, "gamma: must be > 0");
    require(p.radius > 0.0, "radius: must be > 0");
    require(p.p_l >= 0.0, "p_l: must be >= 0");
    require(p.probe_ratio >= 0.0, "probe_ratio: must be >= 0");
    require(p.hbar > 0.0, "hbar: must be > 0");
    if (p.topology == Topology::Single)
        require(p.coupling_j == 0.0, "coupling_j: must be 0 for single topology");
    return v;
}

}  // namespace omitlab::params

namespace omitlab {
using params::DriveFields;
using params::SystemParams;
using params::Topology;
}  // namespace omitlab
