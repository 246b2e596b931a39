#pragma once

// Closed-form frequency-domain response at one probe beat frequency xi.
//
// The probe and its nonlinearly generated second harmonic ride on the pump as
//     da = A1p e^{-i xi t} + A1m e^{+i xi t} + A2p e^{-2i xi t} + A2m e^{+2i xi t},
// and eliminating the mechanical fluctuation gives every amplitude in terms of
// three lambda functions: the mechanical susceptibility inverse
//     lam(xi)  = m (omega_m^2 - xi^2 - i xi Gamma_m)
// and an optical pair lam1/lam2 for the co- and counter-rotating channels. The
// pair obeys the mirror identity lam2(xi) = conj(lam1(-xi)) in both topologies;
// for the compound system the second cavity enters through its adiabatic
// response at each sideband frequency separately, so the two channels carry
// different J^2 shift terms.

#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <utility>

#include "omitlab/errors.hpp"
#include "omitlab/params.hpp"
#include "omitlab/steady_state.hpp"

namespace omitlab::resp {

using std::complex;

struct LambdaSet {
    complex<double> lam;    // mechanical, kg*(rad/s)^2
    complex<double> lam1;   // co-rotating optical channel, 1/s
    complex<double> lam2;   // counter-rotating optical channel, 1/s
    double at_xi = 0.0;     // evaluation frequency, rad/s
};

struct SidebandResponse {
    double xi = 0.0;                  // probe beat frequency, rad/s
    complex<double> a_plus_1;         // first-order upper-sideband amplitude
    complex<double> x_1;              // mechanical oscillation amplitude, m
    complex<double> a_plus_2;         // second-order upper-sideband amplitude
    complex<double> t_p;              // probe transmission coefficient
    double eta = 0.0;                 // second-order sideband efficiency
    bool stable = false;              // propagated from the steady state
};

inline LambdaSet lambda_set(double xi, const SystemParams& p,
                            const SteadyState& ss) {
    const double u = p.g() * ss.x_s;
    LambdaSet L;
    L.at_xi = xi;
    L.lam = p.m * complex<double>(p.omega_m * p.omega_m - xi * xi,
                                  -xi * p.gamma_m);
    const complex<double> detune(0.0, p.delta_l - u);  // i(delta_l - g x_s)
    if (p.topology == Topology::Single) {
        L.lam1 = complex<double>(-p.kappa, -xi) + detune;
        L.lam2 = complex<double>(-p.kappa, -xi) - detune;
    } else {
        const double J = p.coupling_j;
        const complex<double> dp(-p.kappa, p.delta_l - xi);  // i(delta_l-xi) - kappa
        const complex<double> dm(p.kappa, p.delta_l + xi);   // i(delta_l+xi) + kappa
        if (dp == complex<double>(0.0, 0.0) || dm == complex<double>(0.0, 0.0))
            throw SingularPoint("lambda_set: second-cavity sideband response undefined "
                                "(i(delta_l -/+ xi) -/+ kappa = 0)");
        L.lam1 = complex<double>(p.gamma, -xi) + detune + J * J / dp;
        L.lam2 = complex<double>(p.gamma, -xi) - detune - J * J / dm;
    }
    return L;
}

namespace detail {

inline complex<double> nan_marker() {
    const double qn = std::numeric_limits<double>::quiet_NaN();
    return {qn, qn};
}

// Shared first-order denominator D1(xi) = lam*lam1*lam2 + i(lam1-lam2)*hbar*g^2*n.
inline complex<double> d1(const LambdaSet& L, double hbar_g2_n) {
    const complex<double> I(0.0, 1.0);
    return L.lam * L.lam1 * L.lam2 + I * (L.lam1 - L.lam2) * hbar_g2_n;
}

}  // namespace detail

inline std::pair<complex<double>, complex<double>> first_order(
    double xi, const SystemParams& p, const DriveFields& d,
    const SteadyState& ss) {
    const complex<double> I(0.0, 1.0);
    const double g = p.g();
    const double n = std::norm(ss.a1_s);
    const LambdaSet L = lambda_set(xi, p, ss);
    const complex<double> D1 = detail::d1(L, p.hbar * g * g * n);
    if (std::abs(D1) < 1e-30)
        return {detail::nan_marker(), detail::nan_marker()};
    const complex<double> a1 =
        (L.lam * L.lam2 + I * p.hbar * g * g * n) * d.eps_p / D1;
    const complex<double> x1 =
        L.lam2 * p.hbar * g * std::conj(ss.a1_s) * d.eps_p / D1;
    return {a1, x1};
}

inline complex<double> second_order(
    double xi, const SystemParams& p, [[maybe_unused]] const DriveFields& d,
    const SteadyState& ss,
    const std::pair<complex<double>, complex<double>>& first) {
    const complex<double> I(0.0, 1.0);
    const double g = p.g();
    const double n = std::norm(ss.a1_s);
    const LambdaSet L = lambda_set(xi, p, ss);
    const LambdaSet L2 = lambda_set(2.0 * xi, p, ss);
    const complex<double> C1 = -I * p.hbar * g * g * g * g * ss.a1_s * n;
    const complex<double> C2 = p.hbar * g * g * g * (L2.lam2 - L.lam2) * n +
                               I * g * L.lam2 * L2.lam * L2.lam2;
    const complex<double> D2 =
        L.lam2 * detail::d1(L2, p.hbar * g * g * n);
    if (std::abs(D2) < 1e-30) return detail::nan_marker();
    const auto& [a1, x1] = first;
    return (C1 * x1 * x1 + C2 * a1 * x1) / D2;
}

inline complex<double> transmission(complex<double> a_plus_1,
                                    const DriveFields& d,
                                    const SystemParams& p) {
    if (!(d.eps_p > 0.0))
        throw std::invalid_argument("transmission: eps_p must be positive");
    return 1.0 - p.gamma / d.eps_p * a_plus_1;
}

inline double efficiency(complex<double> a_plus_2, const DriveFields& d,
                         const SystemParams& p) {
    if (!(d.eps_p > 0.0))
        throw std::invalid_argument("efficiency: eps_p must be positive");
    return std::abs(p.gamma / d.eps_p * a_plus_2);
}

// Full pipeline at one xi. Degenerate denominators propagate as NaN fields
// rather than exceptions so a sweep can record the point as a gap.
inline SidebandResponse evaluate(double xi, const SystemParams& p,
                                 const DriveFields& d, const SteadyState& ss) {
    SidebandResponse r;
    r.xi = xi;
    r.stable = ss.stable;
    const auto first = first_order(xi, p, d, ss);
    r.a_plus_1 = first.first;
    r.x_1 = first.second;
    r.a_plus_2 = second_order(xi, p, d, ss, first);
    r.t_p = transmission(r.a_plus_1, d, p);
    r.eta = efficiency(r.a_plus_2, d, p);
    return r;
}

// Weak-sideband approximation of eta for the compound system, valid only when
// omega_m is negligible against the optical rates. Diagnostic: it diverges at
// gain-loss balance J^2 = kappa*gamma and is never a substitute for the exact
// second-order amplitude.
inline double eta_approx_ep(const SystemParams& p, const DriveFields& d,
                            const SteadyState& ss) {
    if (p.topology != Topology::Double)
        throw std::invalid_argument("eta_approx_ep: Double topology only");
    const complex<double> I(0.0, 1.0);
    const double g = p.g();
    const double J = p.coupling_j;
    const double n = std::norm(ss.a1_s);
    const double pole = J * J - p.kappa * p.gamma;
    if (std::abs(pole) < 1e-12 * J * J)
        throw BalancePole("eta_approx_ep: J^2 - kappa*gamma vanishes (exceptional point)");
    const complex<double> num = I * p.hbar * p.hbar * g * g * g * g * n *
                                std::conj(ss.a1_s) * p.kappa * p.kappa *
                                p.kappa * p.kappa * p.gamma * d.eps_p;
    const complex<double> den =
        2.0 * p.m * p.m * p.gamma_m * p.gamma_m * p.omega_m * p.omega_m *
        p.omega_m * pole * pole * pole *
        (p.m * p.omega_m * p.gamma_m * pole +
         I * p.hbar * g * g * n * (J * J - p.kappa * p.kappa));
    return std::abs(num / den);
}

}  // namespace omitlab::resp

namespace omitlab {
using resp::LambdaSet;
using resp::SidebandResponse;
}
