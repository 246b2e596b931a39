#pragma once

// Self-consistent classical steady state of both topologies.
//
// Eliminating the field gives a cubic in u = g*x_s,
//     u^3 - 2*B*u^2 + (A^2 + B^2)*u - g*beta = 0,   beta = hbar*g*eps_l^2/(m*omega_m^2),
// with A = kappa, B = delta_l for the single cavity and A = gamma + Re w,
// B = delta_l + Im w, w = J^2/(i*delta_l - kappa) for the compound system.
// Roots come from companion-matrix eigenvalues with a Newton polish; the
// smallest non-negative root is the branch a cold start settles onto.

#include <algorithm>
#include <complex>
#include <cstddef>
#include <limits>
#include <vector>

#include <Eigen/Dense>

#include "omitlab/errors.hpp"
#include "omitlab/params.hpp"

namespace omitlab::steady {

using std::complex;

struct SteadyState {
    double x_s = 0.0;                       // static displacement, m
    complex<double> a1_s{0.0, 0.0};         // fiber-coupled cavity field
    complex<double> a2_s{0.0, 0.0};         // second-cavity field (0 for Single)
    std::vector<double> all_real_roots;     // x_s candidates, ascending
    std::size_t selected_index = 0;
    std::vector<complex<double>> stability_eigs;  // linearization spectrum, 1/s
    bool stable = false;
};

namespace detail {

// Real roots of u^3 + c2*u^2 + c1*u + c0 = 0, ascending. `scale` sets the
// absolute floor for the is-this-real tolerance.
inline std::vector<double> cubic_real_roots(double c2, double c1, double c0,
                                            double scale) {
    Eigen::Matrix3d comp = Eigen::Matrix3d::Zero();
    comp(0, 2) = -c0;
    comp(1, 2) = -c1;
    comp(2, 2) = -c2;
    comp(1, 0) = 1.0;
    comp(2, 1) = 1.0;
    Eigen::EigenSolver<Eigen::Matrix3d> es(comp);

    std::vector<double> roots;
    for (int i = 0; i < 3; ++i) {
        const complex<double> z = es.eigenvalues()(i);
        if (std::abs(z.imag()) > 1e-8 * std::max(std::abs(z), scale)) continue;
        double u = z.real();
        for (int it = 0; it < 3; ++it) {  // Newton polish on the exact cubic
            const double f = ((u + c2) * u + c1) * u + c0;
            const double df = (3.0 * u + 2.0 * c2) * u + c1;
            if (df == 0.0) break;
            u -= f / df;
        }
        roots.push_back(u);
    }
    std::sort(roots.begin(), roots.end());
    return roots;
}

// Shared cubic setup: returns all real x_s candidates and the selected branch.
inline void solve_cubic_branch(const SystemParams& p, double eps_l, double A,
                               double B, SteadyState& out) {
    const double g = p.g();
    const double beta = p.hbar * g * eps_l * eps_l / (p.m * p.omega_m * p.omega_m);
    if (g == 0.0 || beta == 0.0) {
        out.all_real_roots = {0.0};
        out.selected_index = 0;
        out.x_s = 0.0;
        return;
    }
    const double scale = std::max(std::abs(A), std::abs(B));
    const auto u_roots =
        cubic_real_roots(-2.0 * B, A * A + B * B, -g * beta, scale);
    if (u_roots.empty())
        throw NoRealRoot("steady state: cubic solver returned no real root");

    out.all_real_roots.clear();
    for (double u : u_roots) out.all_real_roots.push_back(u / g);

    const double span = std::abs(out.all_real_roots.back());
    const double tol = 1e-12 * std::max(span, 1e-300);
    std::size_t pick = out.all_real_roots.size();
    for (std::size_t i = 0; i < out.all_real_roots.size(); ++i) {
        if (out.all_real_roots[i] >= -tol) { pick = i; break; }  // ascending: first hit is smallest
    }
    if (pick == out.all_real_roots.size())
        throw NoRealRoot("steady state: no non-negative real root");
    out.selected_index = pick;
    out.x_s = out.all_real_roots[pick];
}

}  // namespace detail

inline std::vector<complex<double>> stability_eigenvalues(const SystemParams& p,
                                                          const SteadyState& ss);

namespace detail {

inline void finish_with_stability(const SystemParams& p, SteadyState& ss) {
    ss.stability_eigs = stability_eigenvalues(p, ss);
    double max_re = -std::numeric_limits<double>::infinity();
    for (const auto& ev : ss.stability_eigs) max_re = std::max(max_re, ev.real());
    ss.stable = max_re < 1e-6 * p.gamma;
}

}  // namespace detail

inline SteadyState solve_single(const SystemParams& p, const DriveFields& d) {
    SteadyState ss;
    detail::solve_cubic_branch(p, d.eps_l, p.kappa, p.delta_l, ss);
    const double u = p.g() * ss.x_s;
    ss.a1_s = d.eps_l / complex<double>(-p.kappa, p.delta_l - u);
    ss.a2_s = {0.0, 0.0};
    detail::finish_with_stability(p, ss);
    return ss;
}

inline SteadyState solve_double(const SystemParams& p, const DriveFields& d) {
    const complex<double> denom2(-p.kappa, p.delta_l);  // i*delta_l - kappa
    if (denom2 == complex<double>(0.0, 0.0))
        throw SingularPoint("solve_double: i*delta_l - kappa = 0, second cavity undefined");
    const double J = p.coupling_j;
    const complex<double> w = J * J / denom2;

    SteadyState ss;
    detail::solve_cubic_branch(p, d.eps_l, p.gamma + w.real(), p.delta_l + w.imag(), ss);
    const double u = p.g() * ss.x_s;
    ss.a1_s = d.eps_l / (complex<double>(0.0, p.delta_l - u) + p.gamma + w);
    ss.a2_s = complex<double>(0.0, J) * ss.a1_s / denom2;
    detail::finish_with_stability(p, ss);
    return ss;
}

inline SteadyState solve(const SystemParams& p, const DriveFields& d) {
    return p.topology == Topology::Single ? solve_single(p, d) : solve_double(p, d);
}

// Spectrum of the pump-only dynamics linearized about ss. State ordering:
// (Re da, Im da, dx, dv) for Single; (Re da1, Im da1, Re da2, Im da2, dx, dv)
// for Double. Mechanical displacement couples through the static field, the
// field feeds back on the oscillator through the radiation-pressure force.
inline std::vector<complex<double>> stability_eigenvalues(const SystemParams& p,
                                                          const SteadyState& ss) {
    const double g = p.g();
    const double u = g * ss.x_s;
    const double fr = 2.0 * p.hbar * g / p.m;  // force per field quadrature
    Eigen::MatrixXd M;

    if (p.topology == Topology::Single) {
        const double phi = u - p.delta_l;
        M = Eigen::MatrixXd::Zero(4, 4);
        M(0, 0) = p.kappa;  M(0, 1) = -phi;     M(0, 2) = -g * ss.a1_s.imag();
        M(1, 0) = phi;      M(1, 1) = p.kappa;  M(1, 2) = g * ss.a1_s.real();
        M(2, 3) = 1.0;
        M(3, 0) = fr * ss.a1_s.real();
        M(3, 1) = fr * ss.a1_s.imag();
        M(3, 2) = -p.omega_m * p.omega_m;
        M(3, 3) = -p.gamma_m;
    } else {
        const double phi = u - p.delta_l;
        const double J = p.coupling_j;
        M = Eigen::MatrixXd::Zero(6, 6);
        // d a1 = (-gamma + i*phi) a1 + i J a2 + i g a1_s dx
        M(0, 0) = -p.gamma;  M(0, 1) = -phi;     M(0, 3) = -J;
        M(1, 0) = phi;       M(1, 1) = -p.gamma; M(1, 2) = J;
        M(0, 4) = -g * ss.a1_s.imag();
        M(1, 4) = g * ss.a1_s.real();
        // d a2 = (kappa - i*delta_l) a2 + i J a1
        M(2, 1) = -J;  M(2, 2) = p.kappa;   M(2, 3) = p.delta_l;
        M(3, 0) = J;   M(3, 2) = -p.delta_l; M(3, 3) = p.kappa;
        M(4, 5) = 1.0;
        M(5, 0) = fr * ss.a1_s.real();
        M(5, 1) = fr * ss.a1_s.imag();
        M(5, 4) = -p.omega_m * p.omega_m;
        M(5, 5) = -p.gamma_m;
    }

    Eigen::EigenSolver<Eigen::MatrixXd> es(M);
    std::vector<complex<double>> eigs(M.rows());
    for (int i = 0; i < M.rows(); ++i) eigs[i] = es.eigenvalues()(i);
    std::sort(eigs.begin(), eigs.end(), [](const auto& a, const auto& b) {
        if (a.real() != b.real()) return a.real() > b.real();
        return a.imag() < b.imag();
    });
    return eigs;
}

}  // namespace omitlab::steady

namespace omitlab {
using steady::SteadyState;
}
