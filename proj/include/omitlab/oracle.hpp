#pragma once

// Independent time-domain check of the closed-form response: integrate the
// full nonlinear equations of motion with a fixed-step RK4 scheme, let the
// transient ring down, then demodulate the cavity field at integer multiples
// of the probe beat frequency and compare against the perturbative amplitudes.
//
// The default run length (4000 mechanical periods, 75% discarded) is sized so
// the slowest transient, the mechanical envelope e^{-Gamma_m t / 2}, decays
// below the comparison thresholds for the shipped presets.

#include <cmath>
#include <complex>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "omitlab/errors.hpp"
#include "omitlab/params.hpp"
#include "omitlab/response.hpp"
#include "omitlab/steady_state.hpp"

namespace omitlab::oracle {

using std::complex;

struct Trajectory {
    std::vector<double> t;                // s
    std::vector<double> x;                // m
    std::vector<complex<double>> a1;
    std::vector<complex<double>> a2;      // empty for Single
    double dt = 0.0;                      // s
};

struct InitialState {
    complex<double> a1{0.0, 0.0};
    complex<double> a2{0.0, 0.0};
    double x = 0.0;
    double v = 0.0;
};

struct OracleReport {
    std::map<int, complex<double>> amp_closed;
    std::map<int, complex<double>> amp_measured;
    std::map<int, double> rel_err;
    bool stable = false;
    double transient_discarded = 0.0;  // s
    bool perturbative = true;          // third harmonic small vs second
};

inline double default_dt(const SystemParams& p) {
    return 2.0 * M_PI / (400.0 * p.omega_m);
}

namespace detail {

struct St {
    complex<double> a1, a2;
    double x, v;
};

inline St axpy(const St& s, const St& k, double c) {
    return {s.a1 + c * k.a1, s.a2 + c * k.a2, s.x + c * k.x, s.v + c * k.v};
}

}  // namespace detail

// Fixed-step RK4 of the classical mean-field dynamics from cold start (or an
// explicit initial state), probe beat frequency xi (default: delta_l, i.e.
// the probe sits on the cavity line center).
inline Trajectory integrate(const SystemParams& p, const DriveFields& d,
                            double t_end, double dt,
                            std::optional<double> xi_opt = std::nullopt,
                            std::optional<InitialState> init = std::nullopt) {
    if (!(dt > 0.0) || dt > 2.0 * M_PI / (200.0 * p.omega_m))
        throw std::invalid_argument(
            "integrate: dt must be positive and at most 2*pi/(200*omega_m)");
    const double xi = xi_opt.value_or(p.delta_l);
    const bool dbl = p.topology == Topology::Double;
    const complex<double> I(0.0, 1.0);
    const double g = p.g();
    const double fscale = p.hbar * g / p.m;

    // Steady-state magnitudes set the divergence guard's reference scales.
    const steady::SteadyState ss = steady::solve(p, d);
    const double sa = std::max({std::abs(ss.a1_s), std::abs(ss.a2_s),
                                (d.eps_l + d.eps_p) / std::max(p.gamma, 1.0), 1.0});
    const double sx = std::max(std::abs(ss.x_s), 1e-15);
    const double sv = p.omega_m * sx;

    const auto deriv = [&](double t, const detail::St& s) -> detail::St {
        detail::St ds;
        const complex<double> probe = d.eps_l + d.eps_p * std::polar(1.0, -xi * t);
        if (dbl) {
            ds.a1 = (complex<double>(-p.gamma, g * s.x - p.delta_l)) * s.a1 +
                    I * p.coupling_j * s.a2 + probe;
            ds.a2 = complex<double>(p.kappa, -p.delta_l) * s.a2 +
                    I * p.coupling_j * s.a1;
        } else {
            ds.a1 = (complex<double>(p.kappa, g * s.x - p.delta_l)) * s.a1 + probe;
            ds.a2 = {0.0, 0.0};
        }
        ds.x = s.v;
        ds.v = -p.gamma_m * s.v - p.omega_m * p.omega_m * s.x +
               fscale * std::norm(s.a1);
        return ds;
    };

    const std::size_t steps = static_cast<std::size_t>(std::llround(t_end / dt));
    Trajectory traj;
    traj.dt = dt;
    traj.t.reserve(steps + 1);
    traj.x.reserve(steps + 1);
    traj.a1.reserve(steps + 1);
    if (dbl) traj.a2.reserve(steps + 1);

    detail::St s{0.0, 0.0, 0.0, 0.0};
    if (init) s = {init->a1, init->a2, init->x, init->v};

    const auto record = [&](double t, const detail::St& st) {
        traj.t.push_back(t);
        traj.x.push_back(st.x);
        traj.a1.push_back(st.a1);
        if (dbl) traj.a2.push_back(st.a2);
    };
    record(0.0, s);

    for (std::size_t k = 0; k < steps; ++k) {
        const double t = static_cast<double>(k) * dt;
        const detail::St k1 = deriv(t, s);
        const detail::St k2 = deriv(t + 0.5 * dt, detail::axpy(s, k1, 0.5 * dt));
        const detail::St k3 = deriv(t + 0.5 * dt, detail::axpy(s, k2, 0.5 * dt));
        const detail::St k4 = deriv(t + dt, detail::axpy(s, k3, dt));
        s.a1 += dt / 6.0 * (k1.a1 + 2.0 * k2.a1 + 2.0 * k3.a1 + k4.a1);
        s.a2 += dt / 6.0 * (k1.a2 + 2.0 * k2.a2 + 2.0 * k3.a2 + k4.a2);
        s.x += dt / 6.0 * (k1.x + 2.0 * k2.x + 2.0 * k3.x + k4.x);
        s.v += dt / 6.0 * (k1.v + 2.0 * k2.v + 2.0 * k3.v + k4.v);
        record(static_cast<double>(k + 1) * dt, s);

        // Negated form so a non-finite state also trips the guard.
        if ((k + 1) % 1000 == 0 &&
            !(std::abs(s.a1) <= 1e12 * sa && std::abs(s.a2) <= 1e12 * sa &&
              std::abs(s.x) <= 1e12 * sx && std::abs(s.v) <= 1e12 * sv)) {
            throw Diverged("integrate: state exceeded 1e12 x steady scale at t = " +
                           std::to_string(traj.t.back()) + " s");
        }
    }
    return traj;
}

// Demodulates the tail of the trajectory: drops the first 75%, restricts to a
// whole number of beat periods (ending at the final sample), subtracts the
// window mean, and projects onto e^{+i n xi t} for each requested order.
inline std::map<int, complex<double>> extract_harmonics(
    const Trajectory& traj, double xi, const std::vector<int>& orders) {
    if (!(xi > 0.0))
        throw std::invalid_argument("extract_harmonics: xi must be positive");
    const std::size_t n = traj.a1.size();
    const std::size_t tail_start = 3 * n / 4;
    const double spb = 2.0 * M_PI / xi / traj.dt;  // samples per beat period
    const std::size_t beats =
        static_cast<std::size_t>(static_cast<double>(n - tail_start) / spb);
    if (beats < 500)
        throw WindowTooShort("extract_harmonics: only " + std::to_string(beats) +
                             " beat periods after transient (need 500)");
    const std::size_t win =
        static_cast<std::size_t>(std::llround(static_cast<double>(beats) * spb));
    const std::size_t begin = n - win;

    complex<double> mean(0.0, 0.0);
    for (std::size_t k = begin; k < n; ++k) mean += traj.a1[k];
    mean /= static_cast<double>(win);

    std::map<int, complex<double>> out;
    for (int order : orders) {
        complex<double> acc(0.0, 0.0);
        for (std::size_t k = begin; k < n; ++k)
            acc += (traj.a1[k] - mean) *
                   std::polar(1.0, static_cast<double>(order) * xi * traj.t[k]);
        out[order] = acc / static_cast<double>(win);
    }
    return out;
}

inline OracleReport compare(const SystemParams& p, const DriveFields& d,
                            double xi, double periods = 4000.0,
                            double dt_override = 0.0) {
    const double dt = dt_override > 0.0 ? dt_override : default_dt(p);
    const double t_end = periods * 2.0 * M_PI / p.omega_m;

    OracleReport rep;
    const steady::SteadyState ss = steady::solve(p, d);
    rep.stable = ss.stable;

    const Trajectory traj = integrate(p, d, t_end, dt, xi);
    const auto meas = extract_harmonics(traj, xi, {1, 2, 3});
    rep.transient_discarded = traj.t[3 * traj.t.size() / 4];

    const auto first = resp::first_order(xi, p, d, ss);
    rep.amp_closed[1] = first.first;
    rep.amp_closed[2] = resp::second_order(xi, p, d, ss, first);
    rep.amp_measured = meas;
    for (int order : {1, 2}) {
        const double floor = 1e-30;
        rep.rel_err[order] =
            std::abs(rep.amp_closed[order] - meas.at(order)) /
            std::max(std::abs(rep.amp_closed[order]), floor);
    }
    if (d.eps_l > 0.0 && d.eps_p > 0.0) {
        const double third = std::abs(meas.at(3));
        const double second = std::max(std::abs(meas.at(2)), 1e-30);
        rep.perturbative = third / second < d.eps_p / d.eps_l;
    }
    return rep;
}

}  // namespace omitlab::oracle

namespace omitlab {
using oracle::OracleReport;
using oracle::Trajectory;
}
