#pragma once

// Parameter sweeps and derived observables: probe-detuning spectra, pump-power
// scans, gain-to-loss-ratio scans, group delays via phase differentiation, and
// the canned figure datasets.
//
// Every sweep evaluates its grid points independently (steady state re-solved
// from cold start per point where it varies) and assembles results by grid
// index, so outputs are deterministic regardless of worker scheduling. Points
// where the closed form is singular are recorded as NaN gaps, never dropped.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <limits>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "omitlab/errors.hpp"
#include "omitlab/params.hpp"
#include "omitlab/response.hpp"
#include "omitlab/steady_state.hpp"

namespace omitlab::sweeps {

struct SpectrumSeries {
    std::string swept_name;
    std::vector<double> swept_values;
    // name -> column, insertion-ordered; flag columns ("stable", "converged")
    // hold 0/1, everything else is the observable value or NaN for a gap
    std::vector<std::pair<std::string, std::vector<double>>> observables;
    SystemParams metadata;
    std::size_t gap_count = 0;

    const std::vector<double>* column(const std::string& name) const {
        for (const auto& [n, col] : observables)
            if (n == name) return &col;
        return nullptr;
    }
};

enum class DelayKind { Probe, SecondOrder };

struct DelayResult {
    double tau_g = 0.0;        // probe group delay, s
    double tau_g_prime = 0.0;  // second-order sideband group delay, s
    double step_used = 0.0;    // final finite-difference step, rad/s
    bool converged = false;
};

inline double default_fd_step(const SystemParams& p) { return 1e-6 * p.omega_m; }

namespace detail {

inline unsigned worker_count(std::size_t jobs) {
    unsigned n = std::thread::hardware_concurrency();
    if (n == 0) n = 1;
    if (const char* env = std::getenv("OMITLAB_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v >= 1) n = static_cast<unsigned>(v);
    }
    return static_cast<unsigned>(std::min<std::size_t>(n, std::max<std::size_t>(jobs, 1)));
}

// Runs fn(i) for i in [0, n) across workers; each index owns its output slot.
inline void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
    const unsigned workers = worker_count(n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([=, &fn] {
            for (std::size_t i = w; i < n; i += workers) fn(i);
        });
    }
    for (auto& t : pool) t.join();
}

inline void require_increasing_grid(const std::vector<double>& grid,
                                    const char* who) {
    if (grid.size() < 2)
        throw ConfigError(std::string(who) + ": grid needs at least 2 points");
    for (std::size_t i = 1; i < grid.size(); ++i)
        if (!(grid[i] > grid[i - 1]))
            throw ConfigError(std::string(who) + ": grid must be strictly increasing");
}

// Unwraps in place, restarting at NaN gaps so each finite segment is continuous.
inline void unwrap_segments(std::vector<double>& phases) {
    constexpr double two_pi = 2.0 * M_PI;
    bool in_segment = false;
    double prev = 0.0, offset = 0.0;
    for (double& ph : phases) {
        if (std::isnan(ph)) { in_segment = false; continue; }
        if (!in_segment) {
            in_segment = true;
            offset = 0.0;
        } else {
            double d = ph + offset - prev;
            while (d > M_PI) { offset -= two_pi; d -= two_pi; }
            while (d <= -M_PI) { offset += two_pi; d += two_pi; }
        }
        ph += offset;
        prev = ph;
    }
}

}  // namespace detail

inline std::vector<double> unwrap_phase(const std::vector<double>& raw) {
    std::vector<double> out = raw;
    detail::unwrap_segments(out);
    return out;
}

inline SpectrumSeries spectrum_sweep(const SystemParams& p, const DriveFields& d,
                                     const std::vector<double>& grid) {
    detail::require_increasing_grid(grid, "spectrum_sweep");
    const steady::SteadyState ss = steady::solve(p, d);  // xi-independent

    const std::size_t n = grid.size();
    std::vector<double> tp2(n), eta(n), arg_tp(n), arg_a2(n), stable(n);
    std::vector<char> gap(n, 0);
    detail::parallel_for(n, [&](std::size_t i) {
        const double xi = grid[i] + p.delta_l;
        try {
            const auto r = resp::evaluate(xi, p, d, ss);
            tp2[i] = std::norm(r.t_p);
            eta[i] = r.eta;
            arg_tp[i] = std::arg(r.t_p);
            arg_a2[i] = std::arg(r.a_plus_2);
            stable[i] = r.stable ? 1.0 : 0.0;
            if (std::isnan(tp2[i]) || std::isnan(eta[i])) gap[i] = 1;
        } catch (const SingularPoint&) {
            const double qn = std::numeric_limits<double>::quiet_NaN();
            tp2[i] = eta[i] = arg_tp[i] = arg_a2[i] = qn;
            stable[i] = ss.stable ? 1.0 : 0.0;
            gap[i] = 1;
        }
    });
    detail::unwrap_segments(arg_tp);
    detail::unwrap_segments(arg_a2);

    SpectrumSeries s;
    s.swept_name = "delta_p";
    s.swept_values = grid;
    s.observables = {{"t_p2", std::move(tp2)},
                     {"eta", std::move(eta)},
                     {"arg_tp", std::move(arg_tp)},
                     {"arg_A2", std::move(arg_a2)},
                     {"stable", std::move(stable)}};
    s.metadata = p;
    for (char gflag : gap) s.gap_count += gflag;
    return s;
}

inline DelayResult group_delay(const SystemParams& p, const DriveFields& d,
                               DelayKind which, double step) {
    if (!(step > 0.0))
        throw std::invalid_argument("group_delay: step must be positive");
    const steady::SteadyState ss = steady::solve(p, d);
    const double center = p.omega_m;

    // Principal-value phase increments around the evaluation point; for the
    // small steps used here the true increment is far inside (-pi, pi], except
    // exactly at a transmission zero, which the convergence check then rejects.
    const auto delays_at = [&](double h) -> std::pair<double, double> {
        const double qn = std::numeric_limits<double>::quiet_NaN();
        try {
            const auto hi = resp::evaluate(center + h, p, d, ss);
            const auto lo = resp::evaluate(center - h, p, d, ss);
            const double dtau = std::arg(hi.t_p * std::conj(lo.t_p)) / (2.0 * h);
            const double dtau2 =
                std::arg(hi.a_plus_2 * std::conj(lo.a_plus_2)) / (2.0 * h) / 2.0;
            return {dtau, dtau2};
        } catch (const SingularPoint&) {
            return {qn, qn};
        }
    };

    DelayResult r;
    double h = step;
    auto prev = delays_at(h);
    for (int halving = 1; halving <= 3; ++halving) {
        h *= 0.5;
        const auto cur = delays_at(h);
        const double gate_prev = which == DelayKind::Probe ? prev.first : prev.second;
        const double gate_cur = which == DelayKind::Probe ? cur.first : cur.second;
        const double denom = std::max(std::abs(gate_cur), std::abs(gate_prev));
        const bool ok = std::isfinite(gate_cur) && std::isfinite(gate_prev) &&
                        (denom == 0.0 || std::abs(gate_cur - gate_prev) < 1e-3 * denom);
        r.tau_g = cur.first;
        r.tau_g_prime = cur.second;
        r.step_used = h;
        if (ok) {
            r.converged = true;
            return r;
        }
        prev = cur;
    }
    r.converged = false;
    return r;
}

inline SpectrumSeries power_sweep(const SystemParams& p,
                                  const std::vector<std::string>& observables,
                                  const std::vector<double>& grid) {
    detail::require_increasing_grid(grid, "power_sweep");
    if (!(grid.front() > 0.0))
        throw ConfigError("power_sweep: powers must be positive");
    bool want_delay = false;
    for (const auto& name : observables) {
        if (name == "tau_g" || name == "tau_g_prime") want_delay = true;
        else if (name != "t_p2" && name != "eta")
            throw ConfigError("power_sweep: unknown observable '" + name + "'");
    }

    const std::size_t n = grid.size();
    std::vector<std::pair<std::string, std::vector<double>>> cols;
    for (const auto& name : observables) cols.emplace_back(name, std::vector<double>(n));
    cols.emplace_back("stable", std::vector<double>(n));
    if (want_delay) cols.emplace_back("converged", std::vector<double>(n));

    std::vector<char> gap(n, 0);
    detail::parallel_for(n, [&](std::size_t i) {
        SystemParams pi = p;
        pi.p_l = grid[i];
        const DriveFields di = drive_amplitudes(pi);
        const double qn = std::numeric_limits<double>::quiet_NaN();
        double tp2 = qn, eta = qn, stable = qn;
        try {
            const steady::SteadyState ss = steady::solve(pi, di);
            stable = ss.stable ? 1.0 : 0.0;
            const auto r = resp::evaluate(pi.delta_l, pi, di, ss);  // Delta_p = 0
            tp2 = std::norm(r.t_p);
            eta = r.eta;
        } catch (const SingularPoint&) {
        }
        DelayResult delay;
        delay.tau_g = delay.tau_g_prime = qn;
        if (want_delay) {
            try {
                delay = group_delay(pi, di, DelayKind::Probe, default_fd_step(pi));
            } catch (const SingularPoint&) {
            }
        }

        bool has_gap = std::isnan(stable);
        for (auto& [name, col] : cols) {
            if (name == "t_p2") col[i] = tp2;
            else if (name == "eta") col[i] = eta;
            else if (name == "tau_g") col[i] = delay.tau_g;
            else if (name == "tau_g_prime") col[i] = delay.tau_g_prime;
            else if (name == "stable") col[i] = stable;
            else if (name == "converged") col[i] = delay.converged ? 1.0 : 0.0;
            if (name != "stable" && name != "converged" && std::isnan(col[i]))
                has_gap = true;
        }
        gap[i] = has_gap ? 1 : 0;
    });

    SpectrumSeries s;
    s.swept_name = "p_l";
    s.swept_values = grid;
    s.observables = std::move(cols);
    s.metadata = p;
    for (char gflag : gap) s.gap_count += gflag;
    return s;
}

inline SpectrumSeries gain_ratio_sweep(const SystemParams& p, const DriveFields& d,
                                       const std::vector<double>& grid) {
    if (p.topology != Topology::Double)
        throw std::invalid_argument("gain_ratio_sweep: Double topology only");
    detail::require_increasing_grid(grid, "gain_ratio_sweep");

    const std::size_t n = grid.size();
    std::vector<double> tp2(n), eta(n), stable(n);
    std::vector<char> gap(n, 0);
    detail::parallel_for(n, [&](std::size_t i) {
        SystemParams pi = p;
        pi.kappa = grid[i] * p.gamma;
        const double qn = std::numeric_limits<double>::quiet_NaN();
        try {
            const steady::SteadyState ss = steady::solve(pi, d);
            stable[i] = ss.stable ? 1.0 : 0.0;
            const auto r = resp::evaluate(pi.delta_l, pi, d, ss);  // Delta_p = 0
            tp2[i] = std::norm(r.t_p);
            eta[i] = r.eta;
            if (std::isnan(tp2[i]) || std::isnan(eta[i])) gap[i] = 1;
        } catch (const SingularPoint&) {
            tp2[i] = eta[i] = stable[i] = qn;
            gap[i] = 1;
        }
    });

    SpectrumSeries s;
    s.swept_name = "kappa_ratio";
    s.swept_values = grid;
    s.observables = {{"t_p2", std::move(tp2)},
                     {"eta", std::move(eta)},
                     {"stable", std::move(stable)}};
    s.metadata = p;
    for (char gflag : gap) s.gap_count += gflag;
    return s;
}

inline std::vector<double> linspace(double lo, double hi, std::size_t n) {
    if (n < 2) return n ? std::vector<double>{lo} : std::vector<double>{};
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i)
        v[i] = lo + static_cast<double>(i) * (hi - lo) / static_cast<double>(n - 1);
    return v;
}

inline std::vector<double> logspace(double lo, double hi, std::size_t n) {
    if (n < 2) return n ? std::vector<double>{lo} : std::vector<double>{};
    std::vector<double> v(n);
    const double llo = std::log(lo), lhi = std::log(hi);
    for (std::size_t i = 0; i < n; ++i)
        v[i] = std::exp(llo + static_cast<double>(i) * (lhi - llo) /
                                  static_cast<double>(n - 1));
    return v;
}

struct FigureBundle {
    std::string name;
    // label -> series, one per plotted curve set
    std::vector<std::pair<std::string, SpectrumSeries>> series;
};

inline const std::vector<std::string>& figure_names() {
    static const std::vector<std::string> names = {
        "Fig2a", "Fig2b", "Fig2c", "Fig2d", "Fig3a",
        "Fig3b", "Fig4a", "Fig4b", "Fig4c", "Fig4d"};
    return names;
}

// Canned dataset behind one published panel. spectrum_points/power_points
// override the default grid densities (401 spectrum, 200 power) when nonzero.
inline FigureBundle figure_preset(const std::string& name,
                                  std::size_t points_override = 0) {
    FigureBundle b;
    b.name = name;

    const auto spectrum_grid = [&](const SystemParams& p) {
        const std::size_t n = points_override ? points_override : 401;
        return linspace(-0.5 * p.omega_m, 0.5 * p.omega_m, n);
    };
    const auto power_grid = [&] {
        const std::size_t n = points_override ? points_override : 200;
        return logspace(1e-6, 2e-3, n);
    };
    const auto single_with = [](double ratio) {
        SystemParams p = paper_defaults(Topology::Single);
        p.kappa = ratio * p.gamma;
        return p;
    };
    const auto double_with = [](double ratio) {
        SystemParams p = paper_defaults(Topology::Double);
        p.kappa = ratio * p.gamma;
        return p;
    };
    const auto label = [](double ratio) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "kappa_%g", ratio);
        return std::string(buf);
    };
    const std::vector<std::string> delay_obs = {"tau_g", "tau_g_prime"};

    if (name == "Fig2a" || name == "Fig2b") {
        for (double ratio : {-1.0, 1.0}) {
            const SystemParams p = single_with(ratio);
            b.series.emplace_back(label(ratio),
                                  spectrum_sweep(p, drive_amplitudes(p), spectrum_grid(p)));
        }
    } else if (name == "Fig2c" || name == "Fig2d") {
        const SystemParams p = single_with(name == "Fig2c" ? -1.0 : 1.0);
        b.series.emplace_back(label(name == "Fig2c" ? -1.0 : 1.0),
                              power_sweep(p, delay_obs, power_grid()));
    } else if (name == "Fig3a") {
        for (double ratio : {0.4, 1.0, 1.6}) {
            const SystemParams p = double_with(ratio);
            b.series.emplace_back(label(ratio),
                                  spectrum_sweep(p, drive_amplitudes(p), spectrum_grid(p)));
        }
    } else if (name == "Fig3b") {
        const SystemParams p = paper_defaults(Topology::Double);
        const std::size_t n = points_override ? points_override : 401;
        b.series.emplace_back("ratio_scan",
                              gain_ratio_sweep(p, drive_amplitudes(p), linspace(0.0, 1.6, n)));
    } else if (name == "Fig4a" || name == "Fig4b" || name == "Fig4c" || name == "Fig4d") {
        const double ratio = name == "Fig4a"   ? -1.0
                             : name == "Fig4b" ? 0.4
                             : name == "Fig4c" ? 1.0
                                               : 1.6;
        b.series.emplace_back(label(ratio),
                              power_sweep(double_with(ratio), delay_obs, power_grid()));
    } else {
        throw ConfigError("unknown figure '" + name + "'");
    }
    return b;
}

}  // namespace omitlab::sweeps

namespace omitlab {
using sweeps::DelayKind;
using sweeps::DelayResult;
using sweeps::FigureBundle;
using sweeps::SpectrumSeries;
}
