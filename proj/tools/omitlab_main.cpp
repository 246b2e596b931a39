// omitlab command-line tool.
//
// Subcommands map one-to-one onto the library entry points:
//
//   steady       solve the pump-only operating point, report roots + stability
//   spectrum     probe-detuning sweep of |t_p|^2, eta, unwrapped phases
//   delay        group delay of the probe (or second-order) response
//   power-sweep  observables vs pump power
//   gain-sweep   observables vs kappa/gamma (double topology)
//   figure       canned presets reproducing the headline plots
//   oracle       closed form vs time-domain integration at one detuning
//
// Every run writes its outputs plus a manifest.json into --out. Exit codes:
//   0  success
//   2  configuration error (bad flag combination, bad config file, bad name)
//   3  some grid points were singular; outputs were still written
//   4  oracle mismatch above threshold
//   5  integration diverged, or the operating point is unstable and
//      --allow-unstable was not given

#include "CLI11.hpp"

#include <omitlab/omitlab.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using omitlab::io::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitSingular = 3;
constexpr int kExitMismatch = 4;
constexpr int kExitDiverged = 5;

struct CommonOpts {
    std::string config;
    std::string preset;
    std::string out = "omitlab_out";
    bool svg = false;
    std::size_t points = 0;
    std::optional<double> kappa_ratio;
    std::optional<double> probe_ratio;
    std::optional<double> pump_power;
    bool allow_unstable = false;
};

void add_common(CLI::App* sub, CommonOpts& o) {
    sub->add_option("--config", o.config, "JSON parameter file layered over the preset");
    sub->add_option("--preset", o.preset, "parameter preset: paper-single or paper-double");
    sub->add_option("--out", o.out, "output directory (created if missing)");
    sub->add_flag("--svg", o.svg, "also render an SVG plot of each CSV");
    sub->add_option("--points", o.points, "number of grid points for sweeps");
    sub->add_option("--kappa-ratio", o.kappa_ratio,
                    "set kappa as a multiple of gamma (negative = passive)");
    sub->add_option("--probe-ratio", o.probe_ratio, "probe-to-pump amplitude ratio");
    sub->add_option("--pl", o.pump_power, "pump power in W");
    sub->add_flag("--allow-unstable", o.allow_unstable,
                  "proceed even when the operating point is unstable");
}

omitlab::SystemParams resolve_params(const CommonOpts& o,
                                     omitlab::Topology fallback) {
    using omitlab::params::Topology;
    Topology topo = fallback;
    if (!o.preset.empty()) {
        if (o.preset == "paper-single") {
            topo = Topology::Single;
        } else if (o.preset == "paper-double") {
            topo = Topology::Double;
        } else {
            throw omitlab::ConfigError("unknown preset '" + o.preset +
                                       "' (expected paper-single or paper-double)");
        }
    }
    omitlab::SystemParams p = omitlab::params::paper_defaults(topo);
    if (!o.config.empty()) p = omitlab::io::load_config(o.config, p);
    if (o.kappa_ratio) p.kappa = *o.kappa_ratio * p.gamma;
    if (o.probe_ratio) p.probe_ratio = *o.probe_ratio;
    if (o.pump_power) p.p_l = *o.pump_power;
    auto problems = omitlab::params::validate(p);
    if (!problems.empty()) {
        std::string msg = "invalid parameters:";
        for (const auto& s : problems) msg += "\n  " + s;
        throw omitlab::ConfigError(msg);
    }
    return p;
}

std::string joined_command(int argc, char** argv) {
    std::string cmd;
    for (int i = 0; i < argc; ++i) {
        if (i) cmd += ' ';
        cmd += argv[i];
    }
    return cmd;
}

fs::path prepare_out(const CommonOpts& o) {
    fs::path dir(o.out);
    fs::create_directories(dir);
    return dir;
}

void write_manifest(const fs::path& dir, const std::string& command,
                    const CommonOpts& o) {
    omitlab::io::write_text((dir / "manifest.json").string(),
                            omitlab::io::manifest_json(command, o.config, o.out).dump(2) + "\n");
}

void write_series(const fs::path& dir, const std::string& base,
                  const omitlab::sweeps::SpectrumSeries& series, bool svg) {
    namespace io = omitlab::io;
    io::write_text((dir / (base + ".csv")).string(), io::to_csv(series));
    io::write_text((dir / (base + "_meta.json")).string(),
                   io::meta_json(series).dump(2) + "\n");
    if (svg) io::write_text((dir / (base + ".svg")).string(), io::render_svg(series, base));
}

int finish_sweep(const omitlab::sweeps::SpectrumSeries& series) {
    if (series.gap_count > 0) {
        std::cerr << "warning: " << series.gap_count
                  << " grid point(s) were singular and recorded as gaps\n";
        return kExitSingular;
    }
    return kExitOk;
}

void warn_if_unstable(const omitlab::steady::SteadyState& ss, const CommonOpts& o) {
    if (ss.stable) return;
    std::cerr << "warning: operating point is dynamically unstable"
              << (o.allow_unstable ? "" : " (pass --allow-unstable to oracle runs)")
              << "\n";
}

int cmd_steady(const CommonOpts& o, const std::string& command) {
    auto p = resolve_params(o, omitlab::params::Topology::Single);
    auto d = omitlab::params::drive_amplitudes(p);
    auto ss = omitlab::steady::solve(p, d);
    warn_if_unstable(ss, o);
    fs::path dir = prepare_out(o);
    json j = omitlab::io::steady_to_json(ss);
    j["params"] = omitlab::io::params_to_json(p);
    omitlab::io::write_text((dir / "steady.json").string(), j.dump(2) + "\n");
    write_manifest(dir, command, o);
    std::cout << j.dump(2) << "\n";
    return kExitOk;
}

int cmd_spectrum(const CommonOpts& o, double dp_min, double dp_max,
                 const std::string& command) {
    auto p = resolve_params(o, omitlab::params::Topology::Single);
    if (p.probe_ratio <= 0.0)
        throw omitlab::ConfigError("spectrum needs a probe: set --probe-ratio > 0");
    auto d = omitlab::params::drive_amplitudes(p);
    std::size_t n = o.points ? o.points : 401;
    auto grid = omitlab::sweeps::linspace(dp_min * p.omega_m, dp_max * p.omega_m, n);
    auto series = omitlab::sweeps::spectrum_sweep(p, d, grid);
    fs::path dir = prepare_out(o);
    write_series(dir, "spectrum", series, o.svg);
    write_manifest(dir, command, o);
    std::cout << "wrote " << (dir / "spectrum.csv").string() << " (" << n << " points)\n";
    return finish_sweep(series);
}

int cmd_delay(const CommonOpts& o, const std::string& which,
              const std::string& command) {
    auto p = resolve_params(o, omitlab::params::Topology::Single);
    if (p.probe_ratio <= 0.0)
        throw omitlab::ConfigError("delay needs a probe: set --probe-ratio > 0");
    auto d = omitlab::params::drive_amplitudes(p);
    auto kind = which == "second" ? omitlab::sweeps::DelayKind::SecondOrder
                                  : omitlab::sweeps::DelayKind::Probe;
    auto res = omitlab::sweeps::group_delay(p, d, kind, omitlab::sweeps::default_fd_step(p));
    if (!res.converged)
        std::cerr << "warning: group delay did not converge to 0.1%\n";
    fs::path dir = prepare_out(o);
    json j = omitlab::io::delay_to_json(res);
    j["which"] = which;
    j["params"] = omitlab::io::params_to_json(p);
    omitlab::io::write_text((dir / "delay.json").string(), j.dump(2) + "\n");
    write_manifest(dir, command, o);
    std::cout << j.dump(2) << "\n";
    return kExitOk;
}

int cmd_power_sweep(const CommonOpts& o, double p_min, double p_max,
                    const std::vector<std::string>& observables,
                    const std::string& command) {
    auto p = resolve_params(o, omitlab::params::Topology::Single);
    if (p.probe_ratio <= 0.0)
        throw omitlab::ConfigError("power-sweep needs a probe: set --probe-ratio > 0");
    std::size_t n = o.points ? o.points : 200;
    auto powers = omitlab::sweeps::logspace(p_min, p_max, n);
    auto series = omitlab::sweeps::power_sweep(p, observables, powers);
    fs::path dir = prepare_out(o);
    write_series(dir, "power_sweep", series, o.svg);
    write_manifest(dir, command, o);
    std::cout << "wrote " << (dir / "power_sweep.csv").string() << " (" << n << " points)\n";
    return finish_sweep(series);
}

int cmd_gain_sweep(const CommonOpts& o, double r_min, double r_max,
                   const std::string& command) {
    auto p = resolve_params(o, omitlab::params::Topology::Double);
    if (p.topology != omitlab::params::Topology::Double)
        throw omitlab::ConfigError("gain-sweep applies to the double topology only");
    if (p.probe_ratio <= 0.0)
        throw omitlab::ConfigError("gain-sweep needs a probe: set --probe-ratio > 0");
    auto d = omitlab::params::drive_amplitudes(p);
    std::size_t n = o.points ? o.points : 81;
    auto ratios = omitlab::sweeps::linspace(r_min, r_max, n);
    auto series = omitlab::sweeps::gain_ratio_sweep(p, d, ratios);
    fs::path dir = prepare_out(o);
    write_series(dir, "gain_sweep", series, o.svg);
    write_manifest(dir, command, o);
    std::cout << "wrote " << (dir / "gain_sweep.csv").string() << " (" << n << " points)\n";
    return finish_sweep(series);
}

int cmd_figure(const CommonOpts& o, const std::string& name,
               const std::string& command) {
    auto bundle = omitlab::sweeps::figure_preset(name, o.points);
    fs::path dir = prepare_out(o);
    std::size_t gaps = 0;
    for (const auto& [label, series] : bundle.series) {
        std::string base = bundle.name + "_" + label;
        write_series(dir, base, series, o.svg);
        gaps += series.gap_count;
        std::cout << "wrote " << (dir / (base + ".csv")).string() << "\n";
    }
    write_manifest(dir, command, o);
    if (gaps > 0) {
        std::cerr << "warning: " << gaps << " grid point(s) across the bundle were singular\n";
        return kExitSingular;
    }
    return kExitOk;
}

int cmd_oracle(const CommonOpts& o, double xi_ratio, std::size_t periods,
               const std::string& command) {
    auto p = resolve_params(o, omitlab::params::Topology::Single);
    if (p.probe_ratio <= 0.0)
        throw omitlab::ConfigError("oracle needs a probe: set --probe-ratio > 0");
    auto d = omitlab::params::drive_amplitudes(p);
    auto ss = omitlab::steady::solve(p, d);
    if (!ss.stable && !o.allow_unstable) {
        std::cerr << "refusing to integrate an unstable operating point "
                     "(largest Re eigenvalue "
                  << ss.stability_eigs.front().real()
                  << "); pass --allow-unstable to override\n";
        return kExitDiverged;
    }
    double xi = xi_ratio * p.omega_m;
    auto rep = omitlab::oracle::compare(p, d, xi, periods);
    fs::path dir = prepare_out(o);
    json j = omitlab::io::report_to_json(rep);
    j["xi"] = xi;
    j["params"] = omitlab::io::params_to_json(p);
    omitlab::io::write_text((dir / "oracle.json").string(), j.dump(2) + "\n");
    write_manifest(dir, command, o);
    std::cout << j.dump(2) << "\n";
    bool ok = rep.rel_err.at(1) <= 1e-3 && rep.rel_err.at(2) <= 1e-2;
    if (!ok) {
        std::cerr << "oracle mismatch: rel_err(1) = " << rep.rel_err.at(1)
                  << ", rel_err(2) = " << rep.rel_err.at(2)
                  << " (thresholds 1e-3, 1e-2)\n";
        return kExitMismatch;
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"omitlab: nonlinear probe response of active optomechanical cavities"};
    app.require_subcommand(1);
    app.set_version_flag("--version", omitlab::kToolVersion);

    CommonOpts opts;
    double dp_min = -0.5, dp_max = 0.5;
    double p_min = 1e-6, p_max = 2e-3;
    double r_min = 0.0, r_max = 1.6;
    double xi_ratio = 1.0;
    std::size_t periods = 4000;
    std::string which = "probe";
    std::string figure_name;
    std::vector<std::string> observables = {"t_p2", "eta", "tau_g", "tau_g_prime"};

    auto* steady = app.add_subcommand("steady", "solve the pump-only operating point");
    add_common(steady, opts);

    auto* spectrum = app.add_subcommand("spectrum", "sweep the probe detuning");
    add_common(spectrum, opts);
    spectrum->add_option("--dp-min", dp_min, "lower probe detuning in units of omega_m");
    spectrum->add_option("--dp-max", dp_max, "upper probe detuning in units of omega_m");

    auto* delay = app.add_subcommand("delay", "group delay at the resonant probe");
    add_common(delay, opts);
    delay->add_option("--which", which, "probe or second")
        ->check(CLI::IsMember({"probe", "second"}));

    auto* power = app.add_subcommand("power-sweep", "observables vs pump power");
    add_common(power, opts);
    power->add_option("--pmin", p_min, "lowest pump power in W");
    power->add_option("--pmax", p_max, "highest pump power in W");
    power->add_option("--observables", observables,
                      "subset of t_p2, eta, tau_g, tau_g_prime")
        ->delimiter(',');

    auto* gain = app.add_subcommand("gain-sweep", "observables vs kappa/gamma");
    add_common(gain, opts);
    gain->add_option("--rmin", r_min, "lowest kappa/gamma ratio");
    gain->add_option("--rmax", r_max, "highest kappa/gamma ratio");

    auto* figure = app.add_subcommand("figure", "reproduce a canned figure preset");
    add_common(figure, opts);
    figure->add_option("name", figure_name, "figure name, e.g. fig2a")->required();

    auto* oracle = app.add_subcommand("oracle", "closed form vs time-domain integration");
    add_common(oracle, opts);
    oracle->add_option("--xi-ratio", xi_ratio, "beat frequency in units of omega_m");
    oracle->add_option("--periods", periods, "mechanical periods to integrate");

    CLI11_PARSE(app, argc, argv);

    const std::string command = joined_command(argc, argv);
    try {
        if (steady->parsed()) return cmd_steady(opts, command);
        if (spectrum->parsed()) return cmd_spectrum(opts, dp_min, dp_max, command);
        if (delay->parsed()) return cmd_delay(opts, which, command);
        if (power->parsed()) return cmd_power_sweep(opts, p_min, p_max, observables, command);
        if (gain->parsed()) return cmd_gain_sweep(opts, r_min, r_max, command);
        if (figure->parsed()) return cmd_figure(opts, figure_name, command);
        if (oracle->parsed()) return cmd_oracle(opts, xi_ratio, periods, command);
    } catch (const omitlab::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const omitlab::Diverged& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitDiverged;
    } catch (const omitlab::SingularPoint& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitSingular;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return kExitOk;
}
