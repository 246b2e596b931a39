#pragma once

// Serialization: CSV sweep tables, JSON configs/results/sidecars, and a
// minimal SVG line chart for quick inspection.
//
// All numeric output is locale-independent. CSV cells use 17 significant
// digits ('.' decimal separator, '\n' line endings) so identical runs produce
// byte-identical files; non-finite values become empty cells.

#include <charconv>
#include <cmath>
#include <complex>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "omitlab/errors.hpp"
#include "omitlab/oracle.hpp"
#include "omitlab/params.hpp"
#include "omitlab/steady_state.hpp"
#include "omitlab/sweeps.hpp"
#include "omitlab/version.hpp"

namespace omitlab::io {

using json = nlohmann::ordered_json;

inline std::string fmt17(double v) {
    char buf[64];
    const auto res =
        std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

inline std::string fmt_short(double v, int digits = 4) {
    char buf[64];
    const auto res =
        std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, digits);
    return std::string(buf, res.ptr);
}

inline void write_text(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ConfigError("cannot open for writing: " + path);
    f << content;
    if (!f) throw ConfigError("write failed: " + path);
}

inline std::string to_csv(const sweeps::SpectrumSeries& s) {
    std::string out = "swept";
    for (const auto& [name, col] : s.observables) {
        out += ',';
        out += name;
    }
    out += '\n';
    for (std::size_t i = 0; i < s.swept_values.size(); ++i) {
        out += fmt17(s.swept_values[i]);
        for (const auto& [name, col] : s.observables) {
            out += ',';
            if (std::isfinite(col[i])) out += fmt17(col[i]);
        }
        out += '\n';
    }
    return out;
}

inline json complex_json(const std::complex<double>& z) {
    return json::array({z.real(), z.imag()});
}

inline json params_to_json(const SystemParams& p) {
    json j;
    j["topology"] = to_string(p.topology);
    j["m"] = p.m;
    j["omega_m"] = p.omega_m;
    j["gamma_m"] = p.gamma_m;
    j["omega_c"] = p.omega_c;
    j["gamma"] = p.gamma;
    j["kappa"] = p.kappa;
    j["coupling_j"] = p.coupling_j;
    j["g"] = p.g();
    j["radius"] = p.radius;
    j["delta_l"] = p.delta_l;
    j["p_l"] = p.p_l;
    j["probe_ratio"] = p.probe_ratio;
    j["hbar"] = p.hbar;
    return j;
}

// Applies a JSON config on top of `base`. Field names mirror SystemParams in
// SI units; unknown keys are rejected so typos cannot pass silently. The
// derived field "g" may appear but must agree with omega_c / radius.
inline SystemParams params_from_json(const json& j, SystemParams base) {
    if (!j.is_object()) throw ConfigError("config: top level must be a JSON object");
    double g_claimed = 0.0;
    bool has_g = false;
    for (const auto& [key, value] : j.items()) {
        try {
            if (key == "topology") {
                const std::string t = value.get<std::string>();
                if (t == "single") base.topology = Topology::Single;
                else if (t == "double") base.topology = Topology::Double;
                else throw ConfigError("config: topology must be \"single\" or \"double\"");
            } else if (key == "m") base.m = value.get<double>();
            else if (key == "omega_m") base.omega_m = value.get<double>();
            else if (key == "gamma_m") base.gamma_m = value.get<double>();
            else if (key == "omega_c") base.omega_c = value.get<double>();
            else if (key == "gamma") base.gamma = value.get<double>();
            else if (key == "kappa") base.kappa = value.get<double>();
            else if (key == "coupling_j") base.coupling_j = value.get<double>();
            else if (key == "radius") base.radius = value.get<double>();
            else if (key == "delta_l") base.delta_l = value.get<double>();
            else if (key == "p_l") base.p_l = value.get<double>();
            else if (key == "probe_ratio") base.probe_ratio = value.get<double>();
            else if (key == "hbar") base.hbar = value.get<double>();
            else if (key == "g") { g_claimed = value.get<double>(); has_g = true; }
            else throw ConfigError("config: unknown key '" + key + "'");
        } catch (const nlohmann::json::exception&) {
            throw ConfigError("config: field '" + key + "' has the wrong type");
        }
    }
    if (has_g && std::abs(g_claimed - base.g()) > 1e-9 * std::abs(base.g()))
        throw ConfigError("config: g must equal omega_c / radius (it is derived)");
    return base;
}

inline SystemParams load_config(const std::string& path, SystemParams base) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw ConfigError("config: cannot read " + path);
    json j;
    try {
        f >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("config: " + path + " is not valid JSON: " + e.what());
    }
    return params_from_json(j, base);
}

inline json steady_to_json(const steady::SteadyState& ss) {
    json j;
    j["x_s"] = ss.x_s;
    j["a1_s"] = complex_json(ss.a1_s);
    j["a2_s"] = complex_json(ss.a2_s);
    j["all_real_roots"] = ss.all_real_roots;
    j["selected_index"] = ss.selected_index;
    json eigs = json::array();
    for (const auto& ev : ss.stability_eigs) eigs.push_back(complex_json(ev));
    j["stability_eigs"] = eigs;
    j["stable"] = ss.stable;
    return j;
}

inline json delay_to_json(const sweeps::DelayResult& r) {
    json j;
    j["tau_g"] = r.tau_g;
    j["tau_g_prime"] = r.tau_g_prime;
    j["step_used"] = r.step_used;
    j["converged"] = r.converged;
    return j;
}

inline json report_to_json(const oracle::OracleReport& r) {
    json j;
    json closed, measured, err;
    for (const auto& [order, z] : r.amp_closed)
        closed[std::to_string(order)] = complex_json(z);
    for (const auto& [order, z] : r.amp_measured)
        measured[std::to_string(order)] = complex_json(z);
    for (const auto& [order, e] : r.rel_err) err[std::to_string(order)] = e;
    j["amp_closed"] = closed;
    j["amp_measured"] = measured;
    j["rel_err"] = err;
    j["stable"] = r.stable;
    j["transient_discarded"] = r.transient_discarded;
    j["perturbative"] = r.perturbative;
    return j;
}

inline json meta_json(const sweeps::SpectrumSeries& s) {
    json j;
    j["tool_version"] = kToolVersion;
    j["swept_name"] = s.swept_name;
    j["points"] = s.swept_values.size();
    j["min"] = s.swept_values.empty() ? 0.0 : s.swept_values.front();
    j["max"] = s.swept_values.empty() ? 0.0 : s.swept_values.back();
    j["gap_count"] = s.gap_count;
    j["params"] = params_to_json(s.metadata);
    return j;
}

inline json manifest_json(const std::string& command,
                          const std::string& config_path,
                          const std::string& output_dir) {
    json j;
    j["command"] = command;
    j["config_path"] = config_path;
    j["output_dir"] = output_dir;
    j["seedless_deterministic"] = true;
    j["tool_version"] = kToolVersion;
    return j;
}

// Minimal static line chart: one polyline per non-flag column against the
// swept axis (log-x when the sweep spans decades), NaN gaps break the line.
inline std::string render_svg(const sweeps::SpectrumSeries& s,
                              const std::string& title) {
    constexpr double W = 800, H = 500, ML = 70, MR = 160, MT = 40, MB = 50;
    static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                    "#ff7f0e", "#8c564b"};

    std::vector<const std::vector<double>*> cols;
    std::vector<std::string> names;
    for (const auto& [name, col] : s.observables) {
        if (name == "stable" || name == "converged") continue;
        cols.push_back(&col);
        names.push_back(name);
    }

    const auto& xs = s.swept_values;
    const bool logx = !xs.empty() && xs.front() > 0.0 && xs.back() / xs.front() > 50.0;
    const auto xmap = [&](double x) { return logx ? std::log10(x) : x; };
    double x0 = xmap(xs.front()), x1 = xmap(xs.back());
    if (x1 == x0) x1 = x0 + 1.0;
    double y0 = 0.0, y1 = 1.0;
    bool seen = false;
    for (const auto* col : cols)
        for (double v : *col)
            if (std::isfinite(v)) {
                if (!seen) { y0 = y1 = v; seen = true; }
                y0 = std::min(y0, v);
                y1 = std::max(y1, v);
            }
    if (y1 == y0) { y0 -= 1.0; y1 += 1.0; }
    const double pad = 0.05 * (y1 - y0);
    y0 -= pad;
    y1 += pad;

    const auto px = [&](double x) {
        return ML + (xmap(x) - x0) / (x1 - x0) * (W - ML - MR);
    };
    const auto py = [&](double y) {
        return H - MB - (y - y0) / (y1 - y0) * (H - MT - MB);
    };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W
        << "\" height=\"" << H << "\" viewBox=\"0 0 " << W << " " << H << "\">\n"
        << "<rect width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n"
        << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" "
           "font-family=\"sans-serif\" font-size=\"16\">" << title << "</text>\n"
        << "<rect x=\"" << ML << "\" y=\"" << MT << "\" width=\"" << W - ML - MR
        << "\" height=\"" << H - MT - MB
        << "\" fill=\"none\" stroke=\"#333\"/>\n";

    const auto axis_label = [&](double xpix, double ypix, const std::string& txt,
                                const char* anchor) {
        svg << "<text x=\"" << fmt_short(xpix) << "\" y=\"" << fmt_short(ypix)
            << "\" text-anchor=\"" << anchor
            << "\" font-family=\"sans-serif\" font-size=\"12\">" << txt
            << "</text>\n";
    };
    axis_label(ML, H - MB + 18, fmt_short(xs.front()), "middle");
    axis_label(W - MR, H - MB + 18, fmt_short(xs.back()), "middle");
    axis_label(ML - 6, H - MB, fmt_short(y0 + pad), "end");
    axis_label(ML - 6, MT + 12, fmt_short(y1 - pad), "end");
    axis_label(W - MR + (MR - 20) / 2 + 10, H - MB + 34, s.swept_name, "middle");

    for (std::size_t c = 0; c < cols.size(); ++c) {
        const char* color = palette[c % 6];
        std::string pts;
        const auto flush = [&] {
            if (!pts.empty())
                svg << "<polyline fill=\"none\" stroke=\"" << color
                    << "\" stroke-width=\"1.5\" points=\"" << pts << "\"/>\n";
            pts.clear();
        };
        for (std::size_t i = 0; i < xs.size(); ++i) {
            const double v = (*cols[c])[i];
            if (!std::isfinite(v)) { flush(); continue; }
            pts += fmt_short(px(xs[i]), 6);
            pts += ',';
            pts += fmt_short(py(v), 6);
            pts += ' ';
        }
        flush();
        const double ly = MT + 18 + 18 * static_cast<double>(c);
        svg << "<line x1=\"" << W - MR + 12 << "\" y1=\"" << ly - 4 << "\" x2=\""
            << W - MR + 36 << "\" y2=\"" << ly - 4 << "\" stroke=\"" << color
            << "\" stroke-width=\"2\"/>\n";
        axis_label(W - MR + 42, ly, names[c], "start");
    }
    svg << "</svg>\n";
    return svg.str();
}

}  // namespace omitlab::io
