#include <catch2/catch_amalgamated.hpp>

#include <omitlab/omitlab.hpp>

#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

using namespace omitlab;
using cplx = std::complex<double>;

namespace {

// Deterministic xorshift generator so every run exercises the same cases.
struct Rng {
    std::uint64_t s;
    explicit Rng(std::uint64_t seed) : s(seed) {}
    double unit() {
        s ^= s << 13;
        s ^= s >> 7;
        s ^= s << 17;
        return static_cast<double>(s >> 11) * 0x1.0p-53;
    }
    double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }
    double log_uniform(double lo, double hi) {
        return lo * std::pow(hi / lo, unit());
    }
};

SystemParams random_params(Rng& rng, Topology topo) {
    SystemParams p = params::paper_defaults(topo);
    p.m = rng.log_uniform(1e-12, 1e-10);
    p.omega_m = rng.log_uniform(5e7, 5e8);
    p.gamma_m = rng.log_uniform(1e4, 1e6);
    p.gamma = rng.log_uniform(1e6, 2e7);
    p.kappa = rng.uniform(-2.0, 2.0) * p.gamma;
    p.coupling_j = topo == Topology::Double ? rng.uniform(0.1, 2.0) * p.gamma : 0.0;
    p.delta_l = rng.uniform(0.5, 1.5) * p.omega_m;
    p.p_l = rng.log_uniform(1e-6, 1e-3);
    return p;
}

double cubic_residual(const SystemParams& p, const DriveFields& d, double u) {
    double A, B;
    if (p.topology == Topology::Single) {
        A = p.kappa;
        B = p.delta_l;
    } else {
        const cplx w = p.coupling_j * p.coupling_j /
                       (cplx(0.0, p.delta_l) - p.kappa);
        A = p.gamma + w.real();
        B = p.delta_l + w.imag();
    }
    const double rhs =
        p.g() * p.hbar * p.g() * d.eps_l * d.eps_l / (p.m * p.omega_m * p.omega_m);
    const double lhs = u * u * u - 2.0 * B * u * u + (A * A + B * B) * u;
    const double scale = std::abs(u * u * u) + 2.0 * std::abs(B) * u * u +
                         (A * A + B * B) * std::abs(u) + std::abs(rhs);
    return std::abs(lhs - rhs) / scale;
}

}  // namespace

TEST_CASE("every solved operating point satisfies its own cubic") {
    Rng rng(0x9e3779b97f4a7c15ull);
    for (int i = 0; i < 60; ++i) {
        const auto topo = (i % 2 == 0) ? Topology::Single : Topology::Double;
        const SystemParams p = random_params(rng, topo);
        const DriveFields d = params::drive_amplitudes(p);
        const auto ss = steady::solve(p, d);
        CHECK(cubic_residual(p, d, p.g() * ss.x_s) < 1e-10);
        const double x_back = p.hbar * p.g() * std::norm(ss.a1_s) /
                              (p.m * p.omega_m * p.omega_m);
        CHECK(std::abs(x_back - ss.x_s) <= 1e-10 * ss.x_s);
    }
}

TEST_CASE("mirror identity holds for random parameters and detunings") {
    Rng rng(0xc0ffee1234567891ull);
    for (int i = 0; i < 60; ++i) {
        const auto topo = (i % 2 == 0) ? Topology::Single : Topology::Double;
        const SystemParams p = random_params(rng, topo);
        const DriveFields d = params::drive_amplitudes(p);
        const auto ss = steady::solve(p, d);
        const double xi = rng.uniform(0.05, 2.5) * p.omega_m;
        const auto Lp = resp::lambda_set(+xi, p, ss);
        const auto Lm = resp::lambda_set(-xi, p, ss);
        CHECK(std::abs(Lp.lam2 - std::conj(Lm.lam1)) <= 1e-12 * std::abs(Lp.lam2));
    }
}

TEST_CASE("response amplitudes are homogeneous in the probe field") {
    Rng rng(0xfeedface0badf00dull);
    for (int i = 0; i < 40; ++i) {
        const auto topo = (i % 2 == 0) ? Topology::Single : Topology::Double;
        const SystemParams p = random_params(rng, topo);
        DriveFields d = params::drive_amplitudes(p);
        const auto ss = steady::solve(p, d);
        const double xi = rng.uniform(0.2, 1.8) * p.omega_m;
        const double c = rng.uniform(0.3, 3.0);

        const auto base = resp::first_order(xi, p, d, ss);
        const cplx base2 = resp::second_order(xi, p, d, ss, base);
        DriveFields scaled = d;
        scaled.eps_p *= c;
        const auto got = resp::first_order(xi, p, scaled, ss);
        const cplx got2 = resp::second_order(xi, p, scaled, ss, got);

        CHECK(std::abs(got.first - c * base.first) <= 1e-12 * std::abs(got.first));
        CHECK(std::abs(got2 - c * c * base2) <= 1e-12 * std::abs(got2));
    }
}

TEST_CASE("displacement grows monotonically with pump power on the low branch") {
    Rng rng(0x1234abcd5678ef90ull);
    for (int i = 0; i < 20; ++i) {
        const auto topo = (i % 2 == 0) ? Topology::Single : Topology::Double;
        SystemParams p = random_params(rng, topo);
        double prev = -1.0;
        for (double pl : sweeps::logspace(1e-6, 1e-4, 8)) {
            p.p_l = pl;
            const auto ss = steady::solve(p, params::drive_amplitudes(p));
            CHECK(ss.x_s >= prev);
            prev = ss.x_s;
        }
    }
}

TEST_CASE("observables stay physical across random spectra") {
    Rng rng(0xdeadbeefcafe4242ull);
    for (int i = 0; i < 12; ++i) {
        const auto topo = (i % 2 == 0) ? Topology::Single : Topology::Double;
        const SystemParams p = random_params(rng, topo);
        const DriveFields d = params::drive_amplitudes(p);
        const auto grid = sweeps::linspace(-0.4 * p.omega_m, 0.4 * p.omega_m, 25);
        const auto s = sweeps::spectrum_sweep(p, d, grid);
        const auto& tp2 = *s.column("t_p2");
        const auto& eta = *s.column("eta");
        for (std::size_t k = 0; k < tp2.size(); ++k) {
            if (std::isnan(tp2[k])) continue;  // recorded gap
            CHECK(tp2[k] >= 0.0);
            CHECK(eta[k] >= 0.0);
            CHECK(std::isfinite(eta[k]));
        }
    }
}

TEST_CASE("evaluation is bitwise deterministic") {
    Rng rng(0x5ca1ab1e00c0ffeeull);
    const SystemParams p = random_params(rng, Topology::Double);
    const DriveFields d = params::drive_amplitudes(p);
    const auto a = steady::solve(p, d);
    const auto b = steady::solve(p, d);
    CHECK(a.x_s == b.x_s);
    CHECK(a.a1_s == b.a1_s);
    const auto ra = resp::evaluate(0.9 * p.omega_m, p, d, a);
    const auto rb = resp::evaluate(0.9 * p.omega_m, p, d, b);
    CHECK(ra.t_p == rb.t_p);
    CHECK(ra.eta == rb.eta);
}
