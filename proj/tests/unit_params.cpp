#include <catch2/catch_amalgamated.hpp>

#include <omitlab/omitlab.hpp>

#include <cmath>

using namespace omitlab;
using Catch::Matchers::WithinRel;

TEST_CASE("presets pin the published operating point") {
    const SystemParams s = params::paper_defaults(Topology::Single);
    CHECK_THAT(s.m, WithinRel(50e-12, 1e-15));
    CHECK_THAT(s.omega_m, WithinRel(2.0 * M_PI * 23.4e6, 1e-15));
    CHECK_THAT(s.gamma_m, WithinRel(2.4e5, 1e-15));
    CHECK_THAT(s.omega_c, WithinRel(1.93e14, 1e-15));
    CHECK_THAT(s.gamma, WithinRel(6.43e6, 1e-15));
    CHECK_THAT(s.radius, WithinRel(34.5e-6, 1e-15));
    CHECK_THAT(s.delta_l, WithinRel(s.omega_m, 1e-15));
    CHECK_THAT(s.p_l, WithinRel(933e-6, 1e-15));
    CHECK_THAT(s.probe_ratio, WithinRel(0.05, 1e-15));
    CHECK(s.kappa == -s.gamma);
    CHECK(s.coupling_j == 0.0);

    const SystemParams d = params::paper_defaults(Topology::Double);
    CHECK(d.kappa == +d.gamma);
    CHECK(d.coupling_j == d.gamma);
    CHECK(d.topology == Topology::Double);
}

TEST_CASE("coupling strength is the cavity frequency over the radius") {
    const SystemParams s = params::paper_defaults(Topology::Single);
    CHECK_THAT(s.g(), WithinRel(s.omega_c / s.radius, 1e-15));
    CHECK_THAT(s.g(), WithinRel(5.5942028985507246e18, 1e-12));
}

TEST_CASE("drive amplitudes follow from the pump power") {
    SystemParams s = params::paper_defaults(Topology::Single);
    const DriveFields d = params::drive_amplitudes(s);
    // eps_l = sqrt(2*gamma*P_l / (hbar*omega_laser)), omega_laser = omega_c - delta_l
    const double omega_laser = s.omega_c - s.delta_l;
    CHECK_THAT(d.eps_l,
               WithinRel(std::sqrt(2.0 * s.gamma * s.p_l / (s.hbar * omega_laser)), 1e-13));
    CHECK_THAT(d.eps_l, WithinRel(767794046359.85095, 1e-12));
    CHECK_THAT(d.eps_p, WithinRel(0.05 * d.eps_l, 1e-15));

    s.p_l = -1.0;
    CHECK_THROWS_AS(params::drive_amplitudes(s), std::invalid_argument);

    s.p_l = 0.0;
    const DriveFields z = params::drive_amplitudes(s);
    CHECK(z.eps_l == 0.0);
    CHECK(z.eps_p == 0.0);
}

TEST_CASE("validation flags unphysical parameter sets") {
    SystemParams s = params::paper_defaults(Topology::Single);
    CHECK(params::validate(s).empty());

    SECTION("negative mass") {
        s.m = -1e-12;
        CHECK_FALSE(params::validate(s).empty());
    }
    SECTION("zero mechanical frequency") {
        s.omega_m = 0.0;
        CHECK_FALSE(params::validate(s).empty());
    }
    SECTION("single topology must not carry a coupling rate") {
        s.coupling_j = 1e6;
        CHECK_FALSE(params::validate(s).empty());
    }
    SECTION("negative radius") {
        s.radius = -34.5e-6;
        CHECK_FALSE(params::validate(s).empty());
    }
    SECTION("negative pump power") {
        s.p_l = -933e-6;
        CHECK_FALSE(params::validate(s).empty());
    }
}

TEST_CASE("json round trip preserves every field") {
    const SystemParams d = params::paper_defaults(Topology::Double);
    const io::json j = io::params_to_json(d);
    const SystemParams back =
        io::params_from_json(j, params::paper_defaults(Topology::Single));
    CHECK(back.topology == Topology::Double);
    CHECK(back.m == d.m);
    CHECK(back.omega_m == d.omega_m);
    CHECK(back.gamma_m == d.gamma_m);
    CHECK(back.omega_c == d.omega_c);
    CHECK(back.gamma == d.gamma);
    CHECK(back.kappa == d.kappa);
    CHECK(back.coupling_j == d.coupling_j);
    CHECK(back.radius == d.radius);
    CHECK(back.delta_l == d.delta_l);
    CHECK(back.p_l == d.p_l);
    CHECK(back.probe_ratio == d.probe_ratio);
}

TEST_CASE("json loading rejects unknown keys and inconsistent g") {
    const SystemParams base = params::paper_defaults(Topology::Single);

    io::json bad = {{"kapa", 1.0}};
    CHECK_THROWS_AS(io::params_from_json(bad, base), ConfigError);

    io::json wrong_type = {{"p_l", "a lot"}};
    CHECK_THROWS_AS(io::params_from_json(wrong_type, base), ConfigError);

    // g is derived; a config may restate it but only consistently
    io::json ok = {{"g", base.omega_c / base.radius}};
    CHECK_NOTHROW(io::params_from_json(ok, base));
    io::json off = {{"g", 1.01 * base.omega_c / base.radius}};
    CHECK_THROWS_AS(io::params_from_json(off, base), ConfigError);
}
