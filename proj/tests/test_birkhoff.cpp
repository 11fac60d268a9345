#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "centralforce/birkhoff.hpp"
#include "oracles.hpp"

using namespace cforce;

namespace {

ActionChart pick_chart(const std::vector<ActionChart>& charts, bool want_max, double I2) {
    for (const auto& c : charts)
        if (c.bottom_is_max == want_max && c.contains_momentum(I2)) return c;
    throw std::runtime_error("pick_chart: no matching chart");
}

double min_branch_radius(const Potential& p, double ell) {
    for (const auto& cp : find_critical_points(p, ell))
        if (cp.is_minimum) return cp.r0;
    throw std::runtime_error("no minimum branch");
}

}  // namespace

TEST_CASE("g derivatives vanish along homogeneous branches") {
    for (double c : {-2.0, -0.5, 1.0, 1.5}) {
        const Potential p = (c == 1.0)
                                ? make_builtin(PotentialKind::harmonic, {{"k", 1.0}})
                                : make_builtin(PotentialKind::power_law, {{"k", 1.0}, {"c", c}});
        for (double r0 : {0.4, 1.0, 3.0}) {
            const CircularOrbitData d = circular_orbit_data(p, r0);
            CHECK(d.g0 == doctest::Approx(c).epsilon(1e-13));
            CHECK(std::fabs(d.g1) < 1e-12 / r0);
            CHECK(std::fabs(d.g2) < 1e-11 / (r0 * r0));
            CHECK(std::fabs(d.g3) < 1e-10 / (r0 * r0 * r0));
            CHECK(std::fabs(d.g4) < 1e-9 / (r0 * r0 * r0 * r0));
        }
    }
}

TEST_CASE("g derivatives match finite differences of g (lennard-jones)") {
    // probes keep clear of the g pole at 2^(1/6) where V' vanishes
    const Potential lj = make_builtin(PotentialKind::lennard_jones, {{"eps", 1.0}, {"sigma", 1.0}});
    for (double r0 : {1.35, 1.6, 2.0}) {
        const CircularOrbitData d = circular_orbit_data(lj, r0);
        auto g = [&](double r) { return g_of(lj, r); };
        const double h = 2e-3 * r0;
        const double g1 = (g(r0 - 2 * h) - 8 * g(r0 - h) + 8 * g(r0 + h) - g(r0 + 2 * h)) / (12 * h);
        const double g2 =
            (-g(r0 - 2 * h) + 16 * g(r0 - h) - 30 * g(r0) + 16 * g(r0 + h) - g(r0 + 2 * h)) /
            (12 * h * h);
        auto d3 = [&](double hh) {
            return (g(r0 + 2 * hh) - 2 * g(r0 + hh) + 2 * g(r0 - hh) - g(r0 - 2 * hh)) /
                   (2 * hh * hh * hh);
        };
        auto d4f = [&](double hh) {
            return (g(r0 - 2 * hh) - 4 * g(r0 - hh) + 6 * g(r0) - 4 * g(r0 + hh) +
                    g(r0 + 2 * hh)) / (hh * hh * hh * hh);
        };
        const double g3 = (4 * d3(h / 2) - d3(h)) / 3;   // Richardson to 4th order
        const double g4 = (4 * d4f(h / 2) - d4f(h)) / 3;
        CHECK(d.g1 == doctest::Approx(g1).epsilon(1e-6));
        CHECK(d.g2 == doctest::Approx(g2).epsilon(1e-6));
        CHECK(d.g3 == doctest::Approx(g3).epsilon(1e-5));
        CHECK(d.g4 == doctest::Approx(g4).epsilon(1e-4));
    }
}

TEST_CASE("nu0 for kepler and harmonic") {
    const Potential kep = make_builtin(PotentialKind::kepler, {{"k", 1.0}});
    const NuCoefficients ck = nu_coefficients(circular_orbit_data(kep, 1.0));
    CHECK(ck.nu0 == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(std::fabs(ck.nu1) < 1e-13);
    CHECK(std::fabs(ck.nu2) < 1e-12);

    const Potential har = make_builtin(PotentialKind::harmonic, {{"k", 1.0}});
    const NuCoefficients ch = nu_coefficients(circular_orbit_data(har, 0.8));
    CHECK(ch.nu0 == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(std::fabs(ch.nu1) < 1e-13);
    CHECK(std::fabs(ch.nu2) < 1e-12);

    // nu0^2 - 3 - g identically
    const Potential lj = make_builtin(PotentialKind::lennard_jones, {{"eps", 1.0}, {"sigma", 1.0}});
    for (double r0 : {0.95, 1.05, 1.4}) {
        const CircularOrbitData d = circular_orbit_data(lj, r0);
        if (3 + d.g0 <= 0) continue;
        const NuCoefficients c = nu_coefficients(d);
        CHECK(c.nu0 * c.nu0 - 3 - d.g0 == doctest::Approx(0.0).epsilon(1e-12));
    }
    // not a minimum-type orbit: 3 + g < 0 on the barrier branch
    CHECK_THROWS_AS(nu_coefficients(circular_orbit_data(lj, 2.2)), DomainError);
}

TEST_CASE("dual transcription fuzz: flat term list vs Horner-factored") {
    std::mt19937 rng(987654321);
    std::uniform_real_distribution<double> ug(-3.0 + 1e-6, 2.0), ud(-10.0, 10.0),
        ur(0.1, 10.0), uv(0.1, 10.0);
    for (int trial = 0; trial < 100; ++trial) {
        CircularOrbitData d;
        d.r0 = ur(rng);
        d.Vp = uv(rng);
        d.g0 = ug(rng);
        d.g1 = ud(rng) / d.r0;
        d.g2 = ud(rng) / (d.r0 * d.r0);
        d.g3 = ud(rng) / (d.r0 * d.r0 * d.r0);
        d.g4 = ud(rng) / (d.r0 * d.r0 * d.r0 * d.r0);
        d.R = 2.0 / ((3 + d.g0) * std::sqrt(d.r0 * d.Vp));
        // agreement at 1e-12 relative to the expression scale: the numerators
        // cancel heavily, so the term-magnitude sum is the roundoff unit
        const RationalParts p1 = nu1_parts(d), p2 = nu2_parts(d);
        const double nu1a = p1.value(), nu1b = oracle::nu1_alt(d);
        const double nu2a = p2.value(), nu2b = oracle::nu2_alt(d);
        CHECK(std::fabs(nu1a - nu1b) <=
              1e-12 * std::fmax(std::fabs(nu1b), p1.mag / std::fabs(p1.den)));
        CHECK(std::fabs(nu2a - nu2b) <=
              1e-12 * std::fmax(std::fabs(nu2b), p2.mag / std::fabs(p2.den)));
    }
}

TEST_CASE("dimensional consistency: V -> s V scales nu1 by s^-1/2 and nu2 by s^-1") {
    const double s = 9.0;
    const Potential lj1 = make_builtin(PotentialKind::lennard_jones, {{"eps", 1.0}, {"sigma", 1.0}});
    const Potential ljs = make_builtin(PotentialKind::lennard_jones, {{"eps", s}, {"sigma", 1.0}});
    const double r0 = 1.2;
    const NuCoefficients a = nu_coefficients(circular_orbit_data(lj1, r0));
    const NuCoefficients b = nu_coefficients(circular_orbit_data(ljs, r0));
    CHECK(b.nu0 == doctest::Approx(a.nu0).epsilon(1e-13));
    CHECK(b.nu1 == doctest::Approx(a.nu1 / std::sqrt(s)).epsilon(1e-12));
    CHECK(b.nu2 == doctest::Approx(a.nu2 / s).epsilon(1e-12));
}

TEST_CASE("burgers consistency: kepler and harmonic solve both equations") {
    const Potential kep = make_builtin(PotentialKind::kepler, {{"k", 1.0}});
    for (double r0 : {0.7, 1.0, 2.5}) {
        const BurgersRhs rhs = rhs_G1_G2(kep, r0);
        CHECK(std::fabs(rhs.res1) < 1e-8);
        CHECK(std::fabs(rhs.res2) < 1e-8);
    }
    const Potential har = make_builtin(PotentialKind::harmonic, {{"k", 1.0}});
    for (double r0 : {0.5, 1.3}) {
        const BurgersRhs rhs = rhs_G1_G2(har, r0);
        CHECK(std::fabs(rhs.res1) < 1e-8);
        CHECK(std::fabs(rhs.res2) < 1e-8);
    }
    // power-law versions of the same exponents
    for (double c : {-2.0, 1.0}) {
        const Potential p = make_builtin(PotentialKind::power_law, {{"k", 2.0}, {"c", c}});
        const BurgersRhs rhs = rhs_G1_G2(p, 1.2);
        CHECK(std::fabs(rhs.res1) < 1e-8);
        CHECK(std::fabs(rhs.res2) < 1e-8);
    }
}

TEST_CASE("lennard-jones violates the first consistency equation") {
    const Potential lj = make_builtin(PotentialKind::lennard_jones, {{"eps", 1.0}, {"sigma", 1.0}});
    const double r0 = min_branch_radius(lj, 1.0);
    const BurgersRhs rhs = rhs_G1_G2(lj, r0);
    CHECK(std::fabs(rhs.res1) > 1e-3);

    // G1 against the closed derivative: R nu0 dnu0/dr0 = R g'/2
    const CircularOrbitData d = circular_orbit_data(lj, r0);
    const double G1_closed = d.R * d.g1 / 2.0;
    CHECK(rhs.G1 == doctest::Approx(G1_closed).epsilon(1e-6));
}

TEST_CASE("numeric expansion check: fitted nu coefficients match closed forms") {
    SUBCASE("kepler: (1, 0, 0)") {
        const Potential kep = make_builtin(PotentialKind::kepler, {{"k", 1.0}});
        const ActionChart c = pick_chart(make_all_charts(kep, 10.0), false, 1.0);
        const ExpansionCheck chk = numeric_expansion_check(c, 1.0);
        CHECK(chk.fitted.nu0 == doctest::Approx(1.0).epsilon(1e-3));
        CHECK(std::fabs(chk.fitted.nu1) < 1e-2);
        CHECK(std::fabs(chk.fitted.nu2) < 5e-2);
    }
    SUBCASE("harmonic: (2, 0, 0)") {
        const Potential har = make_builtin(PotentialKind::harmonic, {{"k", 1.0}});
        const ActionChart c = pick_chart(make_all_charts(har, 10.0), false, 1.0);
        const ExpansionCheck chk = numeric_expansion_check(c, 1.0);
        CHECK(chk.fitted.nu0 == doctest::Approx(2.0).epsilon(1e-3));
        CHECK(std::fabs(chk.fitted.nu1) < 2e-2);
    }
    SUBCASE("lennard-jones at one momentum") {
        const Potential lj =
            make_builtin(PotentialKind::lennard_jones, {{"eps", 1.0}, {"sigma", 1.0}});
        const ActionChart c = pick_chart(make_all_charts(lj, 50.0), false, 1.0);
        const ExpansionCheck chk = numeric_expansion_check(c, 1.0);
        CHECK(chk.fitted.nu0 == doctest::Approx(chk.closed.nu0).epsilon(1e-3));
        CHECK(chk.fitted.nu1 == doctest::Approx(chk.closed.nu1).epsilon(1e-2));
        CHECK(chk.fitted.nu2 == doctest::Approx(chk.closed.nu2).epsilon(5e-2));
    }
}

TEST_CASE("degenerate exponent scan finds exactly {-3, -2, 1}") {
    const ExponentScan scan = find_degenerate_exponents(-3.5, 2.0, 1e-3);
    REQUIRE(scan.roots.size() == 3);
    CHECK(scan.roots[0].c == doctest::Approx(-3.0).epsilon(1e-9));
    CHECK(scan.roots[0].excluded);
    CHECK(scan.roots[0].even_multiplicity);
    CHECK(scan.roots[1].c == doctest::Approx(-2.0).epsilon(1e-9));
    CHECK_FALSE(scan.roots[1].excluded);
    CHECK(scan.roots[2].c == doctest::Approx(1.0).epsilon(1e-9));
    CHECK_FALSE(scan.roots[2].excluded);
    CHECK(scan.max_r0_spread < 1e-8);
}
