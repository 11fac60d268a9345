#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "centralforce/actions.hpp"
#include "oracles.hpp"

using namespace cforce;

namespace {

ActionChart kepler_chart(double cap = 10.0) {
    const Potential p = make_builtin(PotentialKind::kepler, {{"k", 1.0}});
    for (auto& c : make_all_charts(p, cap))
        if (!c.bottom_is_max) return c;
    throw std::runtime_error("no kepler chart");
}

ActionChart harmonic_chart(double cap = 10.0) {
    const Potential p = make_builtin(PotentialKind::harmonic, {{"k", 1.0}});
    for (auto& c : make_all_charts(p, cap))
        if (!c.bottom_is_max) return c;
    throw std::runtime_error("no harmonic chart");
}

std::vector<ActionChart> ljg_charts() {
    const Potential p = make_builtin(PotentialKind::lennard_jones_gauss, oracle::ljg_params());
    return make_all_charts(p, 50.0);
}

}  // namespace

TEST_CASE("kepler chart geometry") {
    const ActionChart c = kepler_chart();
    CHECK_FALSE(c.bottom_is_max);
    CHECK(std::fabs(c.v_inf) < 1e-12);   // tail extrapolation recovers lim V = 0
    const double I2 = 1.0;
    CHECK(chart_bottom_level(c, I2) == doctest::Approx(-0.5).epsilon(1e-12));
    // unbarriered side: the top is the wall value of V_eff at r_hi
    const double wall = veff(c.pot, c.pot.r_hi * (1 - 1e-9), I2 * I2);
    CHECK(chart_top_level(c, I2) == doctest::Approx(wall).epsilon(1e-12));
    CHECK(chart_top_level(c, I2) < 0.0);
    CHECK(chart_top_level(c, I2) > -2e-3);
}

TEST_CASE("turning points against the closed-form quadratic") {
    const ActionChart c = kepler_chart();
    const double I2 = 1.0;
    for (double E : {-0.45, -0.375, -0.25, -0.1}) {
        const auto [rmin, rmax] = turning_points(c, E, I2);
        const auto [omin, omax] = oracle::kepler_turning_points(E, I2 * I2);
        CHECK(rmin == doctest::Approx(omin).epsilon(1e-10));
        CHECK(rmax == doctest::Approx(omax).epsilon(1e-10));
    }
    // the stated example: E = -0.375, ell = 1 has roots 2/3 and 2
    const auto [rm, rM] = turning_points(c, -0.375, 1.0);
    CHECK(rm == doctest::Approx(2.0 / 3.0).epsilon(1e-10));
    CHECK(rM == doctest::Approx(2.0).epsilon(1e-10));
    // and E = -0.25 gives 2 -+ sqrt(2)
    const auto [am, aM] = turning_points(c, -0.25, 1.0);
    CHECK(am == doctest::Approx(2.0 - M_SQRT2).epsilon(1e-10));
    CHECK(aM == doctest::Approx(2.0 + M_SQRT2).epsilon(1e-10));

    CHECK_THROWS_AS(turning_points(c, 0.5, 1.0), DomainError);
    CHECK_THROWS_AS(turning_points(c, -0.55, 1.0), DomainError);
}

TEST_CASE("harmonic turning points") {
    const ActionChart c = harmonic_chart();
    const double I2 = 0.8;
    for (double E : {1.5, 2.0, 4.0, 9.0}) {
        const auto [rmin, rmax] = turning_points(c, E, I2);
        const auto [omin, omax] = oracle::harmonic_turning_points(E, I2 * I2);
        CHECK(rmin == doctest::Approx(omin).epsilon(1e-10));
        CHECK(rmax == doctest::Approx(omax).epsilon(1e-10));
    }
}

TEST_CASE("turning points collapse at the well bottom") {
    const ActionChart c = kepler_chart();
    const double I2 = 1.0;
    const double bot = chart_bottom_level(c, I2);
    const auto [rmin, rmax] = turning_points(c, bot + 1e-10, I2);
    CHECK(rmax - rmin < 3e-5);
    CHECK(rmin < 1.0);
    CHECK(rmax > 1.0);
}

TEST_CASE("kepler action matches 1/sqrt(-2E) - I2") {
    const ActionChart c = kepler_chart();
    for (double I2 : {0.6, 1.0, 1.7}) {
        const double bot = chart_bottom_level(c, I2);
        for (int i = 1; i <= 8; ++i) {
            const double E = bot + (0.0 - bot) * i / 9.0;
            const double want = oracle::kepler_action(E, I2);
            CHECK(action_G(c, E, I2) == doctest::Approx(want).epsilon(1e-9));
        }
    }
}

TEST_CASE("harmonic action matches E/(2 sqrt 2) - I2/2") {
    const ActionChart c = harmonic_chart();
    for (double I2 : {0.5, 1.2}) {
        const double bot = chart_bottom_level(c, I2);
        for (double E : {bot * 1.2 + 0.5, bot + 1.0, bot + 3.0}) {
            const double want = oracle::harmonic_action(E, I2);
            CHECK(action_G(c, E, I2) == doctest::Approx(want).epsilon(1e-9));
        }
    }
}

TEST_CASE("action vanishes at the bottom") {
    const ActionChart c = kepler_chart();
    const double bot = chart_bottom_level(c, 1.0);
    CHECK(action_G(c, bot + 1e-12, 1.0) < 1e-6);
}

TEST_CASE("dG/dE is positive across the chart") {
    const ActionChart c = kepler_chart();
    for (double I2 : {0.7, 1.3}) {
        const double bot = chart_bottom_level(c, I2);
        for (int i = 1; i <= 6; ++i)
            CHECK(dG_dE(c, bot + (0.0 - bot) * i / 7.0, I2) > 0);
    }
}

TEST_CASE("kepler frequencies: omega1 = omega2 = (-2E)^{3/2}") {
    const ActionChart c = kepler_chart();
    const double I2 = 1.0;
    for (double E : {-0.45, -0.3, -0.2}) {
        const Frequencies f = frequencies(c, E, I2);
        const double w = oracle::kepler_omega(E);
        CHECK(f.omega1 == doctest::Approx(w).epsilon(1e-8));
        CHECK(f.omega2 == doctest::Approx(w).epsilon(1e-8));
        CHECK(f.omega1 / f.omega2 == doctest::Approx(1.0).epsilon(1e-8));
    }
}

TEST_CASE("harmonic frequency ratio is 2 everywhere") {
    const ActionChart c = harmonic_chart();
    for (double I2 : {0.5, 1.0}) {
        const double bot = chart_bottom_level(c, I2);
        for (double E : {bot + 0.4, bot + 1.1, bot + 2.7}) {
            const Frequencies f = frequencies(c, E, I2);
            CHECK(f.omega1 / f.omega2 == doctest::Approx(2.0).epsilon(1e-8));
        }
    }
}

namespace {
ActionChart pick_chart(const std::vector<ActionChart>& charts, bool want_max, double I2) {
    for (const auto& c : charts)
        if (c.bottom_is_max == want_max && c.contains_momentum(I2)) return c;
    throw std::runtime_error("pick_chart: no matching chart");
}
}  // namespace

TEST_CASE("circular-orbit limit: nu -> sqrt(3 + g(r0))") {
    const Potential lj = make_builtin(PotentialKind::lennard_jones, {{"eps", 1.0}, {"sigma", 1.0}});
    const double I2 = 0.9;
    const ActionChart chart = pick_chart(make_all_charts(lj, 50.0), false, I2);
    const CriticalPoint bot = chart_bottom(chart, I2);
    const double nu0 = std::sqrt(3 + g_of(lj, bot.r0));
    const double E = bot.level + 1e-7;
    const Frequencies f = frequencies(chart, E, I2);
    CHECK(f.omega1 / f.omega2 == doctest::Approx(nu0).epsilon(1e-4));
    // omega1 tends to the well frequency sqrt(curvature)
    CHECK(f.omega1 == doctest::Approx(std::sqrt(bot.curvature)).epsilon(1e-4));
}

TEST_CASE("invert_h round trips") {
    SUBCASE("kepler") {
        const ActionChart c = kepler_chart();
        for (double I2 : {0.8, 1.0}) {
            const double bot = chart_bottom_level(c, I2);
            for (int i = 1; i <= 5; ++i) {
                const double E0 = bot + (0.0 - bot) * i / 6.0;
                const double I1 = action_G(c, E0, I2);
                CHECK(invert_h(c, I1, I2) == doctest::Approx(E0).epsilon(1e-9));
                CHECK(std::fabs(action_G(c, invert_h(c, I1, I2), I2) - I1) <
                      1e-9 * (std::fabs(I1) + 1));
            }
        }
    }
    SUBCASE("harmonic (unbounded top)") {
        const ActionChart c = harmonic_chart();
        const double I2 = 1.0, bot = chart_bottom_level(c, I2);
        for (double E0 : {bot + 0.7, bot + 2.0, bot + 6.0}) {
            const double I1 = action_G(c, E0, I2);
            CHECK(invert_h(c, I1, I2) == doctest::Approx(E0).epsilon(1e-9));
        }
    }
    SUBCASE("LJG chart above the barrier") {
        ActionChart above;
        bool found = false;
        for (auto& c : ljg_charts())
            if (c.bottom_is_max) { above = c; found = true; break; }
        REQUIRE(found);
        const double I2 = 0.5 * (above.p_lo + above.p_hi);
        const double bot = chart_bottom_level(above, I2);
        const double top = chart_top_level(above, I2);
        REQUIRE(top > bot);
        for (double t : {0.2, 0.5, 0.8}) {
            const double E0 = bot + (top - bot) * t;
            const double I1 = action_G(above, E0, I2);
            CHECK(invert_h(above, I1, I2) == doctest::Approx(E0).epsilon(1e-9));
        }
        CHECK_THROWS_AS(invert_h(above, -1.0, I2), DomainError);
    }
}

TEST_CASE("round-trip property on a 20x20 action grid") {
    const ActionChart c = kepler_chart();
    for (int j = 0; j < 20; ++j) {
        const double I2 = 0.5 + 1.5 * j / 19.0;
        const double bot = chart_bottom_level(c, I2);
        const double top = chart_top_level(c, I2);
        for (int i = 0; i < 20; ++i) {
            const double E0 = bot + (top - bot) * (0.03 + 0.9 * i / 19.0);
            const double I1 = action_G(c, E0, I2);
            const double back = action_G(c, invert_h(c, I1, I2), I2);
            CHECK(std::fabs(back - I1) < 1e-9 * (std::fabs(I1) + std::fabs(I2)));
        }
    }
}

TEST_CASE("apsidal-angle oracle agrees with the frequency ratio") {
    const Potential lj = make_builtin(PotentialKind::lennard_jones, {{"eps", 1.0}, {"sigma", 1.0}});
    const double I2 = 1.0;
    const ActionChart chart = pick_chart(make_all_charts(lj, 50.0), false, I2);
    const double bot = chart_bottom_level(chart, I2);
    const double top = chart_top_level(chart, I2);
    const double E = bot + 0.4 * (top - bot);
    const Frequencies f = frequencies(chart, E, I2);
    const auto [rm, rM] = turning_points(chart, E, I2);
    const double dtheta = oracle::apsidal_angle(
        [&](double r) { return veff(lj, r, I2 * I2); }, I2, E, rm, rM);
    CHECK(f.omega1 / f.omega2 == doctest::Approx(M_PI / dtheta).epsilon(1e-6));
}

TEST_CASE("log asymptotics above the LJG barrier") {
    ActionChart above;
    bool found = false;
    for (auto& c : ljg_charts())
        if (c.bottom_is_max) { above = c; found = true; break; }
    REQUIRE(found);
    const double I2 = 0.5 * (above.p_lo + above.p_hi);
    const CriticalPoint bot = chart_bottom(above, I2);
    const double top = chart_top_level(above, I2);
    const double H = top - bot.level;

    std::vector<double> ebars;
    for (int i = 0; i < 21; ++i) ebars.push_back(1e-2 * H * std::pow(10.0, -0.25 * i));
    const LogAsymptotics fit = fit_log_asymptotics(above, I2, ebars);

    const double lam = std::sqrt(-bot.curvature);
    CHECK(fit.lambda_check == doctest::Approx(lam).epsilon(1e-12));
    CHECK(fit.lambda_fit == doctest::Approx(lam).epsilon(1e-2));
    CHECK(fit.leading_coef == doctest::Approx(1.0 / (M_PI * lam)).epsilon(1e-2));
    CHECK(std::isfinite(fit.I1_limit));
    // I1 decreases monotonically to the finite limit as Ebar -> 0
    double prev = std::numeric_limits<double>::infinity();
    for (double eb : ebars) {
        const double I1 = action_G(above, bot.level + eb, I2);
        CHECK(I1 < prev);
        CHECK(I1 > fit.I1_limit - 1e-3);
        prev = I1;
    }
    CHECK_THROWS_AS(fit_log_asymptotics(kepler_chart(), 1.0, ebars), DomainError);
}
