#ifndef CENTRALFORCE_ARNOLD_HPP
#define CENTRALFORCE_ARNOLD_HPP

#include <array>
#include <cmath>
#include <functional>
#include <vector>

#include "actions.hpp"
#include "errors.hpp"
#include "parallel.hpp"

namespace cforce {

namespace tol {
/// dimensionless quasiconvexity threshold on the normalized determinant
inline constexpr double arnold_D = 1e-7;
}

/// One action-space point with frequencies.
struct ActionPoint {
    double I1 = 0, I2 = 0;
    double E = 0;
    double omega1 = 0, omega2 = 0;
    double nu = 0;   ///< omega1/omega2
};

/// Arnold-determinant sample: Hessian of h, determinant, verdict, and the
/// Burgers-form residual dnu/dI1 - nu dnu/dI2.
struct ArnoldSample {
    ActionPoint point;
    double h11 = 0, h12 = 0, h22 = 0;
    double D = 0;
    double D_normalized = 0;   ///< D * (|I1|+|I2|) / |omega|^3
    bool quasiconvex = false;
    double burgers_residual = 0;
    bool degraded = false;
};

namespace detail {

/// omega evaluated at action coordinates (I1, I2) through energy inversion.
inline Frequencies freq_at_actions(const ActionChart& chart, double I1, double I2) {
    const double E = invert_h(chart, I1, I2);
    return frequencies(chart, E, I2);
}

/// Secant inversion of G(E, I2) = I1 from a nearby starting energy; falls
/// back to the global bracketing inverter when the guess misbehaves.
inline double invert_near(const ActionChart& chart, double I1, double I2, double e_guess) {
    const double bot = chart_bottom_level(chart, I2);
    const double top = top_level_from(chart, chart_pattern_at(chart, I2));
    const double height = top - bot;
    const auto [dlo, dhi] = energy_insets(bot, top);
    const double scale_I = std::fabs(I1) + std::fabs(I2) + 1e-12;
    try {
        double e0 = std::fmin(std::fmax(e_guess, bot + dlo), top - dhi);
        double e1 = std::fmin(std::fmax(e0 * (1 + 1e-7) + 1e-13 * height, bot + dlo), top - dhi);
        if (e1 == e0) e1 = e0 - 1e-7 * height;
        double f0 = action_G(chart, e0, I2) - I1;
        double f1 = action_G(chart, e1, I2) - I1;
        for (int i = 0; i < 24; ++i) {
            if (std::fabs(f1) < tol::invert_rel * scale_I) return e1;
            if (f1 == f0) break;
            double e2 = e1 - f1 * (e1 - e0) / (f1 - f0);
            if (!(e2 > bot) || !(e2 < top)) break;
            e0 = e1; f0 = f1;
            e1 = e2; f1 = action_G(chart, e2, I2) - I1;
        }
    } catch (const std::exception&) {
        // fall through to the safe route
    }
    return invert_h(chart, I1, I2);
}

inline Frequencies freq_at_actions_near(const ActionChart& chart, double I1, double I2,
                                        double e_guess) {
    const double E = invert_near(chart, I1, I2, e_guess);
    return frequencies(chart, E, I2);
}

/// Available room around I1 inside the chart's action range at fixed I2.
/// The top-side room is the local linearization (top - E) dG/dE, used only
/// to size finite-difference steps.
inline std::pair<double, double> action_room(const ActionChart& chart, double I1, double I2,
                                             double E_hint = std::numeric_limits<double>::quiet_NaN()) {
    const double bot = chart_bottom_level(chart, I2);
    const double top = top_level_from(chart, chart_pattern_at(chart, I2));
    double i1_lo = 0;
    if (chart.bottom_is_max) {
        const double height = (std::isfinite(top) ? top : std::fabs(bot) + 1) - bot;
        i1_lo = action_G(chart, bot + tol::ebar_floor * height, I2);
    }
    const double E = std::isnan(E_hint) ? invert_h(chart, I1, I2) : E_hint;
    const double slope = dG_dE(chart, E, I2);   // period/(2 pi) > 0
    const double room_hi = std::fmax((top - E) * slope * 0.5, 1e-8 * (std::fabs(I1) + std::fabs(I2)));
    return {I1 - i1_lo, room_hi};
}

}  // namespace detail

/// Computes the Arnold determinant at (I1, I2) by differencing frequencies
/// (4-point stencils in each action).
inline ArnoldSample arnold_determinant(const ActionChart& chart, double I1, double I2) {
    ArnoldSample s;
    const double E = invert_h(chart, I1, I2);
    Frequencies f0 = frequencies(chart, E, I2);
    s.point = {I1, I2, E, f0.omega1, f0.omega2,
               f0.omega2 != 0 ? f0.omega1 / f0.omega2 : 0.0};
    s.degraded = f0.degraded;

    const auto [room_lo, room_hi] = detail::action_room(chart, I1, I2, E);
    const double room1 = std::fmin(room_lo, room_hi);
    if (!(room1 > 0))
        throw DomainError("arnold_determinant: (I1, I2) not interior to the chart");
    const double scale1 = std::fabs(I1) + std::fabs(I2);
    double h = std::fmin(std::fmax(1e-6 * scale1, 1e-3 * room1), 0.24 * room1);

    const double room2 = std::fmin(I2 - chart.p_lo, chart.p_hi - I2);
    double k = std::fmin(std::fmax(1e-6 * (chart.p_hi - chart.p_lo), 2e-3 * I2), 0.24 * room2);
    // at fixed I1, an I2 step drags E - bottom by (omega2 - dV0/dI2) k; keep
    // that drift a small fraction of the room above the chart bottom
    {
        const auto cps = chart_pattern_at(chart, I2);
        const double bot = cps[chart.bottom_branch].level;
        const double top = detail::top_level_from(chart, cps);
        const double roomE = std::fmin(E - bot, top - E);
        const double drift = std::fabs(f0.omega2 - detail::dV0_dI2(chart, I2));
        if (drift > 0) k = std::fmin(k, 0.03 * roomE / drift);
    }

    // frequency samples along I1 and I2, inversion warm-started from the
    // first-order energy displacement; steps shrink if the chart edge bites
    std::array<Frequencies, 4> fI1, fI2;
    for (int attempt = 0;; ++attempt) {
        try {
            const double off[4] = {-2, -1, 1, 2};
            for (int i = 0; i < 4; ++i)
                fI1[i] = detail::freq_at_actions_near(chart, I1 + off[i] * h, I2,
                                                      E + off[i] * h * f0.omega1);
            break;
        } catch (const std::exception&) {
            if (attempt >= 24) throw;
            h *= 0.5;
            s.degraded = true;
        }
    }
    for (int attempt = 0;; ++attempt) {
        try {
            const double off[4] = {-2, -1, 1, 2};
            for (int i = 0; i < 4; ++i)
                fI2[i] = detail::freq_at_actions_near(chart, I1, I2 + off[i] * k,
                                                      E + off[i] * k * f0.omega2);
            break;
        } catch (const std::exception&) {
            if (attempt >= 24) throw;
            k *= 0.5;
            s.degraded = true;
        }
    }
    for (const auto& f : fI1) s.degraded = s.degraded || f.degraded;
    for (const auto& f : fI2) s.degraded = s.degraded || f.degraded;

    auto d4 = [](double m2, double m1, double p1, double p2, double step) {
        return (m2 - 8 * m1 + 8 * p1 - p2) / (12 * step);
    };
    s.h11 = d4(fI1[0].omega1, fI1[1].omega1, fI1[2].omega1, fI1[3].omega1, h);
    const double h21 = d4(fI1[0].omega2, fI1[1].omega2, fI1[2].omega2, fI1[3].omega2, h);
    const double h12b = d4(fI2[0].omega1, fI2[1].omega1, fI2[2].omega1, fI2[3].omega1, k);
    s.h22 = d4(fI2[0].omega2, fI2[1].omega2, fI2[2].omega2, fI2[3].omega2, k);
    s.h12 = 0.5 * (h21 + h12b);

    const double w1 = s.point.omega1, w2 = s.point.omega2;
    s.D = -s.h11 * w2 * w2 + 2 * s.h12 * w1 * w2 - s.h22 * w1 * w1;
    const double wmod = std::hypot(w1, w2);
    s.D_normalized = s.D * (std::fabs(I1) + std::fabs(I2) + 1e-300) / std::pow(wmod, 3);
    s.quasiconvex = std::fabs(s.D_normalized) > tol::arnold_D;

    if (std::fabs(w2) > 1e-12 * wmod) {
        auto nu = [](const Frequencies& f) { return f.omega1 / f.omega2; };
        const double dnu1 = d4(nu(fI1[0]), nu(fI1[1]), nu(fI1[2]), nu(fI1[3]), h);
        const double dnu2 = d4(nu(fI2[0]), nu(fI2[1]), nu(fI2[2]), nu(fI2[3]), k);
        s.burgers_residual = dnu1 - s.point.nu * dnu2;
    }
    return s;
}

/// Grid sweep with zero-set localization by edge sign changes.
struct QuasiconvexityMap {
    int n1 = 0, n2 = 0;
    std::vector<ArnoldSample> samples;        ///< row-major, I1 fastest
    std::vector<std::pair<double, double>> zero_points;   ///< (I1, I2) on D = 0
};

/// Samples the Arnold determinant on an n1 x n2 action grid placed strictly
/// inside the chart, and localizes the D = 0 set by one bisection refinement
/// per sign-changing grid edge.  Columns whose chart top is the working-range
/// wall (no bounding barrier, e.g. Kepler or harmonic charts) are windowed to
/// orbits contained in half the range and to a few I2 of radial action; wall
/// cells are range artifacts, not chart structure.
inline QuasiconvexityMap quasiconvexity_map(const ActionChart& chart, int n1, int n2,
                                            double I2_margin = 0.08, double I1_margin = 0.08,
                                            int jobs = 1) {
    QuasiconvexityMap map;
    map.n1 = n1;
    map.n2 = n2;
    map.samples.resize(std::size_t(n1) * n2);
    std::vector<double> I2s(n2);
    for (int j = 0; j < n2; ++j) {
        const double t = n2 == 1 ? 0.5 : double(j) / (n2 - 1);
        I2s[j] = chart.p_lo + (chart.p_hi - chart.p_lo) * (I2_margin + (1 - 2 * I2_margin) * t);
    }
    // chart action range per momentum column, measured from I1 = 0
    std::vector<std::pair<double, double>> i1_range(n2);
    for (int j = 0; j < n2; ++j) {
        const double I2 = I2s[j], ell = I2 * I2;
        const auto cps = chart_pattern_at(chart, I2);
        const double bot = cps[chart.bottom_branch].level;
        const double top = detail::top_level_from(chart, cps);
        double e_hi = bot + 0.95 * (top - bot);
        const double wall_top = veff(chart.pot, chart.pot.r_hi * (1 - 1e-9), ell);
        if (std::fabs(top - wall_top) < 1e-12 * (std::fabs(top) + 1)) {
            const double half_wall = veff(chart.pot, 0.5 * chart.pot.r_hi, ell);
            if (half_wall > bot) e_hi = std::fmin(e_hi, half_wall);
        }
        double i1_lo = 0;
        if (chart.bottom_is_max)
            i1_lo = action_G(chart, bot + tol::ebar_floor * (top - bot), I2);
        double i1_hi = action_G(chart, e_hi, I2);
        i1_hi = std::fmin(i1_hi, std::fmax(6 * I2, i1_lo + 2 * I2));
        if (!(i1_hi > i1_lo))
            throw ChartError("quasiconvexity_map: empty action window");
        i1_range[j] = {i1_lo, i1_hi};
    }
    parallel_for(map.samples.size(), jobs, [&](std::size_t idx) {
        const int j = int(idx) / n1, i = int(idx) % n1;
        const auto [i1_lo, i1_hi] = i1_range[j];
        const double t = n1 == 1 ? 0.5 : double(i) / (n1 - 1);
        const double I1 = i1_lo + (i1_hi - i1_lo) * (I1_margin + (1 - 2 * I1_margin) * t);
        map.samples[idx] = arnold_determinant(chart, I1, I2s[j]);
    });
    // zero set: sign changes along I1 rows and I2 columns; flips between
    // noise-level cells (degenerate determinant fields) do not count
    auto interp_zero = [](double x0, double d0, double x1, double d1) {
        return x0 + (x1 - x0) * d0 / (d0 - d1);
    };
    for (int j = 0; j < n2; ++j)
        for (int i = 0; i + 1 < n1; ++i) {
            const ArnoldSample& a = map.samples[std::size_t(j) * n1 + i];
            const ArnoldSample& b = map.samples[std::size_t(j) * n1 + i + 1];
            if (!a.quasiconvex && !b.quasiconvex) continue;
            if ((a.D > 0) != (b.D > 0)) {
                const double Im = 0.5 * (a.point.I1 + b.point.I1);
                const ArnoldSample mid = arnold_determinant(chart, Im, I2s[j]);
                const bool left = (a.D > 0) != (mid.D > 0);
                const double z = left ? interp_zero(a.point.I1, a.D, Im, mid.D)
                                      : interp_zero(Im, mid.D, b.point.I1, b.D);
                map.zero_points.emplace_back(z, I2s[j]);
            }
        }
    for (int i = 0; i < n1; ++i)
        for (int j = 0; j + 1 < n2; ++j) {
            const ArnoldSample& a = map.samples[std::size_t(j) * n1 + i];
            const ArnoldSample& b = map.samples[std::size_t(j + 1) * n1 + i];
            if (!a.quasiconvex && !b.quasiconvex) continue;
            if ((a.D > 0) != (b.D > 0)) {
                const double I2m = 0.5 * (a.point.I2 + b.point.I2);
                const ArnoldSample mid = arnold_determinant(chart, a.point.I1, I2m);
                const bool low = (a.D > 0) != (mid.D > 0);
                const double z = low ? interp_zero(a.point.I2, a.D, I2m, mid.D)
                                     : interp_zero(I2m, mid.D, b.point.I2, b.D);
                map.zero_points.emplace_back(a.point.I1, z);
            }
        }
    return map;
}

/// Determinant route through the (W1, G) form: valid on max-bottomed charts,
/// where G is naturally a function of Ebar = E - V0(I2).
inline double arnold_determinant_newarn(const ActionChart& chart, double ebar, double I2) {
    if (!chart.bottom_is_max)
        throw DomainError("arnold_determinant_newarn: needs a max-bottomed chart");
    const double top = chart_top_level(chart, I2);
    const double bot = chart_bottom_level(chart, I2);
    const double height = (std::isfinite(top) ? top : std::fabs(bot) + 1) - bot;

    auto Gof = [&](double eb, double i2) {
        return action_G(chart, chart_bottom_level(chart, i2) + eb, i2);
    };

    const double he = std::fmin(std::fmax(1e-8 * height, 1e-2 * ebar), 0.2 * ebar);
    double k = std::fmin(std::fmax(1e-6 * (chart.p_hi - chart.p_lo),
                                   1e-3 * std::fmin(I2 - chart.p_lo, chart.p_hi - I2)),
                         0.24 * std::fmin(I2 - chart.p_lo, chart.p_hi - I2));

    // first and second partials of G(Ebar, I2)
    const double Gm2 = Gof(ebar - 2 * he, I2), Gm1 = Gof(ebar - he, I2);
    const double G0 = Gof(ebar, I2);
    const double Gp1 = Gof(ebar + he, I2), Gp2 = Gof(ebar + 2 * he, I2);
    const double G_E = (Gm2 - 8 * Gm1 + 8 * Gp1 - Gp2) / (12 * he);
    const double G_EE = (-Gm2 + 16 * Gm1 - 30 * G0 + 16 * Gp1 - Gp2) / (12 * he * he);

    const double Gj_m2 = Gof(ebar, I2 - 2 * k), Gj_m1 = Gof(ebar, I2 - k);
    const double Gj_p1 = Gof(ebar, I2 + k), Gj_p2 = Gof(ebar, I2 + 2 * k);
    const double G_I2I2 = (-Gj_m2 + 16 * Gj_m1 - 30 * G0 + 16 * Gj_p1 - Gj_p2) / (12 * k * k);

    // mixed partial d2G/dI2 dEbar: 4-point stencil of dG/dEbar along I2
    auto GE_at = [&](double i2) {
        return (Gof(ebar - 2 * he, i2) - 8 * Gof(ebar - he, i2) + 8 * Gof(ebar + he, i2) -
                Gof(ebar + 2 * he, i2)) / (12 * he);
    };
    const double G_EI2 = (GE_at(I2 - 2 * k) - 8 * GE_at(I2 - k) + 8 * GE_at(I2 + k) -
                          GE_at(I2 + 2 * k)) / (12 * k);

    const double W1 = 1.0 / G_E;
    const double W1_E = -G_EE * W1 * W1;
    const double W1_I2 = -G_EI2 * W1 * W1;
    const double dV0 = detail::dV0_dI2(chart, I2);
    const double d2V0 = detail::d2V0_dI22(chart, I2);

    return -W1 * W1_E * dV0 * dV0 + 2 * W1 * W1_I2 * dV0 + W1 * W1 * W1 * G_I2I2 -
           W1 * W1 * d2V0;
}

/// Behavior of the determinant along Ebar -> 0+ above a chart-bottom maximum.
struct DivergenceReport {
    struct Row {
        double ebar = 0, I1 = 0;
        double D = 0;            ///< Hessian route
        double D_newarn = 0;     ///< (W1, G) route
        double D_model = 0;      ///< pi^2 lambda^2 / (Ebar ln^3 Ebar) * (dV0/dI2)^2
        double W1 = 0;
        double W1_model = 0;     ///< -pi lambda / ln Ebar
    };
    std::vector<Row> rows;       ///< ordered by decreasing ebar
    double lambda = 0;
    double dV0_dI2 = 0;
    double prefactor_fit = 0;    ///< D ebar ln^3(ebar) / (dV0/dI2)^2 at the small end
    double prefactor_model = 0;  ///< pi^2 lambda^2
    bool sign_consistent = true; ///< sign(D) matches the model at the small-Ebar end
    bool monotone = true;        ///< |D| increases as Ebar decreases
    bool inconclusive = false;   ///< dV0/dI2 ~ 0: leading term vanishes
};

/// Evaluates D along a decreasing Ebar ladder and compares with the
/// divergence model.
inline DivergenceReport max_bottom_divergence(const ActionChart& chart, double I2,
                                              const std::vector<double>& ebar_samples) {
    if (!chart.bottom_is_max)
        throw DomainError("max_bottom_divergence: needs a max-bottomed chart");
    DivergenceReport rep;
    const CriticalPoint bot = chart_bottom(chart, I2);
    rep.lambda = std::sqrt(std::fmax(-bot.curvature, 0.0));
    rep.dV0_dI2 = detail::dV0_dI2(chart, I2);
    const double wscale = std::fabs(bot.level) + I2 * I2 / (bot.r0 * bot.r0);
    if (std::fabs(rep.dV0_dI2) < 1e-10 * std::sqrt(wscale)) {
        rep.inconclusive = true;
        return rep;
    }
    for (double eb : ebar_samples) {
        DivergenceReport::Row row;
        row.ebar = eb;
        row.I1 = action_G(chart, bot.level + eb, I2);
        const ArnoldSample s = arnold_determinant(chart, row.I1, I2);
        row.D = s.D;
        row.D_newarn = arnold_determinant_newarn(chart, eb, I2);
        const double ln = std::log(eb);
        row.D_model = M_PI * M_PI * rep.lambda * rep.lambda / (eb * ln * ln * ln) *
                      rep.dV0_dI2 * rep.dV0_dI2;
        row.W1 = s.point.omega1;
        row.W1_model = -M_PI * rep.lambda / ln;
        rep.rows.push_back(row);
    }
    for (std::size_t i = 1; i < rep.rows.size(); ++i)
        if (std::fabs(rep.rows[i].D) <= std::fabs(rep.rows[i - 1].D))
            rep.monotone = false;
    if (!rep.rows.empty()) {
        const auto& last = rep.rows.back();
        rep.sign_consistent = (last.D > 0) == (last.D_model > 0);
        const double ln = std::log(last.ebar);
        rep.prefactor_fit = last.D * last.ebar * ln * ln * ln / (rep.dV0_dI2 * rep.dV0_dI2);
        rep.prefactor_model = M_PI * M_PI * rep.lambda * rep.lambda;
    }
    return rep;
}

/// Verdict of the periodic-orbit (Bertrand) probe: spread of nu over an I1
/// sweep at fixed I2.
struct BertrandVerdict {
    double nu_min = 0, nu_max = 0;
    double spread = 0;
    bool degenerate = false;   ///< nu numerically constant: Kepler/harmonic behavior
    std::vector<std::pair<double, double>> nu_samples;   ///< (I1, nu)
};

inline BertrandVerdict bertrand_nonconstancy(const ActionChart& chart, double I2,
                                             int n_samples = 12) {
    if (chart.bottom_is_max)
        throw DomainError("bertrand_nonconstancy: needs a min-bottomed chart");
    BertrandVerdict v;
    // sweep at most a few I2 worth of radial action: keeps the orbits well
    // away from the working-range wall on charts with an artificial top
    const double bot = chart_bottom_level(chart, I2);
    const double top = chart_top_level(chart, I2);
    const double i1_hi =
        std::fmin(action_G(chart, bot + 0.9 * (top - bot), I2), 4 * I2);
    v.nu_min = std::numeric_limits<double>::infinity();
    v.nu_max = -v.nu_min;
    for (int i = 0; i < n_samples; ++i) {
        const double I1 = i1_hi * (0.10 + 0.70 * i / (n_samples - 1));
        const Frequencies f = detail::freq_at_actions(chart, I1, I2);
        const double nu = f.omega1 / f.omega2;
        v.nu_samples.emplace_back(I1, nu);
        v.nu_min = std::fmin(v.nu_min, nu);
        v.nu_max = std::fmax(v.nu_max, nu);
    }
    v.spread = v.nu_max - v.nu_min;
    v.degenerate = v.spread < 1e-6;
    return v;
}

}  // namespace cforce

#endif
