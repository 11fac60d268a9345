#ifndef CENTRALFORCE_ACTIONS_HPP
#define CENTRALFORCE_ACTIONS_HPP

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include "effective.hpp"
#include "errors.hpp"
#include "fit.hpp"
#include "potential.hpp"
#include "quadrature.hpp"
#include "rootfind.hpp"

namespace cforce {

namespace tol {
/// adaptive-quadrature relative tolerance for radial integrals
inline constexpr double quad_rel = 1e-12;
/// target |G(E) - I1| in invert_h, relative to the action scale
inline constexpr double invert_rel = 1e-12;
/// smallest admissible Ebar = E - V0 above a chart-bottom maximum
inline constexpr double ebar_floor = 1e-9;
}  // namespace tol

/// One action-angle chart: the set of radial orbits at p_theta in (p_lo,p_hi)
/// whose energy range at fixed I_2 is bounded below by one critical point of
/// the effective potential (a well bottom or a barrier top).
struct ActionChart {
    Potential pot;
    double p_lo = 0, p_hi = 0;            ///< momentum interval (p_theta)
    std::vector<CriticalPoint> pattern;   ///< critical points at the interval midpoint
    int bottom_branch = 0;                ///< index of the bottom critical point in `pattern`
    bool bottom_is_max = false;
    double v_inf = 0;                     ///< lim V(r) estimate, +inf if divergent

    bool contains_momentum(double I2) const { return I2 > p_lo && I2 < p_hi; }
};

namespace detail {

/// lim_{r->inf} V(r): V(r_hi) directly when the tail is already flat,
/// otherwise a power-law tail extrapolation V_inf = V + r V'/(s-1) with the
/// decay exponent s of V' ~ r^-s measured over one octave.
inline double estimate_v_infinity(const Potential& p) {
    const double r = p.r_hi * (1 - 1e-9);
    const double v = p.deriv(r, 0), vp = p.deriv(r, 1);
    if (std::fabs(r * vp) < 1e-6 * std::fabs(v) + 1e-9)
        return v;
    const double w1 = r * vp, w2 = 0.5 * r * p.deriv(0.5 * r, 1);
    if (w2 != 0) {
        const double rho = w1 / w2;
        if (rho > 0 && rho < 0.9) {           // rV' decaying: limit exists
            const double s = 1 - std::log2(rho);
            return v + r * vp / (s - 1);
        }
    }
    return std::numeric_limits<double>::infinity();
}

/// Refines every branch of `pattern` to squared momentum ell by Newton on
/// w(r) = r^3 V'(r) - ell; falls back to a full scan if Newton wanders.
inline std::vector<CriticalPoint> refine_pattern(const Potential& p,
                                                 const std::vector<CriticalPoint>& pattern,
                                                 double ell) {
    std::vector<CriticalPoint> out;
    out.reserve(pattern.size());
    bool ok = true;
    for (const auto& cp : pattern) {
        double r = cp.r0;
        bool conv = false;
        for (int it = 0; it < 60; ++it) {
            const double vp = p.deriv(r, 1);
            const double w = r * r * r * vp - ell;
            const double wp = 3 * r * r * vp + r * r * r * p.deriv(r, 2);
            if (wp == 0) break;
            const double dr = -w / wp;
            if (std::fabs(dr) > 0.25 * r) break;    // wandering: bail to fallback
            r += dr;
            if (std::fabs(dr) < 1e-15 * r) { conv = true; break; }
        }
        if (!conv || !p.in_range(r)) { ok = false; break; }
        CriticalPoint c;
        c.r0 = r;
        c.ell = ell;
        c.curvature = veff_dr2(p, r, ell);
        c.is_minimum = c.curvature > 0;
        c.level = veff(p, r, ell);
        if (c.is_minimum != cp.is_minimum) { ok = false; break; }
        out.push_back(c);
    }
    if (ok && out.size() == pattern.size()) {
        for (std::size_t i = 1; i < out.size(); ++i)
            if (out[i].r0 <= out[i - 1].r0) { ok = false; break; }
    }
    if (ok && out.size() == pattern.size())
        return out;
    // fallback: full bracketing scan, then match branches by order
    out = find_critical_points(p, ell);
    if (out.size() != pattern.size())
        throw ChartError("refine_pattern: branch structure changed inside the interval");
    for (std::size_t i = 0; i < out.size(); ++i)
        if (out[i].is_minimum != pattern[i].is_minimum)
            throw ChartError("refine_pattern: branch kind changed inside the interval");
    return out;
}

}  // namespace detail

/// The chart's critical points tracked to momentum I2.
inline std::vector<CriticalPoint> chart_pattern_at(const ActionChart& chart, double I2) {
    if (!chart.contains_momentum(I2))
        throw DomainError("chart: I2 outside the chart momentum interval");
    return detail::refine_pattern(chart.pot, chart.pattern, I2 * I2);
}

/// Bottom critical point (well bottom or barrier top) at momentum I2.
inline CriticalPoint chart_bottom(const ActionChart& chart, double I2) {
    return chart_pattern_at(chart, I2)[chart.bottom_branch];
}

inline double chart_bottom_level(const ActionChart& chart, double I2) {
    return chart_bottom(chart, I2).level;
}

namespace detail {

inline double top_level_from(const ActionChart& chart, const std::vector<CriticalPoint>& cps) {
    const CriticalPoint& bot = cps[chart.bottom_branch];
    const double ell = bot.ell;
    // The component is capped on each side by the nearest barrier standing
    // above the bottom level; sides without a barrier are capped by the
    // effective potential at the working-range wall, which keeps every
    // turning point inside the range (the r_hi wall value converges to the
    // escape level V^inf as the range grows).
    double left_cap = veff(chart.pot, chart.pot.r_lo * (1 + 1e-9), ell);
    for (int j = chart.bottom_branch - 1; j >= 0; --j)
        if (!cps[j].is_minimum && cps[j].level > bot.level) {
            left_cap = cps[j].level;
            break;
        }
    double right_cap = veff(chart.pot, chart.pot.r_hi * (1 - 1e-9), ell);
    for (int j = chart.bottom_branch + 1; j < int(cps.size()); ++j)
        if (!cps[j].is_minimum && cps[j].level > bot.level) {
            right_cap = cps[j].level;
            break;
        }
    return std::fmin(left_cap, right_cap);
}

}  // namespace detail

/// Upper end of the chart's energy range at momentum I2 (a bounding critical
/// level or V^inf).
inline double chart_top_level(const ActionChart& chart, double I2) {
    return detail::top_level_from(chart, chart_pattern_at(chart, I2));
}

/// Builds every chart supported by one Morse-stable momentum interval: one
/// per well bottom, one per barrier top with room above it.
inline std::vector<ActionChart> make_charts(const Potential& p, const MomentumInterval& mi) {
    std::vector<ActionChart> charts;
    const double vinf = detail::estimate_v_infinity(p);
    for (std::size_t i = 0; i < mi.pattern.size(); ++i) {
        ActionChart c;
        c.pot = p;
        c.p_lo = mi.lo;
        c.p_hi = mi.hi;
        c.pattern = mi.pattern;
        c.bottom_branch = int(i);
        c.bottom_is_max = !mi.pattern[i].is_minimum;
        c.v_inf = vinf;
        const double top = detail::top_level_from(c, mi.pattern);
        if (top > mi.pattern[i].level)
            charts.push_back(std::move(c));
    }
    return charts;
}

/// Decomposes the admissible momentum band and builds all charts.
inline std::vector<ActionChart> make_all_charts(const Potential& p, double cap,
                                                int n_samples = 256) {
    std::vector<ActionChart> charts;
    for (const auto& mi : decompose_momentum_intervals(p, n_samples, cap))
        for (auto& c : make_charts(p, mi))
            charts.push_back(std::move(c));
    return charts;
}

/// The two radii bounding the chart's connected component of {V_eff = E}.
inline std::pair<double, double> turning_points(const ActionChart& chart, double E, double I2) {
    const Potential& p = chart.pot;
    const double ell = I2 * I2;
    const auto cps = chart_pattern_at(chart, I2);
    const CriticalPoint& bot = cps[chart.bottom_branch];
    const double top = detail::top_level_from(chart, cps);
    if (!(E > bot.level) || !(E < top))
        throw DomainError("turning_points: E outside the chart energy range");

    auto f = [&](double r) { return veff(p, r, ell) - E; };
    const double rc = bot.r0;
    if (!(f(rc) < 0))
        throw ChartError("turning_points: component center not below E");

    // Nearest barrier above E on each side caps the bracket; otherwise the
    // wall of the working range does (V_eff rises at r_lo, tends to V^inf >= top at r_hi).
    double blo = p.r_lo * (1 + 1e-12), bhi = p.r_hi * (1 - 1e-12);
    for (int j = chart.bottom_branch - 1; j >= 0; --j)
        if (!cps[j].is_minimum && cps[j].level > E) { blo = cps[j].r0; break; }
    for (int j = chart.bottom_branch + 1; j < int(cps.size()); ++j)
        if (!cps[j].is_minimum && cps[j].level > E) { bhi = cps[j].r0; break; }

    if (!(f(blo) > 0) || !(f(bhi) > 0))
        throw ChartError("turning_points: component not bounded inside the working range");
    double rmin = brent(f, blo, rc);
    double rmax = brent(f, rc, bhi);
    return {rmin, rmax};
}

namespace detail {

/// Integrates weight(r) / sqrt(2 (E - V_eff(r))) over the chart component,
/// removing the endpoint square-root singularities by a quadratic
/// substitution and flattening sharp near-barrier dips by a sinh
/// substitution anchored at interior critical radii.
struct RadialIntegrator {
    const Potential& p;
    double E, ell;
    bool converged = true;

    double kinetic(double r) const {
        const double x = 2 * (E - veff(p, r, ell));
        return x > 0 ? x : 0;
    }

    double piece(const std::function<double(double)>& weight,
                 double a, double b, int special, const CriticalPoint* cp) {
        // special: 0 none, 1 turning point at a, 2 turning point at b,
        //          3 barrier dip at a, 4 barrier dip at b
        std::function<double(double)> h;
        double u0 = 0, u1 = 1;
        switch (special) {
            case 0:
                h = [&](double r) { return weight(r) / std::sqrt(kinetic(r) + 1e-300); };
                u0 = a; u1 = b;
                break;
            case 1:
                h = [&](double t) {
                    const double r = a + (b - a) * t * t;
                    return weight(r) * 2 * (b - a) * t / std::sqrt(kinetic(r) + 1e-300);
                };
                break;
            case 2:
                h = [&](double t) {
                    const double r = b - (b - a) * t * t;
                    return weight(r) * 2 * (b - a) * t / std::sqrt(kinetic(r) + 1e-300);
                };
                break;
            case 3:
            case 4: {
                const double anchor = (special == 3) ? a : b;
                const double span = b - a;
                const double lam = std::sqrt(std::fmax(-cp->curvature, 1e-300));
                const double gap = std::fmax(E - cp->level, 1e-300);
                const double s = std::sqrt(2 * gap) / lam;
                const double U = std::asinh(span / s);
                h = [&, anchor, s, sgn = (special == 3) ? 1.0 : -1.0](double u) {
                    const double r = anchor + sgn * s * std::sinh(u);
                    return weight(r) * s * std::cosh(u) / std::sqrt(kinetic(r) + 1e-300);
                };
                u0 = 0; u1 = U;
                break;
            }
        }
        const QuadResult q = gauss_adaptive(h, u0, u1, tol::quad_rel, 128, 4096);
        converged = converged && q.converged;
        return q.value;
    }

    double run(const std::function<double(double)>& weight,
               double rmin, double rmax, const std::vector<CriticalPoint>& cps) {
        // breakpoints at interior critical radii; sharp handling at barriers
        struct Node { double r; const CriticalPoint* cp; };
        std::vector<Node> nodes;
        nodes.push_back({rmin, nullptr});
        for (const auto& c : cps)
            if (c.r0 > rmin * (1 + 1e-14) && c.r0 < rmax * (1 - 1e-14))
                nodes.push_back({c.r0, &c});
        nodes.push_back({rmax, nullptr});

        double total = 0;
        for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
            const Node& L = nodes[i];
            const Node& R = nodes[i + 1];
            const bool lturn = (i == 0), rturn = (i + 2 == nodes.size());
            const bool lsharp = L.cp && !L.cp->is_minimum;
            const bool rsharp = R.cp && !R.cp->is_minimum;
            const int lspec = lturn ? 1 : (lsharp ? 3 : 0);
            const int rspec = rturn ? 2 : (rsharp ? 4 : 0);
            if (lspec && rspec) {
                const double mid = 0.5 * (L.r + R.r);
                total += piece(weight, L.r, mid, lspec, L.cp);
                total += piece(weight, mid, R.r, rspec, R.cp);
            } else if (lspec) {
                total += piece(weight, L.r, R.r, lspec, L.cp);
            } else {
                total += piece(weight, L.r, R.r, rspec, R.cp);
            }
        }
        return total;
    }
};

}  // namespace detail

/// Integral of weight(r)/sqrt(2(E - V_eff)) over the chart component at
/// (E, I2).  Building block for actions, periods and apsidal angles.
inline double radial_integral(const ActionChart& chart, double E, double I2,
                              const std::function<double(double)>& weight,
                              bool* converged = nullptr) {
    const auto [rmin, rmax] = turning_points(chart, E, I2);
    const auto cps = chart_pattern_at(chart, I2);
    // guard: the integrand must not go imaginary away from the endpoints
    const double scale = std::fabs(E) + std::fabs(cps[chart.bottom_branch].level) + 1e-12;
    for (int k = 1; k < 16; ++k) {
        const double r = rmin + (rmax - rmin) * k / 16.0;
        if (veff(chart.pot, r, I2 * I2) - E > 1e-10 * scale)
            throw ChartError("radial_integral: V_eff exceeds E inside the component");
    }
    detail::RadialIntegrator ri{chart.pot, E, I2 * I2};
    const double val = ri.run(weight, rmin, rmax, cps);
    if (converged) *converged = ri.converged;
    return val;
}

/// Radial action I1 = G(E, I2) = (1/pi) Int sqrt(2(E - V_eff)) dr.
inline double action_G(const ActionChart& chart, double E, double I2) {
    const Potential& p = chart.pot;
    const double ell = I2 * I2;
    auto w = [&](double r) { return std::fmax(2 * (E - veff(p, r, ell)), 0.0); };
    return radial_integral(chart, E, I2, w) / M_PI;
}

/// Frequencies at one chart point, by 4-point central differences of G.
struct Frequencies {
    double omega1 = 0, omega2 = 0;
    bool degraded = false;   ///< a stencil had to shrink or go one-sided
};

namespace detail {

/// One-sided insets from the chart's energy edges, floored above the ulp
/// scale of the edge values so thin charts still present a nonempty range.
inline std::pair<double, double> energy_insets(double bot, double top) {
    const double height = top - bot;
    const double lo = std::fmax(1e-12 * height, 1e-14 * std::fabs(bot) + 1e-300);
    const double hi = std::fmax(1e-12 * height, 1e-14 * std::fabs(top) + 1e-300);
    return {lo, hi};
}

/// 4-point central first derivative (exact through 4th-degree terms).
inline double stencil4(const std::function<double(double)>& f, double x, double h) {
    return (f(x - 2 * h) - 8 * f(x - h) + 8 * f(x + h) - f(x + 2 * h)) / (12 * h);
}

/// One-sided 3-point first derivative, for edges.
inline double stencil_onesided(const std::function<double(double)>& f, double x, double h) {
    return (-3 * f(x) + 4 * f(x + h) - f(x + 2 * h)) / (2 * h);
}

inline double dV0_dI2(const ActionChart& chart, double I2) {
    const CriticalPoint bot = chart_bottom(chart, I2);
    return I2 / (bot.r0 * bot.r0);
}

inline double d2V0_dI22(const ActionChart& chart, double I2) {
    const CriticalPoint bot = chart_bottom(chart, I2);
    const double r0 = bot.r0, ell = I2 * I2;
    const double vp = chart.pot.deriv(r0, 1);
    const double gp3 = 3 + r0 * chart.pot.deriv(r0, 2) / vp;
    return 1.0 / (r0 * r0) - 4 * ell / (std::pow(r0, 5) * vp * gp3);
}

}  // namespace detail

/// dG/dE at fixed I2.  Step choice per the chart geometry; one-sided with a
/// degraded flag when the point sits against a chart edge.
inline double dG_dE(const ActionChart& chart, double E, double I2, bool* degraded = nullptr) {
    const double bot = chart_bottom_level(chart, I2);
    const double top = detail::top_level_from(chart, chart_pattern_at(chart, I2));
    const double height = std::isfinite(top) ? top - bot : 4 * (E - bot);
    const double room = std::isfinite(top) ? std::fmin(E - bot, top - E) : E - bot;
    double h = std::fmax(1e-6 * height, 1e-3 * room);
    h = std::fmin(h, 0.24 * room);
    auto g = [&](double e) { return action_G(chart, e, I2); };
    if (h > 1e-13 * height)
        return detail::stencil4(g, E, h);
    if (degraded) *degraded = true;
    // pinned against one chart edge: one-sided stencil toward the open side
    const double up = std::isfinite(top) ? top - E : E - bot;
    const double down = E - bot;
    const double h1 = 0.24 * std::fmax(std::fmax(up, down), 1e-13 * height);
    return detail::stencil_onesided(g, E, up >= down ? h1 : -h1);
}

/// (omega1, omega2) = (dh/dI1, dh/dI2) at energy E and momentum I2.
/// omega1 = (dG/dE)^-1; omega2 = -dG/dI2 * omega1, with the extra dV0/dI2
/// transport term on charts whose bottom is a barrier top (G is sampled at
/// fixed Ebar = E - V0 there).
inline Frequencies frequencies(const ActionChart& chart, double E, double I2) {
    Frequencies out;
    const double dGdE = dG_dE(chart, E, I2, &out.degraded);
    if (!(dGdE > 0))
        throw ChartError("frequencies: dG/dE must be positive inside a chart");
    out.omega1 = 1.0 / dGdE;

    const double room2 = std::fmin(I2 - chart.p_lo, chart.p_hi - I2);
    const double width = chart.p_hi - chart.p_lo;
    // omega2 varies on the I2 scale, not on the distance to the band edge
    double k = std::fmax(1e-6 * width, 2e-3 * I2);
    k = std::fmin(k, 0.24 * room2);

    const bool maxchart = chart.bottom_is_max;
    const double Ebar = E - chart_bottom_level(chart, I2);
    auto g_of_I2 = [&](double i2) {
        const double base = maxchart ? chart_bottom_level(chart, i2) : 0.0;
        return action_G(chart, maxchart ? base + Ebar : E, i2);
    };
    // the displaced chart must still contain the sample energy
    auto valid = [&](double kk) {
        for (double i2 : {I2 - 2 * kk, I2 - kk, I2 + kk, I2 + 2 * kk}) {
            if (!chart.contains_momentum(i2)) return false;
            const double b = chart_bottom_level(chart, i2);
            const double t = detail::top_level_from(chart, chart_pattern_at(chart, i2));
            const double e = maxchart ? b + Ebar : E;
            if (!(e > b) || !(e < t)) return false;
        }
        return true;
    };
    int shrink = 0;
    while (!valid(k) && shrink < 40) { k *= 0.5; ++shrink; }
    if (shrink == 40)
        throw ChartError("frequencies: no admissible I2 stencil");
    if (shrink > 20) out.degraded = true;

    const double dGdI2 = detail::stencil4(g_of_I2, I2, k);
    out.omega2 = -dGdI2 * out.omega1 + (maxchart ? detail::dV0_dI2(chart, I2) : 0.0);
    return out;
}

/// Energy with G(E, I2) = I1: monotone bisection bracketing followed by
/// secant polish.
inline double invert_h(const ActionChart& chart, double I1, double I2) {
    const double bot = chart_bottom_level(chart, I2);
    double top = detail::top_level_from(chart, chart_pattern_at(chart, I2));
    const double scale_I = std::fabs(I1) + std::fabs(I2) + 1e-12;

    double elo, ehi;
    if (std::isfinite(top)) {
        const auto [dlo, dhi] = detail::energy_insets(bot, top);
        elo = bot + dlo;
        ehi = top - dhi;
        if (!(elo < ehi))
            throw DomainError("invert_h: chart energy range too thin");
    } else {
        elo = bot + 1e-13 * (std::fabs(bot) + 1);
        ehi = bot + (std::fabs(bot) + 1);
        while (action_G(chart, ehi, I2) < I1) {
            ehi = bot + 2 * (ehi - bot);
            if (!(ehi < std::numeric_limits<double>::max() / 4))
                throw DomainError("invert_h: I1 out of range");
        }
    }
    double glo = action_G(chart, elo, I2) - I1;
    double ghi = action_G(chart, ehi, I2) - I1;
    if (glo > 0 || ghi < 0)
        throw DomainError("invert_h: I1 outside the chart action range");

    for (int i = 0; i < 24; ++i) {   // bisection: a safe bracket for secant
        const double em = 0.5 * (elo + ehi);
        const double gm = action_G(chart, em, I2) - I1;
        if (gm == 0) return em;
        if ((gm > 0) == (ghi > 0)) { ehi = em; ghi = gm; }
        else { elo = em; glo = gm; }
        if (std::fabs(gm) < tol::invert_rel * scale_I && (ehi - elo) < 1e-9 * (std::fabs(em) + 1))
            break;
    }
    double e0 = elo, e1 = ehi, f0 = glo, f1 = ghi;
    for (int i = 0; i < 40; ++i) {
        if (f1 == f0) break;
        const double e2 = e1 - f1 * (e1 - e0) / (f1 - f0);
        if (!(e2 > elo) || !(e2 < ehi)) break;
        const double f2 = action_G(chart, e2, I2) - I1;
        e0 = e1; f0 = f1; e1 = e2; f1 = f2;
        if (std::fabs(f2) < tol::invert_rel * scale_I) break;
    }
    return e1;
}

/// Result of the near-barrier log fit I1(Ebar) ~ -(a Ebar + b Ebar^2) ln Ebar
/// + c + d Ebar + e Ebar^2.
struct LogAsymptotics {
    double lambda_fit = 0;     ///< 1/(pi a): barrier frequency recovered from the fit
    double lambda_check = 0;   ///< sqrt(-curvature) of the barrier, for comparison
    double I1_limit = 0;       ///< extrapolated finite limit G1(0, I2)
    double leading_coef = 0;   ///< a, to compare with 1/(pi lambda)
    double quadratic_coef = 0; ///< b
    double resid_rms = 0;
    bool degraded = false;
};

/// Fits the logarithmic action asymptotics above a chart-bottom maximum and
/// recovers the barrier curvature frequency and the finite action limit.
inline LogAsymptotics fit_log_asymptotics(const ActionChart& chart, double I2,
                                          const std::vector<double>& ebar_samples) {
    if (!chart.bottom_is_max)
        throw DomainError("fit_log_asymptotics: chart bottom must be a maximum");
    if (ebar_samples.size() < 6)
        throw AnalysisError("fit_log_asymptotics: need at least 6 samples");
    const CriticalPoint bot = chart_bottom(chart, I2);
    const double top = chart_top_level(chart, I2);
    const double height = (std::isfinite(top) ? top : 0) - bot.level;

    LogAsymptotics out;
    out.lambda_check = std::sqrt(std::fmax(-bot.curvature, 0.0));

    const std::size_t m = ebar_samples.size();
    std::vector<double> A(m * 5), y(m);
    double ymin = std::numeric_limits<double>::infinity(), ymax = -ymin;
    for (std::size_t i = 0; i < m; ++i) {
        double eb = ebar_samples[i];
        if (eb < tol::ebar_floor * height) {
            eb = tol::ebar_floor * height;
            out.degraded = true;
        }
        const double I1 = action_G(chart, bot.level + eb, I2);
        const double ln = std::log(eb);
        A[i * 5 + 0] = -eb * ln;
        A[i * 5 + 1] = -eb * eb * ln;
        A[i * 5 + 2] = 1.0;
        A[i * 5 + 3] = eb;
        A[i * 5 + 4] = eb * eb;
        y[i] = I1;
        ymin = std::fmin(ymin, I1);
        ymax = std::fmax(ymax, I1);
    }
    const std::vector<double> c = lsq_solve(A, y, m, 5);
    double ss = 0;
    for (std::size_t i = 0; i < m; ++i) {
        double fit = 0;
        for (int j = 0; j < 5; ++j) fit += A[i * 5 + j] * c[j];
        ss += (y[i] - fit) * (y[i] - fit);
    }
    out.resid_rms = std::sqrt(ss / m);
    const double spread = ymax - ymin;
    if (out.resid_rms > 1e-3 * (spread + 1e-300))
        throw AnalysisError("fit_log_asymptotics: fit residual too large (chart bug or degenerate maximum)");
    out.leading_coef = c[0];
    out.quadratic_coef = c[1];
    out.lambda_fit = 1.0 / (M_PI * c[0]);
    out.I1_limit = c[2];
    return out;
}

}  // namespace cforce

#endif
