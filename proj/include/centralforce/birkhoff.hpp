#ifndef CENTRALFORCE_BIRKHOFF_HPP
#define CENTRALFORCE_BIRKHOFF_HPP

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "actions.hpp"
#include "arnold.hpp"
#include "errors.hpp"
#include "fit.hpp"
#include "potential.hpp"

namespace cforce {

/// Everything the circular-orbit expansion needs at one radius: V'(r0), g and
/// its first four derivatives, and the I2 -> r0 conversion factor R.
struct CircularOrbitData {
    double r0 = 0;
    double Vp = 0;                              ///< V'(r0)
    double g0 = 0, g1 = 0, g2 = 0, g3 = 0, g4 = 0;
    double R = 0;                               ///< 2 / ((3+g) sqrt(r0 V'))
};

/// Builds CircularOrbitData from analytic potential derivatives.  g = rV''/V'
/// is differentiated through order 4 by the Leibniz quotient recursion, which
/// reaches d^6 V/dr^6.
inline CircularOrbitData circular_orbit_data(const Potential& p, double r0) {
    CircularOrbitData d;
    d.r0 = r0;
    double V[7];
    for (int n = 0; n <= 6; ++n) V[n] = p.deriv(r0, n);
    d.Vp = V[1];
    if (d.Vp == 0)
        throw SingularPointError("circular_orbit_data: V'(r0) = 0", r0);
    // A = r V'', B = V'; g = A/B, and A^(n) = r V^(n+2) + n V^(n+1)
    double A[5], B[5], g[5];
    for (int n = 0; n <= 4; ++n) {
        A[n] = r0 * V[n + 2] + n * V[n + 1];
        B[n] = V[n + 1];
    }
    const double binom[5][5] = {{1, 0, 0, 0, 0},
                                {1, 1, 0, 0, 0},
                                {1, 2, 1, 0, 0},
                                {1, 3, 3, 1, 0},
                                {1, 4, 6, 4, 1}};
    for (int n = 0; n <= 4; ++n) {
        double s = A[n];
        for (int k = 0; k < n; ++k) s -= binom[n][k] * g[k] * B[n - k];
        g[n] = s / B[0];
    }
    d.g0 = g[0]; d.g1 = g[1]; d.g2 = g[2]; d.g3 = g[3]; d.g4 = g[4];
    d.R = 2.0 / ((3 + d.g0) * std::sqrt(r0 * d.Vp));
    return d;
}

/// Numerator/denominator of a transcribed expansion coefficient, kept apart
/// so callers can clear the singular denominator.  `mag` accumulates the
/// absolute sizes of the numerator terms: the natural scale for roundoff in
/// these heavily cancelling sums.
struct RationalParts {
    double num = 0, den = 1;
    double mag = 0;
    double value() const { return num / den; }
};

namespace detail {

/// adds a numerator term while tracking the cancellation scale
inline void acc(RationalParts& p, double term) {
    p.num += term;
    p.mag += std::fabs(term);
}

}  // namespace detail

/// nu1: first-order coefficient of nu(I1) at a circular orbit.
inline RationalParts nu1_parts(const CircularOrbitData& d) {
    const double r0 = d.r0, g = d.g0, gp = d.g1, gpp = d.g2;
    RationalParts out;
    detail::acc(out, 36);
    detail::acc(out, 9 * r0 * r0 * gpp);
    detail::acc(out, -g * g * (r0 * gp + 26));
    detail::acc(out, g * (3 * r0 * r0 * gpp + 7 * r0 * gp + 6));
    detail::acc(out, 30 * r0 * gp);
    detail::acc(out, -5 * r0 * r0 * gp * gp);
    detail::acc(out, -2 * g * g * g * g);
    detail::acc(out, -14 * g * g * g);
    out.den = 24 * std::pow(r0, 1.5) * (g + 3) * (g + 3) * std::sqrt(d.Vp);
    return out;
}

/// nu2: second-order coefficient of nu(I1) at a circular orbit.
inline RationalParts nu2_parts(const CircularOrbitData& d) {
    const double r0 = d.r0, g = d.g0;
    const double gp = d.g1, gpp = d.g2, g3 = d.g3, g4 = d.g4;
    const double r2 = r0 * r0, r3 = r2 * r0, r4 = r2 * r2;
    const double g_2 = g * g, g_3 = g_2 * g, g_4 = g_2 * g_2;
    const double g_5 = g_4 * g, g_6 = g_4 * g_2, g_7 = g_6 * g, g_8 = g_4 * g_4;
    RationalParts out;
    detail::acc(out, -235 * r4 * gp * gp * gp * gp);
    detail::acc(out, 2604 * r3 * gp * gp * gp);
    detail::acc(out, 4 * g_6 * (17 * r0 * gp + 759));
    detail::acc(out, g_5 * (-84 * r2 * gpp + 600 * r0 * gp + 13408));
    detail::acc(out, 54 * r2 * gp * gp * (25 * r2 * gpp - 142));
    detail::acc(out, -27 * (17 * r4 * gpp * gpp - 456 * r2 * gpp -
                            24 * (r4 * g4 + 12 * r3 * g3 - 62)));
    detail::acc(out, g_4 * (-48 * r3 * g3 - 1344 * r2 * gpp + 129 * r2 * gp * gp +
                            624 * r0 * gp + 33500));
    detail::acc(out, -108 * r0 * gp * (14 * r3 * g3 + 101 * r2 * gpp + 260));
    detail::acc(out, 2 * g_3 * (699 * r2 * gp * gp + r0 * gp * (81 * r2 * gpp - 4732) +
                                12 * (r4 * g4 - 6 * r3 * g3 - 296 * r2 * gpp + 1705)));
    detail::acc(out, -g_2 * (94 * r3 * gp * gp * gp - 4053 * r2 * gp * gp +
                             3 * (17 * r4 * gpp * gpp + 4680 * r2 * gpp -
                                  36 * (2 * r4 * g4 + 12 * r3 * g3 + 11)) +
                             12 * r0 * gp * (14 * r3 * g3 + 20 * r2 * gpp + 3291)));
    detail::acc(out, 2 * g * (293 * r3 * gp * gp * gp +
                              9 * r2 * gp * gp * (25 * r2 * gpp + 28) -
                              9 * (-36 * r4 * g4 - 360 * r3 * g3 + 17 * r4 * gpp * gpp +
                                   198 * r2 * gpp + 2904) -
                              9 * r0 * gp * (56 * r3 * g3 + 323 * r2 * gpp + 3216)));
    detail::acc(out, 20 * g_8);
    detail::acc(out, 376 * g_7);
    out.den = 2304 * r3 * std::pow(g + 3, 4.5) * d.Vp;
    return out;
}

/// (nu0, nu1, nu2) of the circular-orbit frequency-ratio expansion
/// nu(I1) = nu0 + nu1 I1 + nu2 I1^2 + ...
struct NuCoefficients {
    double nu0 = 0, nu1 = 0, nu2 = 0;
};

inline NuCoefficients nu_coefficients(const CircularOrbitData& d) {
    if (!(3 + d.g0 > 0))
        throw DomainError("nu_coefficients: 3 + g(r0) must be positive (minimum-type orbit)");
    NuCoefficients c;
    c.nu0 = std::sqrt(3 + d.g0);
    c.nu1 = nu1_parts(d).value();
    c.nu2 = nu2_parts(d).value();
    return c;
}

namespace detail {

/// 4-point central derivative of f along the radius, step 1e-4 r0.
inline double ddr0(const std::function<double(double)>& f, double r0) {
    const double h = 1e-4 * r0;
    return (f(r0 - 2 * h) - 8 * f(r0 - h) + 8 * f(r0 + h) - f(r0 + 2 * h)) / (12 * h);
}

}  // namespace detail

/// Right-hand sides of the order-1 and order-2 consistency relations, with
/// the r0 derivatives taken by central finite differences of the transcribed
/// coefficients along the radius.
struct BurgersRhs {
    double G1 = 0, G2 = 0;
    double res1 = 0, res2 = 0;   ///< nu1 - G1, nu2 - G2
    NuCoefficients nu;
};

inline BurgersRhs rhs_G1_G2(const Potential& p, double r0) {
    const CircularOrbitData d = circular_orbit_data(p, r0);
    BurgersRhs out;
    out.nu = nu_coefficients(d);
    auto nu0_of = [&p](double r) { return std::sqrt(3 + g_of(p, r)); };
    auto nu1_of = [&p](double r) { return nu1_parts(circular_orbit_data(p, r)).value(); };
    const double dnu0 = detail::ddr0(nu0_of, r0);
    const double dnu1 = detail::ddr0(nu1_of, r0);
    out.G1 = d.R * out.nu.nu0 * dnu0;
    out.G2 = 0.5 * d.R * (out.nu.nu1 * dnu0 + out.nu.nu0 * dnu1);
    out.res1 = out.nu.nu1 - out.G1;
    out.res2 = out.nu.nu2 - out.G2;
    return out;
}

/// Comparison of fitted nu(I1) polynomial coefficients against the
/// closed-form circular-orbit values.
struct ExpansionCheck {
    NuCoefficients closed;            ///< from nu_coefficients at r0(I2)
    NuCoefficients fitted;            ///< from the small-I1 polynomial fit
    double window_shift[3] = {0, 0, 0};   ///< coefficient change under window shrink
    bool inconclusive = false;
    double r0 = 0;
};

/// Fits nu(I1, I2 fixed) on a small-I1 window and compares with the
/// closed-form expansion.  The window is shrunk once and refitted; the
/// coefficient drift is reported as a convergence diagnostic.
inline ExpansionCheck numeric_expansion_check(const ActionChart& chart, double I2,
                                              double win_lo = 1e-5, double win_hi = 1e-3,
                                              int n_pts = 12) {
    if (chart.bottom_is_max)
        throw DomainError("numeric_expansion_check: needs a min-bottomed chart");
    ExpansionCheck out;
    const CriticalPoint bot = chart_bottom(chart, I2);
    out.r0 = bot.r0;
    out.closed = nu_coefficients(circular_orbit_data(chart.pot, bot.r0));

    auto fit_window = [&](double lo, double hi) {
        std::vector<double> I1s(n_pts), nus(n_pts);
        const double ratio = std::pow(hi / lo, 1.0 / (n_pts - 1));
        for (int i = 0; i < n_pts; ++i) {
            const double I1 = I2 * lo * std::pow(ratio, i);
            const Frequencies f = detail::freq_at_actions(chart, I1, I2);
            I1s[i] = I1;
            nus[i] = f.omega1 / f.omega2;
        }
        return polyfit(I1s, nus, 3);
    };
    const std::vector<double> cfull = fit_window(win_lo, win_hi);
    const std::vector<double> chalf = fit_window(win_lo, 0.5 * win_hi);
    out.fitted.nu0 = chalf[0];
    out.fitted.nu1 = chalf[1];
    out.fitted.nu2 = chalf[2];
    for (int k = 0; k < 3; ++k) out.window_shift[k] = std::fabs(chalf[k] - cfull[k]);
    // window-stability guard: the shrunk fit must agree with the full one
    const double s0 = std::fabs(out.fitted.nu0);
    if (out.window_shift[0] > 1e-3 * s0)
        out.inconclusive = true;
    return out;
}

/// One root of the homogeneous-potential degeneracy equation res1(c) = 0.
struct ExponentRoot {
    double c = 0;
    bool even_multiplicity = false;   ///< the residual touches zero without sign change
    bool excluded = false;            ///< expansion degenerates: the r^-2 family barred by (H2)
};

struct ExponentScan {
    std::vector<ExponentRoot> roots;
    double max_r0_spread = 0;   ///< residual disagreement across probe radii
};

namespace detail {

/// Cleared-denominator residual of nu1 = G1 for the homogeneous family
/// g == c (all g derivatives vanish), evaluated at probe radius r0 with
/// V'(r0) = r0^c.  Multiplying res1 by the nu1 denominator makes the
/// residual a polynomial in c, finite across the whole scan window.
inline double homogeneous_residual(double c, double r0) {
    CircularOrbitData d;
    d.r0 = r0;
    d.Vp = std::pow(r0, c);
    d.g0 = c;
    d.g1 = d.g2 = d.g3 = d.g4 = 0;
    d.R = 2.0 / ((3 + c) * std::sqrt(r0 * d.Vp));
    const RationalParts n1 = nu1_parts(d);
    // G1 = R nu0 dnu0/dr0 = R * (1/2) d(3+g)/dr0, identically zero along a
    // homogeneous branch; G1 * den reduces to 24 r0 (3+c) dg, which stays
    // finite across the scan (including 3+c = 0)
    auto g_along = [c](double) { return c; };
    const double dg = ddr0([&](double r) { return 3 + g_along(r); }, r0);
    return n1.num - 24 * r0 * (3 + c) * dg;
}

}  // namespace detail

/// Scans the homogeneous-family residual over c in [lo, hi] and returns its
/// roots: sign changes refined by bisection, plus even-multiplicity touches
/// located through the residual derivative.  Residual values are checked for
/// r0-independence at three radii.
inline ExponentScan find_degenerate_exponents(double lo = -3.5, double hi = 2.0,
                                              double step = 1e-3) {
    if (step > 1e-3)
        throw AnalysisError("find_degenerate_exponents: step must be <= 1e-3");
    ExponentScan scan;
    const double probes[3] = {0.5, 1.0, 2.0};
    auto res = [&](double c) { return detail::homogeneous_residual(c, probes[1]); };

    const int n = int(std::ceil((hi - lo) / step));
    std::vector<double> cs(n + 1), Ps(n + 1);
    double pscale = 0;
    for (int i = 0; i <= n; ++i) {
        cs[i] = lo + (hi - lo) * i / n;
        Ps[i] = res(cs[i]);
        pscale = std::fmax(pscale, std::fabs(Ps[i]));
    }
    for (double c : {lo, 0.5 * (lo + hi), hi}) {
        const double a = detail::homogeneous_residual(c, probes[0]);
        const double b = detail::homogeneous_residual(c, probes[2]);
        scan.max_r0_spread = std::fmax(scan.max_r0_spread, std::fabs(a - b));
    }
    if (scan.max_r0_spread > 1e-8 * (1 + pscale))
        throw AnalysisError("find_degenerate_exponents: residual depends on r0 (transcription error)");

    auto push_root = [&](double c, bool even) {
        ExponentRoot root;
        root.c = c;
        root.even_multiplicity = even;
        // at 3+c = 0 the circular-orbit curvature (V'/r)(3+g) degenerates:
        // the r^-2 family excluded by the hypotheses
        root.excluded = std::fabs(3 + c) < 1e-6;
        scan.roots.push_back(root);
    };

    const double fd_h = 1e-3;
    auto dres = [&](double c) {
        return (res(c - 2 * fd_h) - 8 * res(c - fd_h) + 8 * res(c + fd_h) - res(c + 2 * fd_h)) /
               (12 * fd_h);
    };

    for (int i = 0; i < n; ++i) {
        if ((Ps[i] > 0) != (Ps[i + 1] > 0)) {
            const double c = brent(res, cs[i], cs[i + 1], 1e-13);
            push_root(c, false);
        }
    }
    // touch roots: local minima of |P| well below the scan scale, no sign change
    for (int i = 1; i < n; ++i) {
        const double a = std::fabs(Ps[i - 1]), b = std::fabs(Ps[i]), c2 = std::fabs(Ps[i + 1]);
        if (b <= a && b <= c2 && b < 1e-4 * pscale &&
            (Ps[i - 1] > 0) == (Ps[i] > 0) && (Ps[i] > 0) == (Ps[i + 1] > 0)) {
            const double d0 = dres(cs[i - 1]), d1 = dres(cs[i + 1]);
            if ((d0 > 0) == (d1 > 0)) continue;
            const double c = brent(dres, cs[i - 1], cs[i + 1], 1e-13);
            if (std::fabs(res(c)) < 1e-7 * pscale)
                push_root(c, true);
        }
    }
    std::sort(scan.roots.begin(), scan.roots.end(),
              [](const ExponentRoot& a, const ExponentRoot& b) { return a.c < b.c; });
    return scan;
}

}  // namespace cforce

#endif
