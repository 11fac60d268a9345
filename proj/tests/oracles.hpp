// Test-only oracles: independent closed forms and quadratures used to pin
// expected values.  Everything here is deliberately written without touching
// the library's own evaluation paths.
#ifndef CENTRALFORCE_TEST_ORACLES_HPP
#define CENTRALFORCE_TEST_ORACLES_HPP

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "centralforce/birkhoff.hpp"

namespace oracle {

// ---- Kepler closed forms (V = -k/r) ----

inline double kepler_action(double E, double I2, double k = 1.0) {
    // G(E, I2) = k/sqrt(-2E) - I2 for E < 0
    return k / std::sqrt(-2 * E) - I2;
}

inline double kepler_omega(double E) {   // omega1 = omega2 for k = 1
    return std::pow(-2 * E, 1.5);
}

/// turning points: roots of -k/r + ell/(2 r^2) = E  (quadratic in r)
inline std::pair<double, double> kepler_turning_points(double E, double ell, double k = 1.0) {
    // 2 E r^2 + 2 k r - ell = 0
    const double disc = std::sqrt(4 * k * k + 8 * E * ell);
    const double r1 = (-2 * k + disc) / (4 * E), r2 = (-2 * k - disc) / (4 * E);
    return {std::fmin(r1, r2), std::fmax(r1, r2)};
}

// ---- Harmonic closed forms (V = k r^2) ----

inline double harmonic_action(double E, double I2, double k = 1.0) {
    const double Omega = std::sqrt(2 * k);
    return E / (2 * Omega) - I2 / 2;
}

/// turning points: k u^2 - E u + ell/2 = 0 with u = r^2
inline std::pair<double, double> harmonic_turning_points(double E, double ell, double k = 1.0) {
    const double disc = std::sqrt(E * E - 2 * k * ell);
    const double u1 = (E - disc) / (2 * k), u2 = (E + disc) / (2 * k);
    return {std::sqrt(u1), std::sqrt(u2)};
}

// ---- independent Lennard-Jones-Gauss evaluator ----
// V(r) = eps ((sigma/r)^12 - 2 (sigma/r)^6) - eg exp(-(r-rg)^2/(2 sg^2)),
// written through exp/log instead of pow chains.
inline double ljg_value(double r, double eps, double sigma, double eg, double rg, double sg) {
    const double u = std::exp(6 * (std::log(sigma) - std::log(r)));   // (sigma/r)^6
    const double z = (r - rg) / sg;
    return eps * (u * u - 2 * u) - eg * std::exp(-0.5 * z * z);
}

// ---- dense-grid critical point finder (bisection only) ----
inline std::vector<double> critical_radii_dense(const std::function<double(double)>& veff_dr,
                                                double lo, double hi, int n = 10000) {
    std::vector<double> out;
    double x0 = lo, f0 = veff_dr(lo);
    for (int i = 1; i <= n; ++i) {
        const double x1 = lo * std::pow(hi / lo, double(i) / n);
        const double f1 = veff_dr(x1);
        if ((f0 > 0) != (f1 > 0)) {
            double a = x0, b = x1;
            for (int it = 0; it < 200; ++it) {
                const double m = 0.5 * (a + b);
                if ((veff_dr(m) > 0) == (f0 > 0)) a = m; else b = m;
            }
            out.push_back(0.5 * (a + b));
        }
        x0 = x1;
        f0 = f1;
    }
    return out;
}

// ---- independent singular quadrature (composite Simpson after sin^2 map) ----
// integral of w(r)/sqrt(2(E - Veff(r))) between the turning points rm, rM.
inline double radial_quad_simpson(const std::function<double(double)>& veff,
                                  const std::function<double(double)>& w,
                                  double E, double rm, double rM, int n = 1 << 15) {
    const double d = rM - rm;
    // endpoint limits: near a turning point E - Veff ~ |Veff'| (r - rt), so
    // the substituted integrand tends to w(rt) sqrt(2 d / |Veff'(rt)|)
    const double dr = 1e-7 * (rM - rm);
    const double slope_m = std::fabs((veff(rm + dr) - veff(rm - dr)) / (2 * dr));
    const double slope_M = std::fabs((veff(rM + dr) - veff(rM - dr)) / (2 * dr));
    const double f0 = w(rm) * std::sqrt(2 * d / slope_m);
    const double f1 = w(rM) * std::sqrt(2 * d / slope_M);
    auto f = [&](double phi) {
        const double sp = std::sin(phi);
        const double r = rm + d * sp * sp;
        const double kin = 2 * (E - veff(r));
        if (kin <= 0) return phi < M_PI / 4 ? f0 : f1;
        return w(r) * d * std::sin(2 * phi) / std::sqrt(kin);
    };
    // composite Simpson over [0, pi/2]
    const double h = (M_PI / 2) / n;
    double s = f0 + f1;
    for (int i = 1; i < n; ++i) s += f(i * h) * (i % 2 ? 4 : 2);
    return s * h / 3;
}

/// apsidal angle Delta theta = Int (ptheta/r^2) / sqrt(2(E - Veff)) dr;
/// the frequency ratio is nu = pi / Delta theta.
inline double apsidal_angle(const std::function<double(double)>& veff,
                            double ptheta, double E, double rm, double rM) {
    return radial_quad_simpson(veff, [&](double r) { return ptheta / (r * r); }, E, rm, rM);
}

// ---- second, independently derived transcription of the circular-orbit
// expansion coefficients (Horner-factored in g; the library's version keeps
// the flat term list).  Used for the dual-transcription fuzz. ----

inline double nu1_alt(const cforce::CircularOrbitData& d) {
    const double g = d.g0;
    const double p = d.r0 * d.g1, q = d.r0 * d.r0 * d.g2;
    const double num = (((-2 * g - 14) * g - (26 + p)) * g + (6 + 7 * p + 3 * q)) * g +
                       (36 + 30 * p - 5 * p * p + 9 * q);
    const double den = 24 * std::pow(d.r0, 1.5) * (g + 3) * (g + 3) * std::sqrt(d.Vp);
    return num / den;
}

inline double nu2_alt(const cforce::CircularOrbitData& d) {
    const double g = d.g0;
    const double p = d.r0 * d.g1;
    const double q = d.r0 * d.r0 * d.g2;
    const double s = d.r0 * d.r0 * d.r0 * d.g3;
    const double t = d.r0 * d.r0 * d.r0 * d.r0 * d.g4;
    const double p2 = p * p, p3 = p2 * p, p4 = p2 * p2, q2 = q * q;
    const double c8 = 20;
    const double c7 = 376;
    const double c6 = 3036 + 68 * p;
    const double c5 = 13408 + 600 * p - 84 * q;
    const double c4 = 33500 + 624 * p + 129 * p2 - 1344 * q - 48 * s;
    const double c3 = 40920 - 9464 * p + 1398 * p2 + 162 * p * q - 7104 * q - 144 * s + 24 * t;
    const double c2 = 1188 - 39492 * p + 4053 * p2 - 94 * p3 - 14040 * q - 240 * p * q -
                      51 * q2 + 1296 * s - 168 * p * s + 216 * t;
    const double c1 = -52272 - 57888 * p + 504 * p2 + 586 * p3 - 3564 * q - 5814 * p * q +
                      450 * p2 * q - 306 * q2 + 6480 * s - 1008 * p * s + 648 * t;
    const double c0 = -40176 - 28080 * p - 7668 * p2 + 2604 * p3 - 235 * p4 + 12312 * q -
                      10908 * p * q + 1350 * p2 * q - 459 * q2 + 7776 * s - 1512 * p * s +
                      648 * t;
    const double num =
        (((((((c8 * g + c7) * g + c6) * g + c5) * g + c4) * g + c3) * g + c2) * g + c1) * g + c0;
    const double den = 2304 * std::pow(d.r0, 3) * std::pow(g + 3, 4.5) * d.Vp;
    return num / den;
}

// ---- standard LJG test fixture: a double-well interaction potential ----
inline std::map<std::string, double> ljg_params() {
    return {{"eps", 1.0},
            {"sigma", 1.0},
            {"eps_gauss", 1.8},
            {"r_gauss", 1.52},
            {"sigma_gauss", 0.14142135623730951}};
}

}  // namespace oracle

#endif
