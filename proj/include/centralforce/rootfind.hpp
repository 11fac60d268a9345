#ifndef CENTRALFORCE_ROOTFIND_HPP
#define CENTRALFORCE_ROOTFIND_HPP

#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <vector>

namespace cforce {

/// Brent's method on a sign-change bracket [a,b].  Tolerance is on the
/// abscissa; iteration stops at 2*eps*|x| + 0.5*xtol.
inline double brent(const std::function<double(double)>& f,
                    double a, double b, double xtol = 0.0) {
    const double eps = std::numeric_limits<double>::epsilon();
    double fa = f(a), fb = f(b);
    if (fa == 0) return a;
    if (fb == 0) return b;
    if ((fa > 0) == (fb > 0))
        throw std::invalid_argument("brent: root not bracketed");
    double c = a, fc = fa, d = b - a, e = d;
    for (int iter = 0; iter < 200; ++iter) {
        if ((fb > 0) == (fc > 0)) { c = a; fc = fa; e = d = b - a; }
        if (std::fabs(fc) < std::fabs(fb)) {
            a = b; b = c; c = a;
            fa = fb; fb = fc; fc = fa;
        }
        const double tol1 = 2 * eps * std::fabs(b) + 0.5 * xtol;
        const double xm = 0.5 * (c - b);
        if (std::fabs(xm) <= tol1 || fb == 0) return b;
        if (std::fabs(e) >= tol1 && std::fabs(fa) > std::fabs(fb)) {
            double p, q_, r_;
            const double s = fb / fa;
            if (a == c) { p = 2 * xm * s; q_ = 1 - s; }
            else {
                q_ = fa / fc; r_ = fb / fc;
                p = s * (2 * xm * q_ * (q_ - r_) - (b - a) * (r_ - 1));
                q_ = (q_ - 1) * (r_ - 1) * (s - 1);
            }
            if (p > 0) q_ = -q_;
            p = std::fabs(p);
            if (2 * p < std::fmin(3 * xm * q_ - std::fabs(tol1 * q_), std::fabs(e * q_))) {
                e = d; d = p / q_;
            } else { d = xm; e = d; }
        } else { d = xm; e = d; }
        a = b; fa = fb;
        b += (std::fabs(d) > tol1) ? d : (xm > 0 ? tol1 : -tol1);
        fb = f(b);
    }
    return b;
}

/// All sign-change roots of f on a log-spaced grid over [lo, hi], each
/// refined by brent().  Assumes finitely many roots (no root tangencies).
inline std::vector<double> roots_on_log_grid(const std::function<double(double)>& f,
                                             double lo, double hi, int n = 4096) {
    std::vector<double> out;
    const double lf = std::log(lo), step = (std::log(hi) - lf) / n;
    double x0 = lo, f0 = f(x0);
    for (int i = 1; i <= n; ++i) {
        const double x1 = (i == n) ? hi : std::exp(lf + step * i);
        const double f1 = f(x1);
        if (f0 == 0)
            out.push_back(x0);
        else if (std::isfinite(f0) && std::isfinite(f1) && (f0 > 0) != (f1 > 0))
            out.push_back(brent(f, x0, x1));
        x0 = x1; f0 = f1;
    }
    return out;
}

/// Expands a bracket away from x0 in direction sgn (+1/-1) until f changes
/// sign, starting from a tiny relative step.  Returns the refined root;
/// throws if the edge of [lo, hi] is reached first.
inline double root_marching_from(const std::function<double(double)>& f,
                                 double x0, int sgn, double lo, double hi,
                                 double first_step) {
    double s = first_step, prev = x0;
    double fprev = f(x0);
    for (int k = 0; k < 120; ++k) {
        double x = x0 + sgn * s;
        if (x <= lo || x >= hi)
            throw std::invalid_argument("root_marching_from: no sign change inside range");
        const double fx = f(x);
        if ((fx > 0) != (fprev > 0) || fx == 0)
            return fx == 0 ? x : brent(f, prev, x);
        prev = x; fprev = fx;
        s *= 2;
    }
    throw std::invalid_argument("root_marching_from: bracket expansion failed");
}

/// Golden-section maximum of f on [a,b] to relative abscissa tolerance.
inline double golden_max(const std::function<double(double)>& f,
                         double a, double b, double rtol = 1e-12) {
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
    double f1 = f(x1), f2 = f(x2);
    while (std::fabs(b - a) > rtol * (std::fabs(a) + std::fabs(b))) {
        if (f1 < f2) { a = x1; x1 = x2; f1 = f2; x2 = a + gr * (b - a); f2 = f(x2); }
        else         { b = x2; x2 = x1; f2 = f1; x1 = b - gr * (b - a); f1 = f(x1); }
    }
    return 0.5 * (a + b);
}

}  // namespace cforce

#endif
