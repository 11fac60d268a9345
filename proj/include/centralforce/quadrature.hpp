#ifndef CENTRALFORCE_QUADRATURE_HPP
#define CENTRALFORCE_QUADRATURE_HPP

#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <mutex>
#include <vector>

namespace cforce {

/// Gauss-Legendre rule on (-1,1): nodes and weights.
struct GaussRule {
    std::vector<double> x, w;
};

namespace detail {

/// Computes an n-point Gauss-Legendre rule by Newton iteration on the roots
/// of the Legendre polynomial, exploiting symmetry.
inline GaussRule make_gauss_rule(int n) {
    GaussRule rule;
    rule.x.resize(n);
    rule.w.resize(n);
    const int m = (n + 1) / 2;
    const double fac = M_PI / (0.5 + n);
    for (int i = 0; i < m; ++i) {
        double z = std::cos((i + 0.75) * fac), dz, tmp, pp;
        do {
            double p1 = 1.0, p2 = 0.0;
            for (int j = 1; j <= n; ++j) {
                const double p3 = p2;
                p2 = p1;
                p1 = ((2 * j - 1) * z * p2 - (j - 1) * p3) / j;
            }
            tmp = n * (z * p1 - p2);
            pp = tmp / (z * z - 1.0);
            dz = -p1 / pp;
            z += dz;
        } while (std::fabs(dz) >= std::numeric_limits<double>::epsilon());
        rule.x[i] = -z;
        rule.x[n - 1 - i] = z;
        rule.w[i] = rule.w[n - 1 - i] = 2.0 / (-tmp * pp);
    }
    return rule;
}

}  // namespace detail

/// Shared cache of Gauss-Legendre rules; safe for concurrent callers.
inline const GaussRule& gauss_rule(int n) {
    static std::map<int, GaussRule> cache;
    static std::mutex mtx;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(n);
    if (it == cache.end())
        it = cache.emplace(n, detail::make_gauss_rule(n)).first;
    return it->second;
}

/// Fixed-order Gauss-Legendre estimate of the integral of f over [a,b].
inline double gauss_integrate(const std::function<double(double)>& f,
                              double a, double b, int order) {
    const GaussRule& rule = gauss_rule(order);
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    double sum = 0;
    for (std::size_t i = 0; i < rule.x.size(); ++i)
        sum += rule.w[i] * f(mid + half * rule.x[i]);
    return sum * half;
}

/// Result of an adaptive-order integration.
struct QuadResult {
    double value = 0;
    bool converged = true;   ///< doubling reached the requested tolerance
};

/// Integrates f over [a,b] by doubling the Gauss-Legendre order until two
/// successive estimates agree to rel_tol (plus an absolute floor).
inline QuadResult gauss_adaptive(const std::function<double(double)>& f,
                                 double a, double b,
                                 double rel_tol = 1e-12,
                                 int order0 = 32, int order_max = 4096,
                                 double abs_floor = 0.0) {
    QuadResult res;
    double prev = gauss_integrate(f, a, b, order0);
    for (int n = 2 * order0; n <= order_max; n *= 2) {
        const double cur = gauss_integrate(f, a, b, n);
        if (std::fabs(cur - prev) <= rel_tol * std::fabs(cur) + abs_floor) {
            res.value = cur;
            return res;
        }
        prev = cur;
    }
    res.value = prev;
    res.converged = false;
    return res;
}

}  // namespace cforce

#endif
