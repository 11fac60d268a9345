#ifndef CENTRALFORCE_POTENTIAL_HPP
#define CENTRALFORCE_POTENTIAL_HPP

#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "errors.hpp"

namespace cforce {

/// Built-in radial potential families.
enum class PotentialKind {
    kepler,               ///< V = -k/r
    harmonic,             ///< V = k r^2
    power_law,            ///< V = k r^(c+1)/(c+1), c != -1
    log,                  ///< V = k ln r
    lennard_jones,        ///< V = 4 eps ((sigma/r)^12 - (sigma/r)^6)
    lennard_jones_gauss,  ///< 12-6 well minus a Gaussian well (double-well shape)
};

inline const char* to_string(PotentialKind k) {
    switch (k) {
        case PotentialKind::kepler:              return "kepler";
        case PotentialKind::harmonic:            return "harmonic";
        case PotentialKind::power_law:           return "power_law";
        case PotentialKind::log:                 return "log";
        case PotentialKind::lennard_jones:       return "lennard_jones";
        case PotentialKind::lennard_jones_gauss: return "lennard_jones_gauss";
    }
    return "?";
}

namespace detail {

/// Falling product m(m+1)...(m+n-1); the n-th derivative of r^-m carries
/// (-1)^n times this factor.
inline double pochhammer(double m, int n) {
    double p = 1;
    for (int j = 0; j < n; ++j) p *= m + j;
    return p;
}

/// n-th derivative of r^-m.
inline double inv_power_deriv(double r, double m, int n) {
    const double sgn = (n % 2 == 0) ? 1.0 : -1.0;
    return sgn * pochhammer(m, n) * std::pow(r, -m - n);
}

/// Physicists' Hermite polynomial H_n(x), n <= 6.
inline double hermite(int n, double x) {
    switch (n) {
        case 0: return 1;
        case 1: return 2 * x;
        case 2: return 4 * x * x - 2;
        case 3: return x * (8 * x * x - 12);
        case 4: return (16 * x * x - 48) * x * x + 12;
        case 5: return x * ((32 * x * x - 160) * x * x + 120);
        case 6: return ((64 * x * x - 480) * x * x + 720) * x * x - 120;
        default: throw std::invalid_argument("hermite: order > 6");
    }
}

/// n-th derivative of exp(-(r-r0)^2 / (2 s^2)).
inline double gaussian_deriv(double r, double r0, double s, int n) {
    const double x = (r - r0) / (s * M_SQRT2);
    const double sgn = (n % 2 == 0) ? 1.0 : -1.0;
    return sgn * std::pow(s * M_SQRT2, -n) * hermite(n, x) * std::exp(-x * x);
}

}  // namespace detail

/// An analytic radial potential with closed-form derivatives through order 6
/// and the hypothesis metadata needed by the momentum-interval analysis.
/// Immutable after construction; all evaluations are pure.
class Potential {
public:
    static constexpr int max_order = 6;

    PotentialKind kind = PotentialKind::kepler;
    std::string name;
    std::map<std::string, double> params;
    /// -ell_star = lim_{r->0+} r^2 V(r)/2.  -inf means the limit diverges up
    /// (hypothesis H1 still holds); +inf marks an H1 violation.
    double ell_star = 0;
    double r_lo = 1e-3, r_hi = 1e3;   ///< working range, user-overridable

    /// d^n V / dr^n for n = 0..6.
    double deriv(double r, int n) const {
        switch (kind) {
            case PotentialKind::kepler: {
                // V = -k/r
                const double k = par("k");
                return -k * detail::inv_power_deriv(r, 1, n);
            }
            case PotentialKind::harmonic: {
                const double k = par("k");
                if (n == 0) return k * r * r;
                if (n == 1) return 2 * k * r;
                if (n == 2) return 2 * k;
                return 0;
            }
            case PotentialKind::power_law: {
                const double k = par("k"), c = par("c");
                if (n == 0) return k * std::pow(r, c + 1) / (c + 1);
                double coef = k;   // V' = k r^c, then keep differentiating
                for (int j = 0; j < n - 1; ++j) coef *= c - j;
                return coef * std::pow(r, c + 1 - n);
            }
            case PotentialKind::log: {
                const double k = par("k");
                if (n == 0) return k * std::log(r);
                return k * detail::inv_power_deriv(r, 1, n - 1);   // d^n (ln r) = d^(n-1) (1/r)
            }
            case PotentialKind::lennard_jones: {
                const double e = par("eps"), s = par("sigma");
                const double s6 = std::pow(s, 6), s12 = s6 * s6;
                return 4 * e * (s12 * detail::inv_power_deriv(r, 12, n) -
                                s6 * detail::inv_power_deriv(r, 6, n));
            }
            case PotentialKind::lennard_jones_gauss: {
                const double e = par("eps"), s = par("sigma");
                const double eg = par("eps_gauss"), rg = par("r_gauss"), sg = par("sigma_gauss");
                const double s6 = std::pow(s, 6), s12 = s6 * s6;
                const double lj = e * (s12 * detail::inv_power_deriv(r, 12, n) -
                                       2 * s6 * detail::inv_power_deriv(r, 6, n));
                return lj - eg * detail::gaussian_deriv(r, rg, sg, n);
            }
        }
        throw std::logic_error("Potential::deriv: bad kind");
    }

    double operator()(double r) const { return deriv(r, 0); }

    bool in_range(double r) const { return r > r_lo && r < r_hi; }

    double par(const std::string& key) const {
        auto it = params.find(key);
        if (it == params.end())
            throw ConfigError(std::string(to_string(kind)) + ": missing parameter '" + key + "'");
        return it->second;
    }

private:
    friend Potential make_builtin(PotentialKind, std::map<std::string, double>);
};

namespace detail {

inline void require(bool ok, const std::string& msg) {
    if (!ok) throw ConfigError(msg);
}

inline void check_param_names(PotentialKind kind,
                              const std::map<std::string, double>& params,
                              std::initializer_list<const char*> allowed) {
    for (const auto& kv : params) {
        bool known = false;
        for (const char* a : allowed)
            if (kv.first == a) { known = true; break; }
        require(known, std::string(to_string(kind)) + ": unknown parameter '" + kv.first + "'");
    }
    for (const char* a : allowed)
        require(params.count(a) > 0,
                std::string(to_string(kind)) + ": missing parameter '" + std::string(a) + "'");
}

}  // namespace detail

/// Builds one of the built-in potentials, validating its parameter set and
/// filling in the analytic value of ell_star.
inline Potential make_builtin(PotentialKind kind, std::map<std::string, double> params) {
    using detail::require;
    Potential p;
    p.kind = kind;
    p.name = to_string(kind);
    p.params = std::move(params);
    const double inf = std::numeric_limits<double>::infinity();
    switch (kind) {
        case PotentialKind::kepler:
            detail::check_param_names(kind, p.params, {"k"});
            require(p.par("k") > 0, "kepler: parameter 'k' must be > 0");
            p.ell_star = 0;
            break;
        case PotentialKind::harmonic:
            detail::check_param_names(kind, p.params, {"k"});
            require(p.par("k") > 0, "harmonic: parameter 'k' must be > 0");
            p.ell_star = 0;
            break;
        case PotentialKind::power_law: {
            detail::check_param_names(kind, p.params, {"k", "c"});
            require(p.par("k") != 0, "power_law: parameter 'k' must be nonzero");
            const double c = p.par("c");
            require(c != -1, "power_law: exponent 'c' must differ from -1");
            // lim r^2 V / 2 = lim k r^(c+3) / (2(c+1))
            if (c > -3)      p.ell_star = 0;
            else if (c == -3) p.ell_star = p.par("k") / 4;
            else              p.ell_star = (p.par("k") / (c + 1) > 0) ? -inf : inf;
            break;
        }
        case PotentialKind::log:
            detail::check_param_names(kind, p.params, {"k"});
            require(p.par("k") != 0, "log: parameter 'k' must be nonzero");
            p.ell_star = 0;
            break;
        case PotentialKind::lennard_jones:
            detail::check_param_names(kind, p.params, {"eps", "sigma"});
            require(p.par("eps") > 0, "lennard_jones: parameter 'eps' must be > 0");
            require(p.par("sigma") > 0, "lennard_jones: parameter 'sigma' must be > 0");
            p.ell_star = -inf;   // repulsive core: r^2 V -> +inf
            break;
        case PotentialKind::lennard_jones_gauss:
            detail::check_param_names(kind, p.params,
                                      {"eps", "sigma", "eps_gauss", "r_gauss", "sigma_gauss"});
            require(p.par("eps") > 0, "lennard_jones_gauss: parameter 'eps' must be > 0");
            require(p.par("sigma") > 0, "lennard_jones_gauss: parameter 'sigma' must be > 0");
            require(p.par("eps_gauss") >= 0, "lennard_jones_gauss: parameter 'eps_gauss' must be >= 0");
            require(p.par("r_gauss") > 0, "lennard_jones_gauss: parameter 'r_gauss' must be > 0");
            require(p.par("sigma_gauss") > 0, "lennard_jones_gauss: parameter 'sigma_gauss' must be > 0");
            p.ell_star = -inf;
            break;
    }
    return p;
}

inline Potential make_builtin(PotentialKind kind) {
    return make_builtin(kind, std::map<std::string, double>{});
}

/// g(r) = r V''(r) / V'(r); constant exactly when the potential is homogeneous.
inline double g_of(const Potential& p, double r) {
    if (!p.in_range(r))
        throw DomainError("g_of: r outside working range");
    const double vp = p.deriv(r, 1);
    const double num = r * p.deriv(r, 2);
    if (vp == 0 || std::fabs(num) > 1e15 * std::fabs(vp))
        throw SingularPointError("g_of: V'(r) = 0", r);
    return num / vp;
}

/// Outcome of the (H1)-(H3) screening.  Failures are reported, not thrown.
struct HypothesisReport {
    bool h1_holds = false;
    double ell_star = 0;
    bool h2_holds = false;
    double h2_witness_r = 0;          ///< a radius with r^3 V'(r) > max{0, ell_star}
    /// (ell, number of grid sign changes of r^3 V'(r) - ell): evidence for (H3)
    std::vector<std::pair<double, int>> h3_root_counts;
};

/// Screens the potential against hypotheses (H1)-(H3) on a probe grid.
/// (H3) is sampled evidence only: the root count of r^3 V'(r) = ell at a few
/// ell values, each necessarily finite on a finite grid.
inline HypothesisReport check_hypotheses(const Potential& p, const std::vector<double>& probe_grid) {
    HypothesisReport rep;
    rep.ell_star = p.ell_star;
    rep.h1_holds = !(std::isinf(p.ell_star) && p.ell_star > 0);
    const double floor = std::fmax(0.0, p.ell_star);

    std::vector<double> w(probe_grid.size());
    double wmax = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < probe_grid.size(); ++i) {
        const double r = probe_grid[i];
        w[i] = r * r * r * p.deriv(r, 1);
        if (w[i] > floor && !rep.h2_holds) {
            rep.h2_holds = true;
            rep.h2_witness_r = r;
        }
        wmax = std::fmax(wmax, w[i]);
    }

    if (rep.h2_holds) {
        // sample ell values between the floor and the attained maximum
        for (int q = 1; q <= 8; ++q) {
            const double ell = floor + (wmax - floor) * q / 9.0;
            int count = 0;
            for (std::size_t i = 1; i < w.size(); ++i)
                if ((w[i - 1] - ell) * (w[i] - ell) < 0) ++count;
            rep.h3_root_counts.emplace_back(ell, count);
        }
    }
    return rep;
}

}  // namespace cforce

#endif
