#ifndef CENTRALFORCE_EFFECTIVE_HPP
#define CENTRALFORCE_EFFECTIVE_HPP

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include "errors.hpp"
#include "potential.hpp"
#include "rootfind.hpp"

namespace cforce {

namespace tol {
/// residual tolerance on |dV_eff/dr| at a refined critical point (scaled units)
inline constexpr double grad = 1e-10;
/// nondegeneracy floor for |d^2 V_eff/dr^2|, scaled by |V'(r0)|/r0
inline constexpr double nondeg = 1e-8;
/// exclusion half-width around detected cuts, as a fraction of (L_M - L_m)
inline constexpr double cut_margin = 1e-4;
/// default bracketing grid size for r^3 V'(r) = ell
inline constexpr int bracket_grid = 4096;
}  // namespace tol

/// V_eff(r, ell) = V(r) + ell/(2 r^2), the radial potential at squared
/// angular momentum ell = p_theta^2 >= 0.
inline double veff(const Potential& p, double r, double ell) {
    if (!p.in_range(r))
        throw DomainError("veff: r outside working range");
    if (ell < 0)
        throw DomainError("veff: ell must be >= 0");
    return p.deriv(r, 0) + ell / (2 * r * r);
}

inline double veff_dr(const Potential& p, double r, double ell) {
    if (!p.in_range(r))
        throw DomainError("veff_dr: r outside working range");
    if (ell < 0)
        throw DomainError("veff_dr: ell must be >= 0");
    return p.deriv(r, 1) - ell / (r * r * r);
}

inline double veff_dr2(const Potential& p, double r, double ell) {
    if (!p.in_range(r))
        throw DomainError("veff_dr2: r outside working range");
    if (ell < 0)
        throw DomainError("veff_dr2: ell must be >= 0");
    return p.deriv(r, 2) + 3 * ell / (r * r * r * r);
}

/// A circular-orbit radius: critical point of V_eff(., ell).
struct CriticalPoint {
    double r0 = 0;          ///< radius
    double ell = 0;         ///< p_theta^2
    bool is_minimum = true;
    double level = 0;       ///< V_eff(r0, ell)
    double curvature = 0;   ///< d^2 V_eff/dr^2 (r0, ell); lambda^2 = -curvature at maxima
    bool degenerate = false;///< |curvature| under the nondegeneracy floor; skip this ell
};

/// All critical points of V_eff(., ell) in the working range, classified and
/// sorted by radius.  Roots of r^3 V'(r) = ell are bracketed on a log grid
/// and refined by Brent's method.
inline std::vector<CriticalPoint> find_critical_points(const Potential& p, double ell,
                                                       int grid_n = tol::bracket_grid) {
    auto w = [&p, ell](double r) { return r * r * r * p.deriv(r, 1) - ell; };
    std::vector<double> roots = roots_on_log_grid(w, p.r_lo * (1 + 1e-12), p.r_hi * (1 - 1e-12), grid_n);
    std::vector<CriticalPoint> out;
    out.reserve(roots.size());
    for (double r0 : roots) {
        CriticalPoint cp;
        cp.r0 = r0;
        cp.ell = ell;
        cp.curvature = veff_dr2(p, r0, ell);
        cp.is_minimum = cp.curvature > 0;
        cp.level = veff(p, r0, ell);
        const double scale = std::fabs(p.deriv(r0, 1)) / r0 + 1e-300;
        cp.degenerate = std::fabs(cp.curvature) <= tol::nondeg * scale;
        out.push_back(cp);
    }
    std::sort(out.begin(), out.end(),
              [](const CriticalPoint& a, const CriticalPoint& b) { return a.r0 < b.r0; });
    return out;
}

/// d/dell of the critical level V_eff(r(ell), ell); reduces to 1/(2 r0^2)
/// because the radial derivative vanishes on the branch.
inline double critical_level_slope(const Potential&, const CriticalPoint& cp) {
    return 1.0 / (2 * cp.r0 * cp.r0);
}

/// The admissible band (L_m, L_M) of angular-momentum modulus.  L_m^2 is the
/// smallest attained value of r^3 V'(r) at or above max{0, ell_star}; L_M is
/// sup sqrt(r^3 V') when finite, else the supplied cap.
inline std::pair<double, double> momentum_range(const Potential& p, double cap) {
    if (cap <= 0)
        throw AnalysisError("momentum_range: cap must be > 0");
    auto w = [&p](double r) { return r * r * r * p.deriv(r, 1); };
    const int n = 4096;
    const double la = std::log(p.r_lo * (1 + 1e-12)), lb = std::log(p.r_hi * (1 - 1e-12));
    const double floor = std::fmax(0.0, p.ell_star);

    double wmax = -std::numeric_limits<double>::infinity();
    double wmin_adm = std::numeric_limits<double>::infinity();   // min attained value >= floor
    bool below = false, above = false;
    int imax = 0;
    std::vector<double> rs(n + 1), ws(n + 1);
    for (int i = 0; i <= n; ++i) {
        rs[i] = std::exp(la + (lb - la) * i / n);
        ws[i] = w(rs[i]);
        if (ws[i] > wmax) { wmax = ws[i]; imax = i; }
        if (ws[i] >= floor) { above = true; wmin_adm = std::fmin(wmin_adm, ws[i]); }
        else below = true;
    }
    if (!above)
        throw AnalysisError("momentum_range: r^3 V'(r) never reaches max{0, ell_star} (H2 fails)");

    // values crossing the floor make the floor itself (approximately) attained
    double lm2 = (below ? floor : wmin_adm);
    // minimum pinned to the r_lo wall with r^3 V' still falling toward it:
    // the infimum continues below the sampled range; extrapolate a power decay
    if (!below && wmin_adm == ws[0] && ws[1] > ws[0] && ws[0] > floor) {
        const double s = std::log(w(2 * rs[0]) / ws[0]) / std::log(2.0);
        if (s > 0.05) lm2 = floor;
    }

    double LM;
    if (imax == n && ws[n] > ws[n - 1]) {
        LM = cap;   // still growing at r_hi: treat the sup as infinite
    } else {
        double lo = rs[std::max(0, imax - 1)], hi = rs[std::min(n, imax + 1)];
        const double rstar = golden_max(w, lo, hi);
        LM = std::sqrt(std::fmax(w(rstar), wmax));
        LM = std::fmin(LM, cap);
    }
    const double Lm = std::sqrt(std::fmax(lm2, 0.0));
    if (!(Lm < LM))
        throw AnalysisError("momentum_range: empty admissible band");
    return {Lm, LM};
}

/// One Morse-stable momentum subinterval: the critical-point pattern of
/// V_eff is constant for p_theta in (lo, hi) and all levels stay distinct.
struct MomentumInterval {
    double lo = 0, hi = 0;                ///< p_theta bounds
    std::vector<CriticalPoint> pattern;   ///< critical points at the midpoint, sorted by r
    bool levels_distinct = true;
};

namespace detail {

/// Signature of the critical-point pattern at one ell: branch kinds in radial
/// order, plus a degeneracy marker.
struct PatternSig {
    std::vector<bool> kinds;
    bool degenerate = false;
    bool operator==(const PatternSig& o) const {
        return kinds == o.kinds && degenerate == o.degenerate;
    }
};

inline PatternSig pattern_sig(const std::vector<CriticalPoint>& cps) {
    PatternSig s;
    for (const auto& c : cps) {
        s.kinds.push_back(c.is_minimum);
        s.degenerate = s.degenerate || c.degenerate;
    }
    return s;
}

/// V(r_hi) when the tail is flat enough to stand for lim V, else +inf.
inline double v_infinity(const Potential& p) {
    const double r = p.r_hi * (1 - 1e-9);
    const double v = p.deriv(r, 0), vp = p.deriv(r, 1);
    if (std::fabs(r * vp) < 1e-6 * std::fabs(v) + 1e-9)
        return v;
    return std::numeric_limits<double>::infinity();
}

/// Sorted critical levels together with V^inf; used for crossing detection.
inline std::vector<double> level_vector(const Potential& p, const std::vector<CriticalPoint>& cps) {
    std::vector<double> lv;
    for (const auto& c : cps) lv.push_back(c.level);
    const double vinf = v_infinity(p);
    if (std::isfinite(vinf)) lv.push_back(vinf);
    return lv;
}

inline bool levels_cross(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) return true;
    // any pair that changes order (or collides) between the two samples
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = i + 1; j < a.size(); ++j)
            if ((a[i] - a[j]) * (b[i] - b[j]) <= 0) return true;
    return false;
}

}  // namespace detail

/// Splits (L_m, L_M) into subintervals on which the Morse pattern of V_eff is
/// stable: cuts are placed where the branch count/kind changes, where a
/// degeneracy flag appears, or where two critical levels (or a level and
/// V^inf) cross; each interval is then shrunk by a safety margin.
inline std::vector<MomentumInterval> decompose_momentum_intervals(const Potential& p,
                                                                  int n_samples,
                                                                  double cap = 50.0) {
    if (n_samples < 64)
        throw AnalysisError("decompose_momentum_intervals: need n_samples >= 64");
    const auto [Lm, LM] = momentum_range(p, cap);
    const double span = LM - Lm, margin = tol::cut_margin * span;

    struct Sample {
        double ptheta;
        detail::PatternSig sig;
        std::vector<double> levels;
        std::vector<CriticalPoint> cps;
    };
    auto probe = [&p](double pt) {
        Sample s;
        s.ptheta = pt;
        s.cps = find_critical_points(p, pt * pt);
        s.sig = detail::pattern_sig(s.cps);
        s.levels = detail::level_vector(p, s.cps);
        return s;
    };

    std::vector<Sample> samples;
    samples.reserve(n_samples);
    for (int i = 0; i < n_samples; ++i)
        samples.push_back(probe(Lm + span * (i + 0.5) / n_samples));

    auto same = [](const Sample& a, const Sample& b) {
        return a.sig == b.sig && !a.sig.degenerate && !detail::levels_cross(a.levels, b.levels);
    };

    std::vector<double> cuts;   // p_theta values where the pattern changes
    for (int i = 1; i < n_samples; ++i) {
        if (same(samples[i - 1], samples[i])) continue;
        // localize the change by bisection on the sample pair
        Sample a = samples[i - 1], b = samples[i];
        for (int it = 0; it < 24 && b.ptheta - a.ptheta > 1e-12 * span; ++it) {
            Sample m = probe(0.5 * (a.ptheta + b.ptheta));
            if (same(a, m)) a = std::move(m); else b = std::move(m);
        }
        cuts.push_back(0.5 * (a.ptheta + b.ptheta));
    }

    std::vector<MomentumInterval> out;
    double lo = Lm;
    auto emit = [&](double a, double b) {
        const double la = a + margin, lb = b - margin;
        if (lb <= la) return;
        MomentumInterval mi;
        mi.lo = la;
        mi.hi = lb;
        mi.pattern = find_critical_points(p, std::pow(0.5 * (la + lb), 2));
        bool any_deg = false;
        for (const auto& c : mi.pattern) any_deg = any_deg || c.degenerate;
        if (mi.pattern.empty() || any_deg) return;
        mi.levels_distinct = true;
        const auto lv = detail::level_vector(p, mi.pattern);
        for (std::size_t i = 0; i < lv.size() && mi.levels_distinct; ++i)
            for (std::size_t j = i + 1; j < lv.size(); ++j)
                if (std::fabs(lv[i] - lv[j]) <
                    1e-9 * (std::fabs(lv[i]) + std::fabs(lv[j]) + 1e-12)) {
                    mi.levels_distinct = false;
                    break;
                }
        out.push_back(std::move(mi));
    };
    for (double c : cuts) {
        emit(lo, c);
        lo = c;
    }
    emit(lo, LM);
    if (out.empty())
        throw AnalysisError("decompose_momentum_intervals: no admissible subinterval found");
    return out;
}

}  // namespace cforce

#endif
