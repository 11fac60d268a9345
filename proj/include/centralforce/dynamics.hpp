#ifndef CENTRALFORCE_DYNAMICS_HPP
#define CENTRALFORCE_DYNAMICS_HPP

#include <array>
#include <cmath>
#include <vector>

#include "errors.hpp"
#include "parallel.hpp"
#include "potential.hpp"

namespace cforce {

using Vec3 = std::array<double, 3>;
using State6 = std::array<double, 6>;   ///< (x, y, z, px, py, pz)

inline double norm3(const Vec3& v) {
    return std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
}

/// Position-dependent perturbations P(x); built-in kinds are analytic away
/// from the origin.
enum class PerturbationKind {
    anisotropic_quadratic,   ///< P = x^2 - y^2 (breaks rotational symmetry)
    fixed_dipole,            ///< P = x/|x|^3, with |x| floored away from 0
    user_grid,               ///< radial table W(|x|), centrally symmetric
};

inline const char* to_string(PerturbationKind k) {
    switch (k) {
        case PerturbationKind::anisotropic_quadratic: return "anisotropic_quadratic";
        case PerturbationKind::fixed_dipole:          return "fixed_dipole";
        case PerturbationKind::user_grid:             return "user_grid";
    }
    return "?";
}

struct Perturbation {
    PerturbationKind kind = PerturbationKind::anisotropic_quadratic;
    double r_floor = 1e-3;              ///< dipole regularization radius
    std::vector<double> grid_r, grid_w; ///< user_grid samples (sorted in r)

    double value(const Vec3& x) const {
        switch (kind) {
            case PerturbationKind::anisotropic_quadratic:
                return x[0] * x[0] - x[1] * x[1];
            case PerturbationKind::fixed_dipole: {
                const double rho = std::fmax(norm3(x), r_floor);
                return x[0] / (rho * rho * rho);
            }
            case PerturbationKind::user_grid:
                return interp(norm3(x)).first;
        }
        return 0;
    }

    Vec3 gradient(const Vec3& x) const {
        switch (kind) {
            case PerturbationKind::anisotropic_quadratic:
                return {2 * x[0], -2 * x[1], 0.0};
            case PerturbationKind::fixed_dipole: {
                const double r = norm3(x);
                if (r <= r_floor)   // inside the floor the value is frozen in |x|
                    return {1.0 / (r_floor * r_floor * r_floor), 0.0, 0.0};
                const double r3 = r * r * r, r5 = r3 * r * r;
                return {1.0 / r3 - 3 * x[0] * x[0] / r5,
                        -3 * x[0] * x[1] / r5,
                        -3 * x[0] * x[2] / r5};
            }
            case PerturbationKind::user_grid: {
                const double r = norm3(x);
                const double wp = interp(r).second;
                if (r == 0) return {0, 0, 0};
                return {wp * x[0] / r, wp * x[1] / r, wp * x[2] / r};
            }
        }
        return {0, 0, 0};
    }

private:
    /// piecewise-cubic (Catmull-Rom) value and slope of the radial table
    std::pair<double, double> interp(double r) const {
        const std::size_t n = grid_r.size();
        if (n < 2) throw ConfigError("user_grid perturbation: need at least 2 samples");
        if (r <= grid_r.front()) return {grid_w.front(), 0.0};
        if (r >= grid_r.back()) return {grid_w.back(), 0.0};
        std::size_t i = 1;
        while (i + 1 < n && grid_r[i + 1] < r) ++i;
        const std::size_t i0 = i - 1, i1 = i, i2 = i + 1;
        const std::size_t i3 = (i + 2 < n) ? i + 2 : i + 1;
        const double h = grid_r[i2] - grid_r[i1];
        const double t = (r - grid_r[i1]) / h;
        const double m1 = (grid_w[i2] - grid_w[i0]) / (grid_r[i2] - grid_r[i0]) * h;
        const double m2 = (grid_w[i3] - grid_w[i1]) / (grid_r[i3] - grid_r[i1]) * h;
        const double t2 = t * t, t3 = t2 * t;
        const double v = (2 * t3 - 3 * t2 + 1) * grid_w[i1] + (t3 - 2 * t2 + t) * m1 +
                         (-2 * t3 + 3 * t2) * grid_w[i2] + (t3 - t2) * m2;
        const double dv = ((6 * t2 - 6 * t) * grid_w[i1] + (3 * t2 - 4 * t + 1) * m1 +
                           (-6 * t2 + 6 * t) * grid_w[i2] + (3 * t2 - 2 * t) * m2) / h;
        return {v, dv};
    }
};

/// Time series and drift statistics of one perturbed integration.
struct DriftRecord {
    std::vector<double> times;
    std::vector<double> L_abs;     ///< |L|(t)
    std::vector<double> H_vals;    ///< unperturbed H(t)
    double eps = 0;
    double max_drift_L = 0;        ///< max |  |L|(t) - |L|(0)  |
    double max_drift_H = 0;        ///< max | H(t) - H(0) |
    double energy_error = 0;       ///< max | H_eps(t) - H_eps(0) | (symplectic check)
    bool escaped = false;
    double escape_time = 0;
};

namespace detail {

inline Vec3 angular_momentum(const State6& y) {
    return {y[1] * y[5] - y[2] * y[4],
            y[2] * y[3] - y[0] * y[5],
            y[0] * y[4] - y[1] * y[3]};
}

inline double unperturbed_H(const Potential& p, const State6& y) {
    const double r = std::sqrt(y[0] * y[0] + y[1] * y[1] + y[2] * y[2]);
    return 0.5 * (y[3] * y[3] + y[4] * y[4] + y[5] * y[5]) + p.deriv(r, 0);
}

}  // namespace detail

/// Integrates H_eps = |p|^2/2 + V(|x|) + eps P(x) by second-order
/// kinetic/potential Strang splitting (velocity Verlet): symplectic and
/// time-reversible.  Drift statistics are gathered at the sampling stride.
inline DriftRecord integrate_perturbed(const Potential& p, const Perturbation& pert,
                                       double eps, const State6& y0, double T, double dt,
                                       int stride = 64,
                                       double shell_lo = 0, double shell_hi = 0) {
    if (shell_lo <= 0) shell_lo = p.r_lo * 2;
    if (shell_hi <= 0) shell_hi = p.r_hi * 0.5;
    DriftRecord rec;
    rec.eps = eps;
    State6 y = y0;

    auto force = [&](const Vec3& x) {
        const double r = norm3(x);
        const double vp = p.deriv(r, 1);
        Vec3 f = {-vp * x[0] / r, -vp * x[1] / r, -vp * x[2] / r};
        if (eps != 0) {
            const Vec3 gp = pert.gradient(x);
            f[0] -= eps * gp[0];
            f[1] -= eps * gp[1];
            f[2] -= eps * gp[2];
        }
        return f;
    };
    auto full_H = [&](const State6& s) {
        double h = detail::unperturbed_H(p, s);
        if (eps != 0) h += eps * pert.value({s[0], s[1], s[2]});
        return h;
    };

    const double L0 = norm3(detail::angular_momentum(y));
    const double H0 = detail::unperturbed_H(p, y);
    const double He0 = full_H(y);
    const long nsteps = std::lround(T / dt);

    auto record = [&](double t) {
        const double L = norm3(detail::angular_momentum(y));
        const double H = detail::unperturbed_H(p, y);
        rec.times.push_back(t);
        rec.L_abs.push_back(L);
        rec.H_vals.push_back(H);
        rec.max_drift_L = std::fmax(rec.max_drift_L, std::fabs(L - L0));
        rec.max_drift_H = std::fmax(rec.max_drift_H, std::fabs(H - H0));
        rec.energy_error = std::fmax(rec.energy_error, std::fabs(full_H(y) - He0));
    };
    record(0.0);

    Vec3 f = force({y[0], y[1], y[2]});
    for (long step = 1; step <= nsteps; ++step) {
        y[3] += 0.5 * dt * f[0];
        y[4] += 0.5 * dt * f[1];
        y[5] += 0.5 * dt * f[2];
        y[0] += dt * y[3];
        y[1] += dt * y[4];
        y[2] += dt * y[5];
        f = force({y[0], y[1], y[2]});
        y[3] += 0.5 * dt * f[0];
        y[4] += 0.5 * dt * f[1];
        y[5] += 0.5 * dt * f[2];
        const double r = std::sqrt(y[0] * y[0] + y[1] * y[1] + y[2] * y[2]);
        if (r < shell_lo || r > shell_hi) {
            rec.escaped = true;
            rec.escape_time = step * dt;
            record(step * dt);
            return rec;
        }
        if (step % stride == 0 || step == nsteps)
            record(step * dt);
    }
    return rec;
}

/// Runs one trajectory forward T and back, returning the max state error on
/// return; the splitting is reversible so this probes only roundoff growth.
inline double reversibility_error(const Potential& p, const Perturbation& pert,
                                  double eps, const State6& y0, double T, double dt) {
    auto run = [&](State6 s, double horizon) {
        const long nsteps = std::lround(horizon / dt);
        auto force = [&](const Vec3& x) {
            const double rr = norm3(x);
            const double vp = p.deriv(rr, 1);
            Vec3 f = {-vp * x[0] / rr, -vp * x[1] / rr, -vp * x[2] / rr};
            if (eps != 0) {
                const Vec3 gp = pert.gradient(x);
                for (int i = 0; i < 3; ++i) f[i] -= eps * gp[i];
            }
            return f;
        };
        Vec3 f = force({s[0], s[1], s[2]});
        for (long step = 1; step <= nsteps; ++step) {
            for (int i = 0; i < 3; ++i) s[i + 3] += 0.5 * dt * f[i];
            for (int i = 0; i < 3; ++i) s[i] += dt * s[i + 3];
            f = force({s[0], s[1], s[2]});
            for (int i = 0; i < 3; ++i) s[i + 3] += 0.5 * dt * f[i];
        }
        return s;
    };
    State6 end = run(y0, T);
    for (int i = 3; i < 6; ++i) end[i] = -end[i];
    State6 back = run(end, T);
    for (int i = 3; i < 6; ++i) back[i] = -back[i];
    double err = 0;
    for (int i = 0; i < 6; ++i) err = std::fmax(err, std::fabs(back[i] - y0[i]));
    return err;
}

/// Drift-vs-eps scaling over a fixed horizon.
struct SweepReport {
    std::vector<double> eps_list;
    std::vector<DriftRecord> records;
    double slope_L = 0;    ///< d log(max_drift_L)/d log(eps)
    double slope_H = 0;
    int n_escaped = 0;
};

inline SweepReport eps_scaling_sweep(const Potential& p, const Perturbation& pert,
                                     const State6& y0, const std::vector<double>& eps_list,
                                     double T, double dt, int stride = 256, int jobs = 1) {
    SweepReport rep;
    rep.eps_list = eps_list;
    rep.records.resize(eps_list.size());
    parallel_for(eps_list.size(), jobs, [&](std::size_t i) {
        rep.records[i] = integrate_perturbed(p, pert, eps_list[i], y0, T, dt, stride);
    });
    std::vector<double> lx, lyL, lyH;
    for (std::size_t i = 0; i < eps_list.size(); ++i) {
        const DriftRecord& r = rep.records[i];
        if (r.escaped) {
            ++rep.n_escaped;
        } else if (r.max_drift_L > 0 && r.max_drift_H > 0) {
            lx.push_back(std::log(eps_list[i]));
            lyL.push_back(std::log(r.max_drift_L));
            lyH.push_back(std::log(r.max_drift_H));
        }
    }
    auto slope = [](const std::vector<double>& x, const std::vector<double>& y) {
        const std::size_t n = x.size();
        if (n < 2) return 0.0;
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (std::size_t i = 0; i < n; ++i) {
            sx += x[i]; sy += y[i]; sxx += x[i] * x[i]; sxy += x[i] * y[i];
        }
        return (n * sxy - sx * sy) / (n * sxx - sx * sx);
    };
    rep.slope_L = slope(lx, lyL);
    rep.slope_H = slope(lx, lyH);
    return rep;
}

/// Coupling of the fast central system to n slow harmonic oscillators:
/// P = sum_i (phat_i^2/2 + omega_slow^2 xhat_i^2 / 2) + c xhat_1 (|x| - r_ref).
struct FastSlowCoupling {
    int n_slow = 1;
    double omega_slow = 1.0;
    double coupling = 0.1;   ///< c; 0 decouples the subsystems
    double r_ref = 1.0;
};

/// Integrates H_eps = (1/eps) H(x,p) + P(x,p,xhat,phat) by the same splitting
/// (the kinetic parts of both subsystems are diagonal).  State layout:
/// (x[3], p[3], xhat[n], phat[n]).  Records the fast |L| and fast H drift.
inline DriftRecord integrate_fast_slow(const Potential& p, const FastSlowCoupling& cpl,
                                       double eps, std::vector<double> z, double T, double dt,
                                       int stride = 64,
                                       double shell_lo = 0, double shell_hi = 0) {
    const int n = cpl.n_slow;
    if (int(z.size()) != 6 + 2 * n)
        throw ConfigError("integrate_fast_slow: state size must be 6 + 2 n_slow");
    if (shell_lo <= 0) shell_lo = p.r_lo * 2;
    if (shell_hi <= 0) shell_hi = p.r_hi * 0.5;
    DriftRecord rec;
    rec.eps = eps;

    auto xpart = [&](const std::vector<double>& s) { return Vec3{s[0], s[1], s[2]}; };
    auto fast_H = [&](const std::vector<double>& s) {
        const double r = norm3(xpart(s));
        return 0.5 * (s[3] * s[3] + s[4] * s[4] + s[5] * s[5]) + p.deriv(r, 0);
    };
    auto full_H = [&](const std::vector<double>& s) {
        double h = fast_H(s) / eps;
        const double r = norm3(xpart(s));
        for (int i = 0; i < n; ++i)
            h += 0.5 * s[6 + n + i] * s[6 + n + i] +
                 0.5 * cpl.omega_slow * cpl.omega_slow * s[6 + i] * s[6 + i];
        h += cpl.coupling * s[6] * (r - cpl.r_ref);
        return h;
    };
    auto fast_L = [&](const std::vector<double>& s) {
        const State6 y = {s[0], s[1], s[2], s[3], s[4], s[5]};
        return norm3(detail::angular_momentum(y));
    };

    const double L0 = fast_L(z), H0 = fast_H(z), He0 = full_H(z);
    auto record = [&](double t) {
        const double L = fast_L(z), H = fast_H(z);
        rec.times.push_back(t);
        rec.L_abs.push_back(L);
        rec.H_vals.push_back(H);
        rec.max_drift_L = std::fmax(rec.max_drift_L, std::fabs(L - L0));
        rec.max_drift_H = std::fmax(rec.max_drift_H, std::fabs(H - H0));
        rec.energy_error = std::fmax(rec.energy_error, std::fabs(full_H(z) - He0));
    };
    record(0.0);

    auto kick = [&](double h) {
        const Vec3 x = xpart(z);
        const double r = norm3(x);
        const double vp = p.deriv(r, 1) / eps + cpl.coupling * z[6];
        for (int i = 0; i < 3; ++i) z[3 + i] -= h * vp * x[i] / r;
        for (int i = 0; i < n; ++i) {
            double f = cpl.omega_slow * cpl.omega_slow * z[6 + i];
            if (i == 0) f += cpl.coupling * (r - cpl.r_ref);
            z[6 + n + i] -= h * f;
        }
    };
    const long nsteps = std::lround(T / dt);
    for (long step = 1; step <= nsteps; ++step) {
        kick(0.5 * dt);
        for (int i = 0; i < 3; ++i) z[i] += dt * z[3 + i] / eps;
        for (int i = 0; i < n; ++i) z[6 + i] += dt * z[6 + n + i];
        kick(0.5 * dt);
        const double r = norm3(xpart(z));
        if (r < shell_lo || r > shell_hi) {
            rec.escaped = true;
            rec.escape_time = step * dt;
            record(step * dt);
            return rec;
        }
        if (step % stride == 0 || step == nsteps)
            record(step * dt);
    }
    return rec;
}

}  // namespace cforce

#endif
