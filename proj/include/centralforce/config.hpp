#ifndef CENTRALFORCE_CONFIG_HPP
#define CENTRALFORCE_CONFIG_HPP

#include <json.hpp>

#include <map>
#include <string>
#include <vector>

#include "dynamics.hpp"
#include "errors.hpp"
#include "potential.hpp"

namespace cforce {

using nlohmann::json;

namespace detail {

inline void reject_unknown_keys(const json& obj, const std::string& path,
                                std::initializer_list<const char*> allowed) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool known = false;
        for (const char* a : allowed)
            if (it.key() == a) { known = true; break; }
        if (!known)
            throw ConfigError("unknown key '" + it.key() + "' in " + path);
    }
}

inline double num_or(const json& obj, const char* key, double fallback) {
    if (!obj.contains(key)) return fallback;
    if (!obj.at(key).is_number())
        throw ConfigError(std::string("'") + key + "' must be a number");
    return obj.at(key).get<double>();
}

inline int int_or(const json& obj, const char* key, int fallback) {
    if (!obj.contains(key)) return fallback;
    if (!obj.at(key).is_number_integer())
        throw ConfigError(std::string("'") + key + "' must be an integer");
    return obj.at(key).get<int>();
}

}  // namespace detail

/// Analysis settings per subcommand; everything has a working default.
struct ProfileConfig {
    int n_ell_samples = 64;      ///< branch CSV resolution per interval
    int n_interval_samples = 256;
};

struct ActionsConfig {
    int n_I2 = 5;
    int n_E = 12;
    int n_asymptotic = 21;
};

struct ArnoldConfig {
    int n1 = 20, n2 = 20;
    int chart = -1;   ///< -1: every chart
};

struct BirkhoffConfig {
    std::vector<double> I2_values = {1.0};
    double scan_lo = -3.5, scan_hi = 2.0, scan_step = 1e-3;
    bool run_scan = true;
};

struct BertrandConfig {
    double I2 = 1.0;
    int n_samples = 12;
};

struct NekhoroshevConfig {
    Perturbation perturbation;
    std::vector<double> eps_list = {1e-2, 1e-3, 1e-4};
    double orbit_radius = 0;     ///< 0: pick the first circular minimum at ell = 1
    double periods = 400;        ///< horizon in orbital periods
    double dt_factor = 0.02;     ///< dt * omega
    bool fast_slow = false;
    FastSlowCoupling coupling;
};

/// A fully validated run configuration.
struct RunConfig {
    Potential potential;
    double cap = 50.0;
    unsigned seed = 1;
    int jobs = 1;
    ProfileConfig profile;
    ActionsConfig actions;
    ArnoldConfig arnold;
    BirkhoffConfig birkhoff;
    BertrandConfig bertrand;
    NekhoroshevConfig nekhoroshev;
};

namespace detail {

inline PotentialKind potential_kind_from(const std::string& s) {
    if (s == "kepler") return PotentialKind::kepler;
    if (s == "harmonic") return PotentialKind::harmonic;
    if (s == "power_law") return PotentialKind::power_law;
    if (s == "log") return PotentialKind::log;
    if (s == "lennard_jones") return PotentialKind::lennard_jones;
    if (s == "lennard_jones_gauss") return PotentialKind::lennard_jones_gauss;
    throw ConfigError("unknown potential kind '" + s + "'");
}

inline PerturbationKind perturbation_kind_from(const std::string& s) {
    if (s == "anisotropic_quadratic") return PerturbationKind::anisotropic_quadratic;
    if (s == "fixed_dipole") return PerturbationKind::fixed_dipole;
    if (s == "user_grid") return PerturbationKind::user_grid;
    throw ConfigError("unknown perturbation kind '" + s + "'");
}

inline Potential parse_potential(const json& j) {
    if (!j.is_object())
        throw ConfigError("'potential' must be an object");
    reject_unknown_keys(j, "potential", {"kind", "params", "range"});
    if (!j.contains("kind"))
        throw ConfigError("'potential.kind' is required");
    const PotentialKind kind = potential_kind_from(j.at("kind").get<std::string>());
    std::map<std::string, double> params;
    if (j.contains("params")) {
        if (!j.at("params").is_object())
            throw ConfigError("'potential.params' must be an object");
        for (auto it = j.at("params").begin(); it != j.at("params").end(); ++it) {
            if (!it.value().is_number())
                throw ConfigError("potential parameter '" + it.key() + "' must be a number");
            params[it.key()] = it.value().get<double>();
        }
    }
    Potential p = make_builtin(kind, std::move(params));
    if (j.contains("range")) {
        const json& r = j.at("range");
        if (!r.is_array() || r.size() != 2 || !r[0].is_number() || !r[1].is_number())
            throw ConfigError("'potential.range' must be [r_lo, r_hi]");
        p.r_lo = r[0].get<double>();
        p.r_hi = r[1].get<double>();
        if (!(p.r_lo > 0) || !(p.r_hi > p.r_lo))
            throw ConfigError("'potential.range' needs 0 < r_lo < r_hi");
    }
    return p;
}

inline Perturbation parse_perturbation(const json& j) {
    reject_unknown_keys(j, "perturbation", {"kind", "r_floor", "grid_r", "grid_w"});
    Perturbation pert;
    if (j.contains("kind"))
        pert.kind = perturbation_kind_from(j.at("kind").get<std::string>());
    pert.r_floor = num_or(j, "r_floor", pert.r_floor);
    if (j.contains("grid_r")) pert.grid_r = j.at("grid_r").get<std::vector<double>>();
    if (j.contains("grid_w")) pert.grid_w = j.at("grid_w").get<std::vector<double>>();
    if (pert.kind == PerturbationKind::user_grid &&
        (pert.grid_r.size() != pert.grid_w.size() || pert.grid_r.size() < 2))
        throw ConfigError("user_grid perturbation needs matching grid_r/grid_w with >= 2 samples");
    return pert;
}

}  // namespace detail

/// Parses and validates the full config.  Unknown keys anywhere are errors.
inline RunConfig parse_config(const json& j) {
    using namespace detail;
    if (!j.is_object())
        throw ConfigError("config root must be an object");
    reject_unknown_keys(j, "config", {"potential", "cap", "seed", "jobs", "profile", "actions",
                                      "arnold", "birkhoff", "bertrand", "nekhoroshev"});
    if (!j.contains("potential"))
        throw ConfigError("'potential' is required");
    RunConfig cfg;
    cfg.potential = parse_potential(j.at("potential"));
    cfg.cap = num_or(j, "cap", cfg.cap);
    if (!(cfg.cap > 0)) throw ConfigError("'cap' must be > 0");
    cfg.seed = unsigned(int_or(j, "seed", int(cfg.seed)));
    cfg.jobs = int_or(j, "jobs", cfg.jobs);
    if (cfg.jobs < 1) throw ConfigError("'jobs' must be >= 1");

    if (j.contains("profile")) {
        const json& p = j.at("profile");
        reject_unknown_keys(p, "profile", {"n_ell_samples", "n_interval_samples"});
        cfg.profile.n_ell_samples = int_or(p, "n_ell_samples", cfg.profile.n_ell_samples);
        cfg.profile.n_interval_samples =
            int_or(p, "n_interval_samples", cfg.profile.n_interval_samples);
        if (cfg.profile.n_interval_samples < 64)
            throw ConfigError("'profile.n_interval_samples' must be >= 64");
    }
    if (j.contains("actions")) {
        const json& p = j.at("actions");
        reject_unknown_keys(p, "actions", {"n_I2", "n_E", "n_asymptotic"});
        cfg.actions.n_I2 = int_or(p, "n_I2", cfg.actions.n_I2);
        cfg.actions.n_E = int_or(p, "n_E", cfg.actions.n_E);
        cfg.actions.n_asymptotic = int_or(p, "n_asymptotic", cfg.actions.n_asymptotic);
    }
    if (j.contains("arnold")) {
        const json& p = j.at("arnold");
        reject_unknown_keys(p, "arnold", {"n1", "n2", "chart"});
        cfg.arnold.n1 = int_or(p, "n1", cfg.arnold.n1);
        cfg.arnold.n2 = int_or(p, "n2", cfg.arnold.n2);
        cfg.arnold.chart = int_or(p, "chart", cfg.arnold.chart);
        if (cfg.arnold.n1 < 2 || cfg.arnold.n2 < 2)
            throw ConfigError("'arnold.n1'/'arnold.n2' must be >= 2");
    }
    if (j.contains("birkhoff")) {
        const json& p = j.at("birkhoff");
        reject_unknown_keys(p, "birkhoff", {"I2_values", "scan_lo", "scan_hi", "scan_step", "run_scan"});
        if (p.contains("I2_values"))
            cfg.birkhoff.I2_values = p.at("I2_values").get<std::vector<double>>();
        cfg.birkhoff.scan_lo = num_or(p, "scan_lo", cfg.birkhoff.scan_lo);
        cfg.birkhoff.scan_hi = num_or(p, "scan_hi", cfg.birkhoff.scan_hi);
        cfg.birkhoff.scan_step = num_or(p, "scan_step", cfg.birkhoff.scan_step);
        if (p.contains("run_scan")) cfg.birkhoff.run_scan = p.at("run_scan").get<bool>();
    }
    if (j.contains("bertrand")) {
        const json& p = j.at("bertrand");
        reject_unknown_keys(p, "bertrand", {"I2", "n_samples"});
        cfg.bertrand.I2 = num_or(p, "I2", cfg.bertrand.I2);
        cfg.bertrand.n_samples = int_or(p, "n_samples", cfg.bertrand.n_samples);
    }
    if (j.contains("nekhoroshev")) {
        const json& p = j.at("nekhoroshev");
        reject_unknown_keys(p, "nekhoroshev",
                            {"perturbation", "eps_list", "orbit_radius", "periods", "dt_factor",
                             "fast_slow", "n_slow", "omega_slow", "coupling", "r_ref"});
        if (p.contains("perturbation"))
            cfg.nekhoroshev.perturbation = parse_perturbation(p.at("perturbation"));
        if (p.contains("eps_list"))
            cfg.nekhoroshev.eps_list = p.at("eps_list").get<std::vector<double>>();
        cfg.nekhoroshev.orbit_radius = num_or(p, "orbit_radius", cfg.nekhoroshev.orbit_radius);
        cfg.nekhoroshev.periods = num_or(p, "periods", cfg.nekhoroshev.periods);
        cfg.nekhoroshev.dt_factor = num_or(p, "dt_factor", cfg.nekhoroshev.dt_factor);
        if (p.contains("fast_slow")) cfg.nekhoroshev.fast_slow = p.at("fast_slow").get<bool>();
        cfg.nekhoroshev.coupling.n_slow = int_or(p, "n_slow", cfg.nekhoroshev.coupling.n_slow);
        cfg.nekhoroshev.coupling.omega_slow =
            num_or(p, "omega_slow", cfg.nekhoroshev.coupling.omega_slow);
        cfg.nekhoroshev.coupling.coupling = num_or(p, "coupling", cfg.nekhoroshev.coupling.coupling);
        cfg.nekhoroshev.coupling.r_ref = num_or(p, "r_ref", cfg.nekhoroshev.coupling.r_ref);
    }
    return cfg;
}

/// Parses a JSON config text; parse errors are rewritten with line/column.
inline RunConfig parse_config_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        std::size_t line = 1, col = 1;
        const std::size_t upto = std::min(e.byte, text.size());
        for (std::size_t i = 0; i < upto; ++i) {
            if (text[i] == '\n') { ++line; col = 1; }
            else ++col;
        }
        throw ConfigError("JSON parse error at line " + std::to_string(line) + ", column " +
                          std::to_string(col) + ": " + e.what());
    }
    return parse_config(j);
}

}  // namespace cforce

#endif
