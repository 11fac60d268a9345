// cforce: analyses of spatial central-force Hamiltonians.
//
// Subcommands: profile | actions | arnold | birkhoff | bertrand | nekhoroshev
// All take --config PATH plus --out DIR, --jobs N, --seed N; outputs are CSV
// tables (with .meta.json sidecars) and JSON summaries under --out.
#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "centralforce/actions.hpp"
#include "centralforce/arnold.hpp"
#include "centralforce/birkhoff.hpp"
#include "centralforce/config.hpp"
#include "centralforce/dynamics.hpp"
#include "centralforce/effective.hpp"
#include "centralforce/potential.hpp"
#include "centralforce/report.hpp"

namespace fs = std::filesystem;
using namespace cforce;

namespace {

constexpr int EXIT_ANALYSIS = 1;
constexpr int EXIT_CONFIG = 2;

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot read config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

json chart_descriptor(const ActionChart& c, int index) {
    json j;
    j["index"] = index;
    j["p_theta_lo"] = c.p_lo;
    j["p_theta_hi"] = c.p_hi;
    j["bottom_kind"] = c.bottom_is_max ? "maximum" : "minimum";
    j["bottom_branch"] = c.bottom_branch;
    j["n_branches"] = c.pattern.size();
    return j;
}

int cmd_profile(const RunConfig& cfg, const fs::path& out) {
    const auto intervals =
        decompose_momentum_intervals(cfg.potential, cfg.profile.n_interval_samples, cfg.cap);

    CsvWriter csv((out / "branches.csv").string(),
                  {{"p_theta", "momentum"},
                   {"ell", "momentum^2"},
                   {"branch", "index"},
                   {"r0", "length"},
                   {"is_minimum", "bool"},
                   {"level", "energy"},
                   {"curvature", "energy/length^2"}});
    json summary;
    summary["potential"] = cfg.potential.name;
    for (std::size_t k = 0; k < intervals.size(); ++k) {
        const MomentumInterval& mi = intervals[k];
        json ji;
        ji["lo"] = mi.lo;
        ji["hi"] = mi.hi;
        ji["levels_distinct"] = mi.levels_distinct;
        ji["n_branches"] = mi.pattern.size();
        std::string kinds;
        for (const auto& cp : mi.pattern) kinds += cp.is_minimum ? 'm' : 'M';
        ji["kinds"] = kinds;
        summary["intervals"].push_back(ji);
        for (int s = 0; s < cfg.profile.n_ell_samples; ++s) {
            const double pt = mi.lo + (mi.hi - mi.lo) * (s + 0.5) / cfg.profile.n_ell_samples;
            const auto cps = find_critical_points(cfg.potential, pt * pt);
            for (std::size_t b = 0; b < cps.size(); ++b)
                csv.row({pt, pt * pt, double(b), cps[b].r0, double(cps[b].is_minimum),
                         cps[b].level, cps[b].curvature});
        }
    }
    csv.close_with_sidecar();
    write_json((out / "intervals.json").string(), summary);
    return 0;
}

int cmd_actions(const RunConfig& cfg, const fs::path& out) {
    const auto charts = make_all_charts(cfg.potential, cfg.cap);
    if (charts.empty())
        throw AnalysisError("no action charts found");

    CsvWriter csv((out / "actions_grid.csv").string(),
                  {{"chart", "index"},
                   {"E", "energy"},
                   {"I2", "action"},
                   {"I1", "action"},
                   {"omega1", "1/time"},
                   {"omega2", "1/time"},
                   {"nu", "dimensionless"}});
    CsvWriter asym((out / "asymptotics.csv").string(),
                   {{"chart", "index"},
                    {"I2", "action"},
                    {"ebar", "energy"},
                    {"I1", "action"}});
    json summary;
    for (std::size_t ci = 0; ci < charts.size(); ++ci) {
        const ActionChart& c = charts[ci];
        summary["charts"].push_back(chart_descriptor(c, int(ci)));
        for (int jj = 0; jj < cfg.actions.n_I2; ++jj) {
            const double t2 = (jj + 0.5) / cfg.actions.n_I2;
            const double I2 = c.p_lo + (c.p_hi - c.p_lo) * (0.08 + 0.84 * t2);
            const double bot = chart_bottom_level(c, I2);
            const double top = chart_top_level(c, I2);
            const double H = top - bot;
            for (int ii = 0; ii < cfg.actions.n_E; ++ii) {
                const double E = bot + H * (0.04 + 0.9 * (ii + 0.5) / cfg.actions.n_E);
                const double I1 = action_G(c, E, I2);
                const Frequencies f = frequencies(c, E, I2);
                csv.row({double(ci), E, I2, I1, f.omega1, f.omega2,
                         f.omega2 != 0 ? f.omega1 / f.omega2 : 0.0});
            }
            if (c.bottom_is_max) {
                for (int q = 0; q < cfg.actions.n_asymptotic; ++q) {
                    const double eb = 1e-2 * H * std::pow(10.0, -0.25 * q);
                    asym.row({double(ci), I2, eb, action_G(c, bot + eb, I2)});
                }
            }
        }
    }
    csv.close_with_sidecar();
    asym.close_with_sidecar();
    write_json((out / "actions_summary.json").string(), summary);
    return 0;
}

int cmd_arnold(const RunConfig& cfg, const fs::path& out) {
    const auto charts = make_all_charts(cfg.potential, cfg.cap);
    if (charts.empty())
        throw AnalysisError("no action charts found");

    CsvWriter csv((out / "arnold_grid.csv").string(),
                  {{"chart", "index"},
                   {"I1", "action"},
                   {"I2", "action"},
                   {"D", "energy^3/action^4"},
                   {"D_normalized", "dimensionless"},
                   {"quasiconvex", "bool"},
                   {"burgers_residual", "1/action"},
                   {"degraded", "bool"}});
    json summary;
    for (std::size_t ci = 0; ci < charts.size(); ++ci) {
        if (cfg.arnold.chart >= 0 && int(ci) != cfg.arnold.chart) continue;
        const ActionChart& c = charts[ci];
        const QuasiconvexityMap map =
            quasiconvexity_map(c, cfg.arnold.n1, cfg.arnold.n2, 0.08, 0.08, cfg.jobs);
        int degraded = 0, qc = 0;
        for (const auto& s : map.samples) {
            csv.row({double(ci), s.point.I1, s.point.I2, s.D, s.D_normalized,
                     double(s.quasiconvex), s.burgers_residual, double(s.degraded)});
            degraded += s.degraded;
            qc += s.quasiconvex;
        }
        json jc = chart_descriptor(c, int(ci));
        jc["quasiconvex_cells"] = qc;
        jc["total_cells"] = map.samples.size();
        jc["degraded_cells"] = degraded;
        jc["zero_set"] = json::array();
        for (const auto& [z1, z2] : map.zero_points)
            jc["zero_set"].push_back({z1, z2});
        if (c.bottom_is_max) {
            // barrier-top divergence diagnostic at the mid momentum
            const double I2 = 0.5 * (c.p_lo + c.p_hi);
            const double H = chart_top_level(c, I2) - chart_bottom_level(c, I2);
            std::vector<double> ebars;
            for (int kk = 3; kk <= 6; ++kk) ebars.push_back(H * std::pow(10.0, -kk));
            const DivergenceReport div = max_bottom_divergence(c, I2, ebars);
            json jd;
            jd["I2"] = I2;
            jd["lambda"] = div.lambda;
            jd["monotone"] = div.monotone;
            jd["sign_consistent"] = div.sign_consistent;
            jd["inconclusive"] = div.inconclusive;
            jd["prefactor_fit"] = div.prefactor_fit;
            jd["prefactor_model"] = div.prefactor_model;
            jd["rows"] = json::array();
            for (const auto& row : div.rows)
                jd["rows"].push_back({{"ebar", row.ebar},
                                      {"D", row.D},
                                      {"D_newarn", row.D_newarn},
                                      {"D_model", row.D_model}});
            jc["divergence"] = jd;
        }
        summary["charts"].push_back(jc);
    }
    csv.close_with_sidecar();
    write_json((out / "arnold_summary.json").string(), summary);
    return 0;
}

int cmd_birkhoff(const RunConfig& cfg, const fs::path& out) {
    const auto charts = make_all_charts(cfg.potential, cfg.cap);
    json summary;
    summary["expansion"] = json::array();
    for (double I2 : cfg.birkhoff.I2_values) {
        const ActionChart* chart = nullptr;
        for (const auto& c : charts)
            if (!c.bottom_is_max && c.contains_momentum(I2)) { chart = &c; break; }
        if (!chart)
            throw AnalysisError("no min-bottomed chart contains I2 = " + fmt_double(I2));
        const CriticalPoint bot = chart_bottom(*chart, I2);
        const ExpansionCheck chk = numeric_expansion_check(*chart, I2);
        const BurgersRhs rhs = rhs_G1_G2(cfg.potential, bot.r0);
        json row;
        row["I2"] = I2;
        row["r0"] = bot.r0;
        row["closed"] = {{"nu0", chk.closed.nu0}, {"nu1", chk.closed.nu1}, {"nu2", chk.closed.nu2}};
        row["fitted"] = {{"nu0", chk.fitted.nu0}, {"nu1", chk.fitted.nu1}, {"nu2", chk.fitted.nu2}};
        row["inconclusive"] = chk.inconclusive;
        row["residuals"] = {{"res1", rhs.res1}, {"res2", rhs.res2}};
        row["rhs"] = {{"G1", rhs.G1}, {"G2", rhs.G2}};
        summary["expansion"].push_back(row);
    }
    if (cfg.birkhoff.run_scan) {
        const ExponentScan scan = find_degenerate_exponents(
            cfg.birkhoff.scan_lo, cfg.birkhoff.scan_hi, cfg.birkhoff.scan_step);
        summary["degenerate_exponents"] = json::array();
        for (const auto& root : scan.roots)
            summary["degenerate_exponents"].push_back(
                {{"c", root.c},
                 {"even_multiplicity", root.even_multiplicity},
                 {"excluded_by_h2", root.excluded}});
        summary["scan_r0_spread"] = scan.max_r0_spread;
    }
    write_json((out / "birkhoff.json").string(), summary);
    return 0;
}

int cmd_bertrand(const RunConfig& cfg, const fs::path& out) {
    const auto charts = make_all_charts(cfg.potential, cfg.cap);
    const ActionChart* chart = nullptr;
    for (const auto& c : charts)
        if (!c.bottom_is_max && c.contains_momentum(cfg.bertrand.I2)) { chart = &c; break; }
    if (!chart)
        throw AnalysisError("no min-bottomed chart contains I2 = " + fmt_double(cfg.bertrand.I2));
    const BertrandVerdict v = bertrand_nonconstancy(*chart, cfg.bertrand.I2, cfg.bertrand.n_samples);
    json summary;
    summary["potential"] = cfg.potential.name;
    summary["I2"] = cfg.bertrand.I2;
    summary["verdict"] = v.degenerate ? "degenerate" : "non-degenerate";
    summary["nu_spread"] = v.spread;
    summary["nu_min"] = v.nu_min;
    summary["nu_max"] = v.nu_max;
    summary["nu_samples"] = json::array();
    for (const auto& [i1, nu] : v.nu_samples)
        summary["nu_samples"].push_back({i1, nu});
    write_json((out / "bertrand.json").string(), summary);
    return 0;
}

int cmd_nekhoroshev(const RunConfig& cfg, const fs::path& out) {
    const Potential& p = cfg.potential;
    double r0 = cfg.nekhoroshev.orbit_radius;
    if (r0 <= 0) {
        for (const auto& cp : find_critical_points(p, 1.0))
            if (cp.is_minimum) { r0 = cp.r0; break; }
        if (r0 <= 0)
            throw AnalysisError("nekhoroshev: no circular orbit found at ell = 1");
    }
    const double w = std::sqrt(p.deriv(r0, 1) / r0);
    const double vc = std::sqrt(r0 * p.deriv(r0, 1));
    std::mt19937 rng(cfg.seed);
    std::uniform_real_distribution<double> jitter(-0.05, 0.05);
    const State6 y0 = {r0, 0.0, 0.0, jitter(rng) * vc, 0.95 * vc, 0.05 * vc};
    const double dt = cfg.nekhoroshev.dt_factor / w;
    const double T = cfg.nekhoroshev.periods * 2 * M_PI / w;

    json summary;
    summary["potential"] = p.name;
    summary["seed"] = cfg.seed;
    summary["orbit_radius"] = r0;
    summary["horizon"] = T;
    summary["dt"] = dt;
    summary["perturbation"] = to_string(cfg.nekhoroshev.perturbation.kind);

    const SweepReport rep = eps_scaling_sweep(p, cfg.nekhoroshev.perturbation, y0,
                                              cfg.nekhoroshev.eps_list, T, dt, 256, cfg.jobs);
    summary["runs"] = json::array();
    for (std::size_t i = 0; i < rep.records.size(); ++i) {
        const DriftRecord& r = rep.records[i];
        json jr;
        jr["eps"] = rep.eps_list[i];
        jr["max_drift_L"] = r.max_drift_L;
        jr["max_drift_H"] = r.max_drift_H;
        jr["energy_error"] = r.energy_error;
        jr["escaped"] = r.escaped;
        if (r.escaped) jr["escape_time"] = r.escape_time;
        summary["runs"].push_back(jr);

        std::ostringstream name;
        name << "trajectory_eps" << i << ".csv";
        CsvWriter csv((out / name.str()).string(),
                      {{"t", "time"}, {"L_abs", "action"}, {"H", "energy"}});
        for (std::size_t k = 0; k < r.times.size(); ++k)
            csv.row({r.times[k], r.L_abs[k], r.H_vals[k]});
        csv.close_with_sidecar();
    }
    summary["slope_L"] = rep.slope_L;
    summary["slope_H"] = rep.slope_H;
    summary["n_escaped"] = rep.n_escaped;

    if (cfg.nekhoroshev.fast_slow) {
        json fsj = json::array();
        for (double eps : cfg.nekhoroshev.eps_list) {
            std::vector<double> z = {y0[0], y0[1], y0[2], y0[3], y0[4], y0[5]};
            for (int i = 0; i < cfg.nekhoroshev.coupling.n_slow; ++i) {
                z.push_back(0.3);
                z.push_back(0.1);
            }
            const double dtf = cfg.nekhoroshev.dt_factor * eps / w;
            const double Tf = cfg.nekhoroshev.periods * 2 * M_PI * eps / w;
            const DriftRecord r = integrate_fast_slow(p, cfg.nekhoroshev.coupling, eps, z, Tf, dtf);
            fsj.push_back({{"eps", eps},
                           {"max_drift_L", r.max_drift_L},
                           {"max_drift_H", r.max_drift_H},
                           {"energy_error", r.energy_error},
                           {"escaped", r.escaped}});
        }
        summary["fast_slow"] = fsj;
    }
    write_json((out / "nekhoroshev.json").string(), summary);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"central-force Hamiltonian analysis"};
    app.require_subcommand(1);

    std::string config_path, out_dir = "out";
    int jobs = 0, seed = -1;
    app.add_option("--config", config_path, "JSON run configuration")->required();
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--jobs", jobs, "internal parallelism bound");
    app.add_option("--seed", seed, "deterministic seed override");

    const char* names[] = {"profile", "actions", "arnold", "birkhoff", "bertrand", "nekhoroshev"};
    const char* descs[] = {"critical-point branches and momentum intervals",
                           "action charts, frequencies and asymptotics tables",
                           "Arnold determinant grids and zero sets",
                           "circular-orbit expansion coefficients and residuals",
                           "frequency-ratio constancy probe",
                           "perturbed drift measurements"};
    for (int i = 0; i < 6; ++i) app.add_subcommand(names[i], descs[i])->fallthrough();

    CLI11_PARSE(app, argc, argv);
    const std::string sub = app.get_subcommands().front()->get_name();

    try {
        RunConfig cfg = parse_config_text(read_file(config_path));
        if (jobs > 0) cfg.jobs = jobs;
        if (seed >= 0) cfg.seed = unsigned(seed);

        fs::path out(out_dir);
        fs::create_directories(out);

        if (sub == "profile") return cmd_profile(cfg, out);
        if (sub == "actions") return cmd_actions(cfg, out);
        if (sub == "arnold") return cmd_arnold(cfg, out);
        if (sub == "birkhoff") return cmd_birkhoff(cfg, out);
        if (sub == "bertrand") return cmd_bertrand(cfg, out);
        if (sub == "nekhoroshev") return cmd_nekhoroshev(cfg, out);
        std::cerr << "unknown subcommand " << sub << "\n";
        return EXIT_CONFIG;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return EXIT_CONFIG;
    } catch (const std::exception& e) {
        std::cerr << "analysis error: " << e.what() << "\n";
        return EXIT_ANALYSIS;
    }
}
