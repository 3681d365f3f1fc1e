#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "fbtransfer/constants.hpp"
#include "fbtransfer/errors.hpp"
#include "fbtransfer/gains.hpp"
#include "fbtransfer/io.hpp"
#include "fbtransfer/langevin.hpp"
#include "fbtransfer/params.hpp"
#include "fbtransfer/response.hpp"
#include "fbtransfer/spectra.hpp"
#include "fbtransfer/sweep.hpp"
#include "fbtransfer/wigner.hpp"

namespace {

using namespace fbtransfer;

struct GlobalOpts {
    std::string config_path;
    std::string out_dir = ".";
    std::string format = "csv";
    std::uint64_t seed = 12345;
    int threads = 1;
    bool no_gain_transform = false;
    bool seed_given = false;
};

FileConfig load_inputs(const GlobalOpts& g) {
    if (g.config_path.empty()) {
        FileConfig f;
        f.system = SystemConfig{};
        return f;
    }
    return load_config_file(g.config_path);
}

std::string out_path(const GlobalOpts& g, const std::string& name) {
    std::filesystem::create_directories(g.out_dir);
    return (std::filesystem::path(g.out_dir) / name).string();
}

void emit_table(const GlobalOpts& g, const std::string& stem, const std::string& csv,
                const nlohmann::ordered_json& json) {
    if (g.format == "json") {
        const std::string path = out_path(g, stem + ".json");
        write_text_file(path, json.dump(2) + "\n");
        std::printf("wrote %s\n", path.c_str());
    } else {
        const std::string path = out_path(g, stem + ".csv");
        write_text_file(path, csv);
        std::printf("wrote %s\n", path.c_str());
    }
}

std::vector<StateSpec> default_states() {
    return {StateSpec{StateKind::coherent, {2.0, 0.0}},
            StateSpec{StateKind::fock1, {0.0, 0.0}},
            StateSpec{StateKind::cat, {2.0, 0.0}}};
}

int run_validate(const GlobalOpts& g) {
    const FileConfig file = load_inputs(g);
    const auto diagnostics = validate(file.system);
    bool has_error = false;
    for (const auto& d : diagnostics) {
        const char* level = d.level == Diagnostic::Level::error ? "error" : "warning";
        std::printf("%s: %s: %s\n", level, d.field.c_str(), d.message.c_str());
        has_error |= d.level == Diagnostic::Level::error;
    }
    if (has_error) return 1;
    const DerivedParams p = derive(file.system);
    std::printf("ok: C = %s, n_th = %s, C/n_th = %s, G = %s, Gamma_eff = %s rad/s\n",
                format_double(p.cooperativity).c_str(), format_double(p.n_th).c_str(),
                format_double(p.n_th > 0.0 ? p.cooperativity / p.n_th : 0.0).c_str(),
                format_double(p.feedback_gain).c_str(),
                format_double(p.gamma_eff()).c_str());
    std::printf("config_hash: %s\n", hash_hex(config_hash(file.system)).c_str());
    return 0;
}

int run_respond(const GlobalOpts& g, double wmin, double wmax, int points) {
    const FileConfig file = load_inputs(g);
    const DerivedParams p = derive(file.system);
    const Gains gains = gains_numeric(p);
    if (points < 2) throw ConfigError("--points must be >= 2");
    std::vector<ResponseEval> rows;
    rows.reserve(static_cast<size_t>(points));
    for (int i = 0; i < points; ++i) {
        const double w =
            (wmin + (wmax - wmin) * static_cast<double>(i) / (points - 1)) * p.omega_m;
        rows.push_back(evaluate_response(w, p, gains.g_y));
    }
    nlohmann::ordered_json j;
    j["schema_version"] = 1;
    j["kind"] = "response_table";
    j["config_hash"] = hash_hex(config_hash(file.system));
    auto col = [&rows](auto&& get) {
        std::vector<double> v;
        v.reserve(rows.size());
        for (const auto& r : rows) v.push_back(get(r));
        return v;
    };
    j["omega"] = col([](const ResponseEval& r) { return r.omega; });
    j["phi_re"] = col([](const ResponseEval& r) { return r.phi.real(); });
    j["phi_im"] = col([](const ResponseEval& r) { return r.phi.imag(); });
    j["f_re"] = col([](const ResponseEval& r) { return r.f.real(); });
    j["f_im"] = col([](const ResponseEval& r) { return r.f.imag(); });
    j["chi_re"] = col([](const ResponseEval& r) { return r.chi.real(); });
    j["chi_im"] = col([](const ResponseEval& r) { return r.chi.imag(); });
    j["u_re"] = col([](const ResponseEval& r) { return r.u.real(); });
    j["u_im"] = col([](const ResponseEval& r) { return r.u.imag(); });
    emit_table(g, "respond", response_csv(rows), j);
    return 0;
}

int run_gains(const GlobalOpts& g) {
    const FileConfig file = load_inputs(g);
    const DerivedParams p = derive(file.system);
    const Gains numeric = gains_numeric(p);
    const Gains analytic = gains_analytic(p);
    std::printf("numeric : g_x = %s, g_y = %s, overall = %s, squeeze = %s\n",
                format_double(numeric.g_x).c_str(), format_double(numeric.g_y).c_str(),
                format_double(numeric.overall).c_str(),
                format_double(numeric.squeeze).c_str());
    std::printf("analytic: g_x = %s, g_y = %s, overall = %s, squeeze = %s\n",
                format_double(analytic.g_x).c_str(), format_double(analytic.g_y).c_str(),
                format_double(analytic.overall).c_str(),
                format_double(analytic.squeeze).c_str());
    emit_table(g, "gains", gains_csv(numeric, analytic), gains_to_json(numeric, analytic));
    return 0;
}

int run_psd(const GlobalOpts& g, double wmin, double wmax, int points) {
    const FileConfig file = load_inputs(g);
    const DerivedParams p = derive(file.system);
    const Gains gains = gains_numeric(p);
    if (points < 2) throw ConfigError("--points must be >= 2");
    double lo = wmin, hi = wmax;
    if (lo == 0.0 && hi == 0.0) {
        const double geff = p.gamma_eff();
        lo = std::max(0.0, (p.omega_m - 40.0 * geff) / p.omega_m);
        hi = std::min(2.0, (p.omega_m + 40.0 * geff) / p.omega_m);
    }
    std::vector<double> grid;
    grid.reserve(static_cast<size_t>(points));
    for (int i = 0; i < points; ++i) {
        grid.push_back((lo + (hi - lo) * static_cast<double>(i) / (points - 1)) *
                       p.omega_m);
    }
    const auto rows = psd_table(grid, p, gains);
    nlohmann::ordered_json j;
    j["schema_version"] = 1;
    j["kind"] = "psd_components";
    j["config_hash"] = hash_hex(config_hash(file.system));
    j["columns"] = {"omega", "qq_signal", "qq_opt_noise", "qq_mech", "pp_signal",
                    "pp_opt_noise", "pp_mech", "pq_cross", "qq_total", "pp_total"};
    nlohmann::ordered_json data = nlohmann::ordered_json::array();
    for (const auto& r : rows) {
        data.push_back({r.omega, r.qq_signal, r.qq_opt_noise, r.qq_mech, r.pp_signal,
                        r.pp_opt_noise, r.pp_mech, r.pq_cross, r.qq_total, r.pp_total});
    }
    j["rows"] = std::move(data);
    emit_table(g, "psd", components_csv(rows), j);
    return 0;
}

int run_variance(const GlobalOpts& g) {
    const FileConfig file = load_inputs(g);
    const DerivedParams p = derive(file.system);
    const Gains gains = gains_numeric(p);
    const VarianceBreakdown b = variance_numeric(p, gains);
    const NoiseCovariance cov = noise_covariance(b);
    std::printf("v_x_trans = %s, v_q_mech = %s, v_q_mismatch = %s, v_q_eta = %s\n",
                format_double(b.v_x_trans).c_str(), format_double(b.v_q_mech).c_str(),
                format_double(b.v_q_mismatch).c_str(), format_double(b.v_q_eta).c_str());
    std::printf("v_y_trans = %s, v_p_mech = %s, v_p_eta = %s, v_pq = %s\n",
                format_double(b.v_y_trans).c_str(), format_double(b.v_p_mech).c_str(),
                format_double(b.v_p_eta).c_str(), format_double(b.v_pq).c_str());
    std::printf("v11 = %s, v12 = %s, v22 = %s\n", format_double(cov.v11).c_str(),
                format_double(cov.v12).c_str(), format_double(cov.v22).c_str());
    emit_table(g, "variance", variance_csv(b, cov), variance_to_json(b, cov));
    return 0;
}

int run_fidelity(const GlobalOpts& g) {
    const FileConfig file = load_inputs(g);
    SweepSpec spec;
    spec.states = default_states();
    spec = sweep_spec_from_json(file.sweep, spec);
    if (spec.states.empty()) throw ConfigError("fidelity needs at least one state");

    const std::uint64_t cfg_hash = config_hash(file.system);
    const DerivedParams p = derive(file.system);
    const Gains gains = gains_numeric(p);
    const VarianceBreakdown b = variance_numeric(p, gains);
    const NoiseCovariance cov = noise_covariance(b);

    std::ostringstream csv;
    csv << "state,fidelity,raw,flagged,min_w,min_q,min_p\n";
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const auto& state : spec.states) {
        PhaseSpaceGrid geo = default_grid_for(state);
        geo.n_q = geo.n_p = spec.grid_n;
        const PhaseSpaceGrid target = wigner_state(state, geo);
        const PhaseSpaceGrid moved = transfer_wigner(
            state, cov, gains, geo, spec.apply_gain_transform && !g.no_gain_transform);
        const FidelityResult f = fidelity_detail(target, moved);
        const MinLocation m = min_wigner(moved);
        const std::string name = state_name(state);
        csv << name << ',' << format_double(f.value) << ',' << format_double(f.raw)
            << ',' << (f.flagged ? 1 : 0) << ',' << format_double(m.value) << ','
            << format_double(m.q) << ',' << format_double(m.p) << '\n';
        rows.push_back({{"state", name},
                        {"fidelity", f.value},
                        {"raw", f.raw},
                        {"flagged", f.flagged},
                        {"min_w", m.value},
                        {"min_q", m.q},
                        {"min_p", m.p}});
        write_grid_binary(out_path(g, "wigner_target_" + name), target,
                          "wigner_target_" + name, cfg_hash);
        write_grid_binary(out_path(g, "wigner_transferred_" + name), moved,
                          "wigner_transferred_" + name, cfg_hash);
        std::printf("%s: fidelity = %s, min W = %s\n", name.c_str(),
                    format_double(f.value).c_str(), format_double(m.value).c_str());
    }
    nlohmann::ordered_json j;
    j["schema_version"] = 1;
    j["kind"] = "fidelity_report";
    j["config_hash"] = hash_hex(cfg_hash);
    j["gain_transform_applied"] = spec.apply_gain_transform && !g.no_gain_transform;
    j["rows"] = std::move(rows);
    emit_table(g, "fidelity", csv.str(), j);
    return 0;
}

int run_sweep_cmd(const GlobalOpts& g, const std::string& axis_flag, double grid_min,
                  double grid_max, int grid_points, double c_over_nth,
                  bool with_states) {
    const FileConfig file = load_inputs(g);
    SystemConfig base = file.system;
    if (c_over_nth > 0.0) base = with_cooperativity_ratio(base, c_over_nth);

    SweepSpec spec;
    spec.axis = SweepAxis::gain_ratio;
    spec.grid = log_grid(1.0e-2, 1.0e3, 101);
    spec = sweep_spec_from_json(file.sweep, spec);
    if (!axis_flag.empty()) {
        spec.axis = axis_from_name(axis_flag);
        if (file.sweep.is_null() || !file.sweep.contains("grid")) {
            // Re-derive a sensible default grid for the requested axis.
            switch (spec.axis) {
                case SweepAxis::gain_ratio:
                    spec.grid = log_grid(1.0e-2, 1.0e3, 101);
                    break;
                case SweepAxis::cooperativity_ratio:
                    spec.grid = log_grid(1.0e-2, 1.0e2, 101);
                    if (spec.states.empty() && with_states) spec.states = default_states();
                    break;
                case SweepAxis::efficiency:
                    spec.grid = log_grid(0.1, 1.0, 21);
                    break;
            }
        }
    }
    if (grid_points > 0) {
        if (!(grid_min > 0.0) || !(grid_max > grid_min)) {
            throw ConfigError("--min/--max must satisfy 0 < min < max");
        }
        spec.grid = log_grid(grid_min, grid_max, grid_points);
    }
    if (with_states && spec.states.empty()) spec.states = default_states();
    if (g.no_gain_transform) spec.apply_gain_transform = false;

    const SweepReport report = run_sweep(base, spec, g.seed, g.threads);
    const std::string csv_path = out_path(g, "sweep.csv");
    write_text_file(csv_path, sweep_csv(report));
    const std::string json_path = out_path(g, "sweep.json");
    write_text_file(json_path, sweep_to_json(report).dump(2) + "\n");

    int failed = 0;
    for (const auto& row : report.rows) failed += row.ok ? 0 : 1;
    std::printf("wrote %s and %s (%zu rows, %d failed)\n", csv_path.c_str(),
                json_path.c_str(), report.rows.size(), failed);
    if (failed > 0) {
        for (const auto& row : report.rows) {
            if (!row.ok) {
                std::printf("failed at %s = %s: %s\n", axis_column(report.axis),
                            format_double(row.sweep_value).c_str(), row.status.c_str());
            }
        }
        return 2;
    }
    return 0;
}

int run_oracle(const GlobalOpts& g) {
    const FileConfig file = load_inputs(g);
    const DerivedParams p = derive(file.system);
    const double geff = p.gamma_eff();

    OracleSpec spec;
    spec.trajectory.dt = two_pi / p.omega_m / 64.0;
    spec.trajectory.burn_in = 10.0 / geff;
    spec.trajectory.duration = spec.trajectory.burn_in + 100.0 / geff;
    spec.trajectory.n_traj = 8;
    spec.trajectory.seed = g.seed;
    spec = oracle_spec_from_json(file.oracle, spec);
    if (g.seed_given) spec.trajectory.seed = g.seed;
    require_statistics_window(spec.trajectory, p);

    const std::uint64_t cfg_hash = config_hash(file.system);
    WelchAccumulator welch(spec.segment_samples, spec.trajectory.dt, spec.k_min,
                           spec.k_max);
    VarianceAccumulator var;
    for (int t = 0; t < spec.trajectory.n_traj; ++t) {
        const TraceRecord trace = simulate(p, spec.trajectory, t);
        if (spec.write_traces) {
            char name[32];
            std::snprintf(name, sizeof(name), "trace_%03d", t);
            write_trace_binary(out_path(g, name), trace, cfg_hash);
        }
        welch.add_trace(trace);
        var.add_trace(trace);
    }
    const PsdEstimate psd = welch.estimate();
    const VarianceEstimate ve = var.estimate();

    emit_table(g, "oracle_psd", psd_csv(psd), psd_to_json(psd));
    std::ostringstream vcsv;
    vcsv << "var_q,se_var_q,var_p,se_var_p,cov_qp,se_cov_qp,n_batches\n"
         << format_double(ve.var_q) << ',' << format_double(ve.se_var_q) << ','
         << format_double(ve.var_p) << ',' << format_double(ve.se_var_p) << ','
         << format_double(ve.cov_qp) << ',' << format_double(ve.se_cov_qp) << ','
         << ve.n_batches << '\n';
    emit_table(g, "oracle_variance", vcsv.str(), variance_estimate_to_json(ve));
    std::printf("var_q = %s +- %s, var_p = %s +- %s (%d batches, %d traces)\n",
                format_double(ve.var_q).c_str(), format_double(ve.se_var_q).c_str(),
                format_double(ve.var_p).c_str(), format_double(ve.se_var_p).c_str(),
                ve.n_batches, psd.n_traces);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Feedback-based optical-to-mechanical state-transfer toolkit"};
    app.require_subcommand(1);
    app.fallthrough();

    GlobalOpts g;
    if (const char* env = std::getenv("FBTRANSFER_THREADS")) {
        const int v = std::atoi(env);
        if (v > 0) g.threads = v;
    }
    app.add_option("--config", g.config_path, "JSON config path");
    app.add_option("--out", g.out_dir, "output directory (default .)");
    app.add_option("--format", g.format, "table format: csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    auto* seed_opt = app.add_option("--seed", g.seed, "RNG seed (default 12345)");
    app.add_option("--threads", g.threads,
                   "worker threads (default FBTRANSFER_THREADS or 1)");
    app.add_flag("--no-gain-transform", g.no_gain_transform,
                 "skip the gain rescaling of target states before convolution");

    auto* validate_cmd = app.add_subcommand("validate", "check a configuration");
    auto* respond_cmd = app.add_subcommand("respond", "tabulate response functions");
    double r_wmin = -2.0, r_wmax = 2.0;
    int r_points = 4001;
    respond_cmd->add_option("--wmin", r_wmin, "lower frequency in units of Omega");
    respond_cmd->add_option("--wmax", r_wmax, "upper frequency in units of Omega");
    respond_cmd->add_option("--points", r_points, "grid points");
    auto* gains_cmd = app.add_subcommand("gains", "numeric and analytic transfer gains");
    auto* psd_cmd = app.add_subcommand("psd", "analytic spectral density components");
    double p_wmin = 0.0, p_wmax = 0.0;
    int p_points = 2001;
    psd_cmd->add_option("--wmin", p_wmin, "lower frequency in units of Omega");
    psd_cmd->add_option("--wmax", p_wmax, "upper frequency in units of Omega");
    psd_cmd->add_option("--points", p_points, "grid points");
    auto* variance_cmd = app.add_subcommand("variance", "variance budget");
    auto* fidelity_cmd = app.add_subcommand("fidelity", "state-transfer fidelities");
    auto* sweep_cmd = app.add_subcommand("sweep", "parameter sweeps");
    std::string s_axis;
    double s_min = 0.0, s_max = 0.0, s_c_over_nth = 0.0;
    int s_points = 0;
    bool s_states = false;
    sweep_cmd->add_option("--axis", s_axis,
                          "cooperativity_ratio, gain_ratio, or efficiency");
    sweep_cmd->add_option("--min", s_min, "log grid lower bound");
    sweep_cmd->add_option("--max", s_max, "log grid upper bound");
    sweep_cmd->add_option("--points", s_points, "log grid size");
    sweep_cmd->add_option("--c-over-nth", s_c_over_nth,
                          "pin the base cooperativity ratio before sweeping");
    sweep_cmd->add_flag("--states", s_states, "include the default state fidelities");
    auto* oracle_cmd = app.add_subcommand("oracle", "stochastic time-domain run");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }
    g.seed_given = seed_opt->count() > 0;

    try {
        if (validate_cmd->parsed()) return run_validate(g);
        if (respond_cmd->parsed()) return run_respond(g, r_wmin, r_wmax, r_points);
        if (gains_cmd->parsed()) return run_gains(g);
        if (psd_cmd->parsed()) return run_psd(g, p_wmin, p_wmax, p_points);
        if (variance_cmd->parsed()) return run_variance(g);
        if (fidelity_cmd->parsed()) return run_fidelity(g);
        if (sweep_cmd->parsed()) {
            return run_sweep_cmd(g, s_axis, s_min, s_max, s_points, s_c_over_nth,
                                 s_states);
        }
        if (oracle_cmd->parsed()) return run_oracle(g);
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 0;
}
