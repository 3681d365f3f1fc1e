#include "fbtransfer/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "fbtransfer/constants.hpp"
#include "fbtransfer/errors.hpp"

namespace fbtransfer {

namespace {

constexpr std::uint64_t fnv_offset = 1469598103934665603ULL;
constexpr std::uint64_t fnv_prime = 1099511628211ULL;

std::uint64_t fnv1a(const std::string& bytes) {
    std::uint64_t h = fnv_offset;
    for (unsigned char c : bytes) {
        h ^= static_cast<std::uint64_t>(c);
        h *= fnv_prime;
    }
    return h;
}

double require_number(const nlohmann::json& j, const std::string& key, double fallback,
                      bool* present = nullptr) {
    if (!j.contains(key)) {
        if (present) *present = false;
        return fallback;
    }
    if (present) *present = true;
    if (!j.at(key).is_number()) {
        throw ConfigError("config key '" + key + "' must be a number");
    }
    return j.at(key).get<double>();
}

Scheme scheme_from_name(const std::string& name) {
    if (name == "exact") return Scheme::exact;
    if (name == "heun") return Scheme::heun;
    if (name == "euler") return Scheme::euler;
    throw ConfigError("unknown scheme '" + name + "'; expected exact, heun, or euler");
}

}  // namespace

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

std::string csv_escape(const std::string& s) {
    bool needs_quotes = false;
    for (char c : s) {
        if (c == ',' || c == '"' || c == '\n' || c == '\r') {
            needs_quotes = true;
            break;
        }
    }
    if (!needs_quotes) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\"";
        else if (c == '\n' || c == '\r') out += ' ';
        else out += c;
    }
    out += '"';
    return out;
}

std::string hash_hex(std::uint64_t h) {
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

nlohmann::ordered_json config_to_json(const SystemConfig& c) {
    nlohmann::ordered_json j;
    j["omega_m_cyc"] = c.omega_m_cyc;
    j["gamma_m_cyc"] = c.gamma_m_cyc;
    j["gamma_f_cyc"] = c.gamma_f_cyc;
    j["kappa_cyc"] = c.kappa_cyc;
    j["g_om_cyc"] = c.g_om_cyc;
    j["temperature"] = c.temperature;
    j["eta"] = c.eta;
    if (c.gain_policy.use_rule_8c) {
        j["gain_policy"] = "8C";
    } else {
        j["gain_policy"] = c.gain_policy.explicit_g;
    }
    j["exact_bose"] = c.exact_bose;
    return j;
}

SystemConfig config_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw ConfigError("config root must be a JSON object");
    static const char* known[] = {"omega_m_cyc", "gamma_m_cyc", "gamma_f_cyc",
                                  "kappa_cyc", "g_om_cyc", "temperature", "eta",
                                  "gain_policy", "exact_bose", "sweep", "oracle"};
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool ok = false;
        for (const char* k : known) {
            if (it.key() == k) {
                ok = true;
                break;
            }
        }
        if (!ok) throw ConfigError("unknown config key '" + it.key() + "'");
    }

    SystemConfig c;
    c.omega_m_cyc = require_number(j, "omega_m_cyc", c.omega_m_cyc);
    c.gamma_m_cyc = require_number(j, "gamma_m_cyc", c.gamma_m_cyc);
    c.gamma_f_cyc = require_number(j, "gamma_f_cyc", c.gamma_f_cyc);
    c.kappa_cyc = require_number(j, "kappa_cyc", c.kappa_cyc);
    c.g_om_cyc = require_number(j, "g_om_cyc", c.g_om_cyc);
    c.temperature = require_number(j, "temperature", c.temperature);
    c.eta = require_number(j, "eta", c.eta);
    if (j.contains("exact_bose")) {
        if (!j.at("exact_bose").is_boolean()) {
            throw ConfigError("config key 'exact_bose' must be a boolean");
        }
        c.exact_bose = j.at("exact_bose").get<bool>();
    }
    if (j.contains("gain_policy")) {
        const auto& gp = j.at("gain_policy");
        if (gp.is_string()) {
            if (gp.get<std::string>() != "8C") {
                throw ConfigError("gain_policy string must be \"8C\"");
            }
            c.gain_policy = GainPolicy::rule_8c();
        } else if (gp.is_number()) {
            c.gain_policy = GainPolicy::fixed(gp.get<double>());
        } else {
            throw ConfigError("gain_policy must be \"8C\" or a number");
        }
    }
    return c;
}

std::uint64_t config_hash(const SystemConfig& config) {
    return fnv1a(config_to_json(config).dump());
}

FileConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw ConfigError("config file '" + path + "': " + e.what());
    }
    FileConfig out;
    out.system = config_from_json(j);
    if (j.contains("sweep")) out.sweep = j.at("sweep");
    if (j.contains("oracle")) out.oracle = j.at("oracle");
    return out;
}

StateSpec state_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("kind")) {
        throw ConfigError("state spec must be an object with a 'kind' key");
    }
    StateSpec s;
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "coherent") s.kind = StateKind::coherent;
    else if (kind == "fock1") s.kind = StateKind::fock1;
    else if (kind == "cat") s.kind = StateKind::cat;
    else throw ConfigError("unknown state kind '" + kind + "'");
    s.alpha = {require_number(j, "alpha_re", 0.0), require_number(j, "alpha_im", 0.0)};
    return s;
}

SweepSpec sweep_spec_from_json(const nlohmann::json& j, SweepSpec defaults) {
    if (j.is_null()) return defaults;
    if (!j.is_object()) throw ConfigError("sweep section must be a JSON object");
    SweepSpec s = defaults;
    if (j.contains("axis")) s.axis = axis_from_name(j.at("axis").get<std::string>());
    if (j.contains("grid")) {
        const auto& g = j.at("grid");
        if (g.is_array()) {
            s.grid.clear();
            for (const auto& v : g) s.grid.push_back(v.get<double>());
        } else if (g.is_object()) {
            s.grid = log_grid(g.at("min").get<double>(), g.at("max").get<double>(),
                              g.at("n").get<int>());
        } else {
            throw ConfigError("sweep grid must be an array or {min, max, n}");
        }
    }
    if (j.contains("states")) {
        s.states.clear();
        for (const auto& st : j.at("states")) s.states.push_back(state_from_json(st));
    }
    if (j.contains("grid_n")) s.grid_n = j.at("grid_n").get<int>();
    if (j.contains("apply_gain_transform")) {
        s.apply_gain_transform = j.at("apply_gain_transform").get<bool>();
    }
    return s;
}

TrajectoryConfig trajectory_from_json(const nlohmann::json& j, TrajectoryConfig defaults) {
    if (j.is_null()) return defaults;
    TrajectoryConfig c = defaults;
    c.dt = require_number(j, "dt", c.dt);
    c.duration = require_number(j, "duration", c.duration);
    c.burn_in = require_number(j, "burn_in", c.burn_in);
    if (j.contains("n_traj")) c.n_traj = j.at("n_traj").get<int>();
    if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("scheme")) c.scheme = scheme_from_name(j.at("scheme").get<std::string>());
    c.initial_q = require_number(j, "initial_q", c.initial_q);
    c.initial_p = require_number(j, "initial_p", c.initial_p);
    if (j.contains("include_noise")) c.include_noise = j.at("include_noise").get<bool>();
    return c;
}

OracleSpec oracle_spec_from_json(const nlohmann::json& j, OracleSpec defaults) {
    if (j.is_null()) return defaults;
    if (!j.is_object()) throw ConfigError("oracle section must be a JSON object");
    OracleSpec s = defaults;
    s.trajectory = trajectory_from_json(j, s.trajectory);
    if (j.contains("segment_samples")) s.segment_samples = j.at("segment_samples").get<int>();
    if (j.contains("k_min")) s.k_min = j.at("k_min").get<int>();
    if (j.contains("k_max")) s.k_max = j.at("k_max").get<int>();
    if (j.contains("write_traces")) s.write_traces = j.at("write_traces").get<bool>();
    return s;
}

std::string sweep_csv(const SweepReport& report) {
    std::ostringstream out;
    out << axis_column(report.axis)
        << ",g_x,g_y,overall,squeeze"
        << ",v_x_trans,v_q_mech,v_q_mismatch,v_q_eta,v_y_trans,v_p_mech,v_p_eta,v_pq"
        << ",v11,v12,v22";
    for (const auto& name : report.state_names) {
        out << ",fidelity_" << name << ",min_w_" << name;
    }
    out << ",status,config_hash,seed,version\n";

    auto cell = [](double v) { return std::isnan(v) ? std::string() : format_double(v); };
    for (const auto& row : report.rows) {
        out << format_double(row.sweep_value);
        if (row.ok) {
            out << ',' << cell(row.gains.g_x) << ',' << cell(row.gains.g_y) << ','
                << cell(row.gains.overall) << ',' << cell(row.gains.squeeze) << ','
                << cell(row.variances.v_x_trans) << ',' << cell(row.variances.v_q_mech)
                << ',' << cell(row.variances.v_q_mismatch) << ','
                << cell(row.variances.v_q_eta) << ',' << cell(row.variances.v_y_trans)
                << ',' << cell(row.variances.v_p_mech) << ',' << cell(row.variances.v_p_eta)
                << ',' << cell(row.variances.v_pq) << ',' << cell(row.covariance.v11)
                << ',' << cell(row.covariance.v12) << ',' << cell(row.covariance.v22);
        } else {
            for (int i = 0; i < 15; ++i) out << ',';
        }
        for (size_t s = 0; s < report.state_names.size(); ++s) {
            if (s < row.fidelities.size()) {
                out << ',' << cell(row.fidelities[s]) << ',' << cell(row.min_w[s]);
            } else {
                out << ",,";
            }
        }
        out << ',' << csv_escape(row.status) << ',' << hash_hex(row.config_hash) << ','
            << report.seed << ',' << report.version << '\n';
    }
    return out.str();
}

nlohmann::ordered_json sweep_to_json(const SweepReport& report) {
    nlohmann::ordered_json j;
    j["schema_version"] = 1;
    j["kind"] = "sweep_report";
    j["axis"] = axis_name(report.axis);
    j["states"] = report.state_names;
    j["seed"] = report.seed;
    j["version"] = report.version;
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    auto cell = [](double v) -> nlohmann::ordered_json {
        if (std::isnan(v)) return nullptr;
        return v;
    };
    for (const auto& row : report.rows) {
        nlohmann::ordered_json r;
        r["value"] = row.sweep_value;
        r["status"] = row.status;
        r["config_hash"] = hash_hex(row.config_hash);
        if (row.ok) {
            r["gains"] = {{"g_x", row.gains.g_x},
                          {"g_y", row.gains.g_y},
                          {"overall", row.gains.overall},
                          {"squeeze", row.gains.squeeze}};
            r["variances"] = {{"v_x_trans", row.variances.v_x_trans},
                              {"v_q_mech", row.variances.v_q_mech},
                              {"v_q_mismatch", row.variances.v_q_mismatch},
                              {"v_q_eta", row.variances.v_q_eta},
                              {"v_y_trans", row.variances.v_y_trans},
                              {"v_p_mech", row.variances.v_p_mech},
                              {"v_p_eta", row.variances.v_p_eta},
                              {"v_pq", row.variances.v_pq}};
            r["covariance"] = {{"v11", row.covariance.v11},
                               {"v12", row.covariance.v12},
                               {"v22", row.covariance.v22}};
        }
        if (!report.state_names.empty()) {
            nlohmann::ordered_json fid, minw;
            for (size_t s = 0; s < report.state_names.size(); ++s) {
                const double f = s < row.fidelities.size() ? row.fidelities[s]
                                                           : std::nan("");
                const double m = s < row.min_w.size() ? row.min_w[s] : std::nan("");
                fid[report.state_names[s]] = cell(f);
                minw[report.state_names[s]] = cell(m);
            }
            r["fidelity"] = fid;
            r["min_w"] = minw;
        }
        rows.push_back(std::move(r));
    }
    j["rows"] = std::move(rows);
    return j;
}

std::string gains_csv(const Gains& numeric, const Gains& analytic) {
    std::ostringstream out;
    out << "method,g_x,g_y,overall,squeeze\n";
    out << "numeric," << format_double(numeric.g_x) << ',' << format_double(numeric.g_y)
        << ',' << format_double(numeric.overall) << ',' << format_double(numeric.squeeze)
        << '\n';
    out << "analytic," << format_double(analytic.g_x) << ','
        << format_double(analytic.g_y) << ',' << format_double(analytic.overall) << ','
        << format_double(analytic.squeeze) << '\n';
    return out.str();
}

nlohmann::ordered_json gains_to_json(const Gains& numeric, const Gains& analytic) {
    nlohmann::ordered_json j;
    j["schema_version"] = 1;
    j["kind"] = "gains";
    j["numeric"] = {{"g_x", numeric.g_x},
                    {"g_y", numeric.g_y},
                    {"overall", numeric.overall},
                    {"squeeze", numeric.squeeze}};
    j["analytic"] = {{"g_x", analytic.g_x},
                     {"g_y", analytic.g_y},
                     {"overall", analytic.overall},
                     {"squeeze", analytic.squeeze}};
    return j;
}

std::string variance_csv(const VarianceBreakdown& b, const NoiseCovariance& cov) {
    std::ostringstream out;
    out << "v_x_trans,v_q_mech,v_q_mismatch,v_q_eta,v_y_trans,v_p_mech,v_p_eta,v_pq,"
        << "v11,v12,v22\n";
    out << format_double(b.v_x_trans) << ',' << format_double(b.v_q_mech) << ','
        << format_double(b.v_q_mismatch) << ',' << format_double(b.v_q_eta) << ','
        << format_double(b.v_y_trans) << ',' << format_double(b.v_p_mech) << ','
        << format_double(b.v_p_eta) << ',' << format_double(b.v_pq) << ','
        << format_double(cov.v11) << ',' << format_double(cov.v12) << ','
        << format_double(cov.v22) << '\n';
    return out.str();
}

nlohmann::ordered_json variance_to_json(const VarianceBreakdown& b,
                                        const NoiseCovariance& cov) {
    nlohmann::ordered_json j;
    j["schema_version"] = 1;
    j["kind"] = "variance_breakdown";
    j["v_x_trans"] = b.v_x_trans;
    j["v_q_mech"] = b.v_q_mech;
    j["v_q_mismatch"] = b.v_q_mismatch;
    j["v_q_eta"] = b.v_q_eta;
    j["v_y_trans"] = b.v_y_trans;
    j["v_p_mech"] = b.v_p_mech;
    j["v_p_eta"] = b.v_p_eta;
    j["v_pq"] = b.v_pq;
    j["covariance"] = {{"v11", cov.v11}, {"v12", cov.v12}, {"v22", cov.v22}};
    return j;
}

std::string response_csv(const std::vector<ResponseEval>& rows) {
    std::ostringstream out;
    out << "omega,phi_re,phi_im,f_re,f_im,chi_re,chi_im,u_re,u_im\n";
    for (const auto& r : rows) {
        out << format_double(r.omega) << ',' << format_double(r.phi.real()) << ','
            << format_double(r.phi.imag()) << ',' << format_double(r.f.real()) << ','
            << format_double(r.f.imag()) << ',' << format_double(r.chi.real()) << ','
            << format_double(r.chi.imag()) << ',' << format_double(r.u.real()) << ','
            << format_double(r.u.imag()) << '\n';
    }
    return out.str();
}

std::string components_csv(const std::vector<SpectrumComponents>& rows) {
    std::ostringstream out;
    out << "omega,qq_signal,qq_opt_noise,qq_mech,pp_signal,pp_opt_noise,pp_mech,"
        << "pq_cross,qq_total,pp_total\n";
    for (const auto& r : rows) {
        out << format_double(r.omega) << ',' << format_double(r.qq_signal) << ','
            << format_double(r.qq_opt_noise) << ',' << format_double(r.qq_mech) << ','
            << format_double(r.pp_signal) << ',' << format_double(r.pp_opt_noise) << ','
            << format_double(r.pp_mech) << ',' << format_double(r.pq_cross) << ','
            << format_double(r.qq_total) << ',' << format_double(r.pp_total) << '\n';
    }
    return out.str();
}

std::string psd_csv(const PsdEstimate& psd) {
    std::ostringstream out;
    out << "omega,s_qq,se_qq,s_pp,se_pp\n";
    for (size_t i = 0; i < psd.omega.size(); ++i) {
        out << format_double(psd.omega[i]) << ',' << format_double(psd.s_qq[i]) << ','
            << format_double(psd.se_qq[i]) << ',' << format_double(psd.s_pp[i]) << ','
            << format_double(psd.se_pp[i]) << '\n';
    }
    return out.str();
}

nlohmann::ordered_json psd_to_json(const PsdEstimate& psd) {
    nlohmann::ordered_json j;
    j["schema_version"] = 1;
    j["kind"] = "psd_estimate";
    j["n_traces"] = psd.n_traces;
    j["segments_per_trace"] = psd.segments_per_trace;
    j["omega"] = psd.omega;
    j["s_qq"] = psd.s_qq;
    j["se_qq"] = psd.se_qq;
    j["s_pp"] = psd.s_pp;
    j["se_pp"] = psd.se_pp;
    return j;
}

nlohmann::ordered_json variance_estimate_to_json(const VarianceEstimate& v) {
    nlohmann::ordered_json j;
    j["schema_version"] = 1;
    j["kind"] = "variance_estimate";
    j["var_q"] = v.var_q;
    j["se_var_q"] = v.se_var_q;
    j["var_p"] = v.var_p;
    j["se_var_p"] = v.se_var_p;
    j["cov_qp"] = v.cov_qp;
    j["se_cov_qp"] = v.se_cov_qp;
    j["n_batches"] = v.n_batches;
    return j;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot open '" + path + "' for writing");
    out << content;
    if (!out) throw ConfigError("write failed for '" + path + "'");
}

void write_grid_binary(const std::string& base_path, const PhaseSpaceGrid& grid,
                       const std::string& kind, std::uint64_t cfg_hash) {
    const std::string data_path = base_path + ".f64";
    std::ofstream out(data_path, std::ios::binary);
    if (!out) throw ConfigError("cannot open '" + data_path + "' for writing");
    out.write(reinterpret_cast<const char*>(grid.values.data()),
              static_cast<std::streamsize>(grid.values.size() * sizeof(double)));
    if (!out) throw ConfigError("write failed for '" + data_path + "'");

    nlohmann::ordered_json j;
    j["schema_version"] = 1;
    j["kind"] = kind;
    j["q_min"] = grid.q_min;
    j["q_max"] = grid.q_max;
    j["p_min"] = grid.p_min;
    j["p_max"] = grid.p_max;
    j["n_q"] = grid.n_q;
    j["n_p"] = grid.n_p;
    j["layout"] = "row_major_q_slow";
    j["dtype"] = "float64_le";
    j["config_hash"] = hash_hex(cfg_hash);
    write_text_file(base_path + ".json", j.dump(2) + "\n");
}

PhaseSpaceGrid read_grid_binary(const std::string& base_path) {
    std::ifstream meta(base_path + ".json");
    if (!meta) throw ConfigError("cannot open '" + base_path + ".json'");
    nlohmann::json j;
    meta >> j;
    PhaseSpaceGrid g;
    g.q_min = j.at("q_min").get<double>();
    g.q_max = j.at("q_max").get<double>();
    g.p_min = j.at("p_min").get<double>();
    g.p_max = j.at("p_max").get<double>();
    g.n_q = j.at("n_q").get<int>();
    g.n_p = j.at("n_p").get<int>();
    if (j.at("layout").get<std::string>() != "row_major_q_slow" ||
        j.at("dtype").get<std::string>() != "float64_le") {
        throw ConfigError("unsupported grid layout in '" + base_path + ".json'");
    }
    const size_t n = static_cast<size_t>(g.n_q) * static_cast<size_t>(g.n_p);
    g.values.resize(n);
    std::ifstream data(base_path + ".f64", std::ios::binary);
    if (!data) throw ConfigError("cannot open '" + base_path + ".f64'");
    data.read(reinterpret_cast<char*>(g.values.data()),
              static_cast<std::streamsize>(n * sizeof(double)));
    if (static_cast<size_t>(data.gcount()) != n * sizeof(double)) {
        throw ConfigError("grid payload '" + base_path + ".f64' is truncated");
    }
    return g;
}

void write_trace_binary(const std::string& base_path, const TraceRecord& trace,
                        std::uint64_t cfg_hash) {
    const std::string data_path = base_path + ".f64";
    std::ofstream out(data_path, std::ios::binary);
    if (!out) throw ConfigError("cannot open '" + data_path + "' for writing");
    out.write(reinterpret_cast<const char*>(trace.q.data()),
              static_cast<std::streamsize>(trace.q.size() * sizeof(double)));
    out.write(reinterpret_cast<const char*>(trace.p.data()),
              static_cast<std::streamsize>(trace.p.size() * sizeof(double)));
    if (!out) throw ConfigError("write failed for '" + data_path + "'");

    nlohmann::ordered_json j;
    j["schema_version"] = 1;
    j["kind"] = "trace";
    j["dt"] = trace.dt;
    j["t_start"] = trace.t_start;
    j["n_samples"] = trace.q.size();
    j["layout"] = "q_block_then_p_block";
    j["dtype"] = "float64_le";
    j["config_hash"] = hash_hex(cfg_hash);
    write_text_file(base_path + ".json", j.dump(2) + "\n");
}

}  // namespace fbtransfer
