#include "fbtransfer/params.hpp"

#include <cmath>

#include "fbtransfer/constants.hpp"
#include "fbtransfer/errors.hpp"

namespace fbtransfer {

namespace {

void check_positive(std::vector<Diagnostic>& out, const char* field, double v) {
    if (!(v > 0.0) || !std::isfinite(v)) {
        out.push_back({Diagnostic::Level::error, field,
                       std::string(field) + " must be strictly positive and finite"});
    }
}

}  // namespace

std::vector<Diagnostic> validate(const SystemConfig& c) {
    std::vector<Diagnostic> out;
    check_positive(out, "omega_m_cyc", c.omega_m_cyc);
    check_positive(out, "gamma_m_cyc", c.gamma_m_cyc);
    check_positive(out, "gamma_f_cyc", c.gamma_f_cyc);
    check_positive(out, "kappa_cyc", c.kappa_cyc);
    check_positive(out, "g_om_cyc", c.g_om_cyc);
    if (!(c.temperature >= 0.0) || !std::isfinite(c.temperature)) {
        out.push_back({Diagnostic::Level::error, "temperature",
                       "temperature must be >= 0 and finite"});
    }
    if (!(c.eta > 0.0 && c.eta <= 1.0)) {
        out.push_back({Diagnostic::Level::error, "eta",
                       "eta must lie in (0, 1]"});
    }
    if (!c.gain_policy.use_rule_8c && !std::isfinite(c.gain_policy.explicit_g)) {
        out.push_back({Diagnostic::Level::error, "gain_policy",
                       "explicit feedback gain must be finite"});
    }

    // Regime checks only make sense once the rates themselves are sane.
    if (out.empty()) {
        const double kappa_over_omega = c.kappa_cyc / c.omega_m_cyc;
        const double omega_over_gamma = c.omega_m_cyc / c.gamma_m_cyc;
        if (kappa_over_omega < 10.0) {
            out.push_back({Diagnostic::Level::error, "kappa_cyc",
                           "unresolved-sideband condition violated: kappa/Omega = " +
                               std::to_string(kappa_over_omega) + " < 10"});
        } else if (kappa_over_omega < 100.0) {
            out.push_back({Diagnostic::Level::warning, "kappa_cyc",
                           "kappa/Omega = " + std::to_string(kappa_over_omega) +
                               " < 100; unresolved-sideband assumption is marginal"});
        }
        if (omega_over_gamma < 10.0) {
            out.push_back({Diagnostic::Level::error, "gamma_m_cyc",
                           "high-quality condition violated: Omega/Gamma = " +
                               std::to_string(omega_over_gamma) + " < 10"});
        } else if (omega_over_gamma < 100.0) {
            out.push_back({Diagnostic::Level::warning, "gamma_m_cyc",
                           "Omega/Gamma = " + std::to_string(omega_over_gamma) +
                               " < 100; high-quality assumption is marginal"});
        }
    }
    return out;
}

DerivedParams derive(const SystemConfig& c) {
    for (const auto& d : validate(c)) {
        if (d.level == Diagnostic::Level::error) {
            throw ConfigError(d.field + ": " + d.message);
        }
    }

    DerivedParams p;
    p.omega_m = two_pi * c.omega_m_cyc;
    p.gamma_m = two_pi * c.gamma_m_cyc;
    p.gamma_f = two_pi * c.gamma_f_cyc;
    p.kappa = two_pi * c.kappa_cyc;
    p.g_om = two_pi * c.g_om_cyc;
    // Dimensionless, so cyclic rates give the identical value.
    p.cooperativity = 4.0 * c.g_om_cyc * c.g_om_cyc / (c.gamma_m_cyc * c.kappa_cyc);
    if (c.temperature == 0.0) {
        p.n_th = 0.0;
    } else if (c.exact_bose) {
        p.n_th = 1.0 / std::expm1(hbar * p.omega_m / (k_boltzmann * c.temperature));
    } else {
        p.n_th = k_boltzmann * c.temperature / (hbar * p.omega_m);
    }
    p.feedback_gain = c.gain_policy.use_rule_8c ? 8.0 * p.cooperativity
                                                : c.gain_policy.explicit_g;
    p.eta = c.eta;
    return p;
}

SystemConfig with_cooperativity(SystemConfig config, double target_c) {
    if (!(target_c > 0.0) || !std::isfinite(target_c)) {
        throw ConfigError("cooperativity target must be > 0 and finite");
    }
    config.g_om_cyc =
        std::sqrt(target_c * config.gamma_m_cyc * config.kappa_cyc / 4.0);
    return config;
}

SystemConfig with_cooperativity_ratio(SystemConfig config, double c_over_nth) {
    const double n_th = derive(config).n_th;
    if (!(n_th > 0.0)) {
        throw ConfigError("cooperativity ratio sweep requires n_th > 0 (temperature > 0)");
    }
    return with_cooperativity(config, c_over_nth * n_th);
}

}  // namespace fbtransfer
