#pragma once

#include <string>
#include <vector>

namespace fbtransfer {

// Feedback gain selection: the fixed point G = 8C, or an explicit value.
struct GainPolicy {
    bool use_rule_8c = true;
    double explicit_g = 0.0;

    static GainPolicy rule_8c() { return {true, 0.0}; }
    static GainPolicy fixed(double g) { return {false, g}; }
};

// Physical inputs. Rates are cyclic (Hz), i.e. the quantity X in "X/2pi".
// Defaults are the worked parameter set used throughout the tests:
// Omega/2pi = 1 MHz, Gamma/2pi = 1 Hz, Gamma'/2pi = 1.59 MHz,
// kappa/2pi = 100 MHz, g_om/2pi = 395 kHz, T = 30 mK, eta = 1, G = 8C.
struct SystemConfig {
    double omega_m_cyc = 1.0e6;   // mechanical resonance (Hz)
    double gamma_m_cyc = 1.0;     // mechanical linewidth (Hz)
    double gamma_f_cyc = 1.59e6;  // feedback filter bandwidth (Hz)
    double kappa_cyc = 100.0e6;   // optical linewidth (Hz)
    double g_om_cyc = 395.0e3;    // boosted optomechanical coupling (Hz)
    double temperature = 0.030;   // bath temperature (K)
    double eta = 1.0;             // detection efficiency
    GainPolicy gain_policy{};
    bool exact_bose = false;      // exact Bose occupancy instead of kT/(hbar*Omega)
};

struct Diagnostic {
    enum class Level { warning, error };
    Level level;
    std::string field;
    std::string message;
};

// Everything downstream modules need, in angular units (rad/s).
struct DerivedParams {
    double omega_m = 0.0;   // Omega
    double gamma_m = 0.0;   // Gamma
    double gamma_f = 0.0;   // Gamma'
    double kappa = 0.0;
    double g_om = 0.0;
    double cooperativity = 0.0;  // C = 4 g_om^2 / (Gamma kappa)
    double n_th = 0.0;
    double feedback_gain = 0.0;  // G
    double eta = 1.0;

    double gamma_eff() const { return gamma_m * (1.0 + feedback_gain / 2.0); }
    double measurement_rho() const { return (1.0 - eta) / eta; }
};

// Machine-readable diagnostics; never mutates input, never throws.
std::vector<Diagnostic> validate(const SystemConfig& config);

// Angular rates, C, n_th, resolved G. Throws ConfigError naming the offending
// field when validate() reports errors.
DerivedParams derive(const SystemConfig& config);

// Convenience: same fixture with the coupling chosen so that C/n_th (or C)
// takes a prescribed value; used by sweeps, which vary g_om at fixed
// Gamma, kappa, Omega, T.
SystemConfig with_cooperativity(SystemConfig config, double target_c);
SystemConfig with_cooperativity_ratio(SystemConfig config, double c_over_nth);

}  // namespace fbtransfer
