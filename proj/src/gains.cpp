#include "fbtransfer/gains.hpp"

#include <cmath>
#include <cstring>

#include "fbtransfer/constants.hpp"
#include "fbtransfer/errors.hpp"

namespace fbtransfer {

std::uint64_t params_tag(const DerivedParams& p) {
    const double fields[] = {p.omega_m, p.gamma_m,       p.gamma_f,
                             p.kappa,   p.g_om,          p.cooperativity,
                             p.n_th,    p.feedback_gain, p.eta};
    std::uint64_t h = 1469598103934665603ull;
    unsigned char bytes[sizeof(fields)];
    std::memcpy(bytes, fields, sizeof(fields));
    for (unsigned char b : bytes) {
        h ^= b;
        h *= 1099511628211ull;
    }
    return h;
}

double gain_y_numeric(const DerivedParams& p, const FilterFn& filter,
                      const QuadratureSpec& spec) {
    const double a = p.feedback_gain / (8.0 * p.cooperativity);
    const auto integrand = [&](double w) {
        const double chi2 = std::norm(loop_susceptibility(w, p, filter));
        const double f2 = std::norm(filter(w));
        return chi2 * (a * a * f2 + 1.0);
    };
    const double integral = integrate_spectrum(integrand, p, spec);
    return std::sqrt(4.0 * p.gamma_m * p.cooperativity / two_pi * integral);
}

double gain_y_numeric(const DerivedParams& p, const QuadratureSpec& spec) {
    return gain_y_numeric(p, default_filter(p), spec);
}

double gain_x_numeric(const DerivedParams& p, double g_y, const FilterFn& filter,
                      const QuadratureSpec& spec) {
    if (!(g_y > 0.0)) {
        throw ContractError("gain_x_numeric requires g_y > 0");
    }
    const auto integrand = [&](double w) {
        const double chi2 = std::norm(loop_susceptibility(w, p, filter));
        return chi2 * phi_response(w, p).imag() * filter(w).imag();
    };
    const double integral = integrate_spectrum(integrand, p, spec);
    return -p.gamma_m * p.feedback_gain / (two_pi * g_y) * integral;
}

double gain_x_numeric(const DerivedParams& p, double g_y,
                      const QuadratureSpec& spec) {
    return gain_x_numeric(p, g_y, default_filter(p), spec);
}

Gains gains_numeric(const DerivedParams& p, const QuadratureSpec& spec) {
    Gains g;
    g.g_y = gain_y_numeric(p, spec);
    g.g_x = gain_x_numeric(p, g.g_y, spec);
    g.overall = std::sqrt(g.g_x * g.g_y);
    g.squeeze = g.g_x / g.g_y;
    g.params_tag = params_tag(p);
    g.norm_residual = 0.0;  // by construction of g_y, up to quadrature tolerance
    return g;
}

Gains gains_analytic(const DerivedParams& p) {
    const double c = p.cooperativity;
    const double big_g = p.feedback_gain;
    Gains g;
    g.g_y = 2.0 * std::sqrt(c * (1.0 + big_g * big_g / (64.0 * c * c)) / (2.0 + big_g));
    g.g_x = big_g == 0.0 ? 0.0 : 1.0 / (g.g_y * (1.0 + 2.0 / big_g));
    g.overall = std::sqrt(g.g_x * g.g_y);
    g.squeeze = g.g_x / g.g_y;
    g.params_tag = 0;  // analytic values carry no numeric-normalization promise
    g.norm_residual = 0.0;
    return g;
}

void require_consistent_gains(const Gains& gains, const DerivedParams& p) {
    if (!(gains.g_y > 0.0)) {
        throw ContractError("gains: g_y must be positive");
    }
    const double internal =
        std::max(std::abs(gains.overall - std::sqrt(gains.g_x * gains.g_y)),
                 std::abs(gains.squeeze - gains.g_x / gains.g_y));
    if (internal > 1.0e-9 * std::max(1.0, gains.g_y)) {
        throw ContractError("gains: overall/squeeze inconsistent with g_x, g_y");
    }
    if (gains.params_tag == params_tag(p) && gains.norm_residual <= 1.0e-6) {
        return;
    }
    const double g_y_ref = gain_y_numeric(p);
    const double residual = std::abs(gains.g_y * gains.g_y / (g_y_ref * g_y_ref) - 1.0);
    if (residual > 1.0e-6) {
        throw ContractError(
            "gains inconsistent with params: transferred-mode normalization "
            "residual " +
            std::to_string(residual) + " > 1e-6");
    }
}

}  // namespace fbtransfer
