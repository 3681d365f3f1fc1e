#include "fbtransfer/response.hpp"

#include <cmath>

#include "fbtransfer/errors.hpp"

namespace fbtransfer {

namespace {
constexpr cplx i_unit{0.0, 1.0};
}

cplx phi_response(double omega, const DerivedParams& p) {
    return p.omega_m / (cplx{0.5 * p.gamma_m, -omega});
}

cplx lorentzian_filter(double omega, const DerivedParams& p) {
    return p.gamma_f * p.omega_m /
           (cplx{omega * omega - p.omega_m * p.omega_m, p.gamma_f * omega});
}

FilterFn default_filter(const DerivedParams& p) {
    return [p](double omega) { return lorentzian_filter(omega, p); };
}

cplx loop_susceptibility(double omega, const DerivedParams& p,
                         const FilterFn& filter) {
    const cplx ph = phi_response(omega, p);
    const cplx den = p.omega_m / ph +
                     (p.omega_m + 0.5 * p.feedback_gain * p.gamma_m * filter(omega)) * ph;
    if (std::abs(den) < 1.0e-12 * p.omega_m) {
        throw NumericError("degenerate susceptibility: |denominator| = " +
                               std::to_string(std::abs(den)) + " rad/s at omega = " +
                               std::to_string(omega),
                           std::abs(den));
    }
    return 1.0 / den;
}

cplx loop_susceptibility(double omega, const DerivedParams& p) {
    return loop_susceptibility(omega, p, default_filter(p));
}

cplx modeshape(double omega, const DerivedParams& p, double g_y,
               const FilterFn& filter) {
    const double c = p.cooperativity;
    const cplx factor =
        p.feedback_gain * filter(omega) / (8.0 * c) - i_unit;
    return 2.0 * std::sqrt(p.gamma_m * c) / g_y *
           loop_susceptibility(omega, p, filter) * factor;
}

cplx modeshape(double omega, const DerivedParams& p, double g_y) {
    return modeshape(omega, p, g_y, default_filter(p));
}

ResponseEval evaluate_response(double omega, const DerivedParams& p, double g_y) {
    ResponseEval r;
    r.omega = omega;
    r.phi = phi_response(omega, p);
    r.f = lorentzian_filter(omega, p);
    r.chi = loop_susceptibility(omega, p);
    r.u = modeshape(omega, p, g_y);
    return r;
}

}  // namespace fbtransfer
