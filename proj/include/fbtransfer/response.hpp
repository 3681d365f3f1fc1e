#pragma once

#include <complex>
#include <functional>

#include "fbtransfer/params.hpp"

namespace fbtransfer {

using cplx = std::complex<double>;

// A feedback filter as a frequency-response handle, so alternatives to the
// shipped generalized Lorentzian can be plugged in. Must satisfy
// h(-omega) = conj(h(omega)) (real kernel) and be causal in the
// e^{+i omega t} forward-transform convention used throughout.
using FilterFn = std::function<cplx(double)>;

struct ResponseEval {
    double omega = 0.0;
    cplx phi;  // retarded mechanical response, dimensionless
    cplx f;    // feedback filter, dimensionless
    cplx chi;  // closed-loop susceptibility, units 1/(rad/s)
    cplx u;    // transferred-mode spectral amplitude, |u|^2 integrates to 2*pi
};

// phi(omega) = Omega / (Gamma/2 - i*omega)
cplx phi_response(double omega, const DerivedParams& p);

// Generalized Lorentzian f(omega) = Gamma' * Omega / (omega^2 - Omega^2 + i*Gamma'*omega);
// exactly -i at +Omega and +i at -Omega, -Gamma'/Omega at 0.
cplx lorentzian_filter(double omega, const DerivedParams& p);
FilterFn default_filter(const DerivedParams& p);

// Closed-loop susceptibility chi(omega) = 1 / (Omega/phi + (Omega + G*Gamma*f/2)*phi).
// Throws NumericError when |denominator| < 1e-12 * Omega (degenerate
// susceptibility: a pole crossing the real axis).
cplx loop_susceptibility(double omega, const DerivedParams& p, const FilterFn& filter);
cplx loop_susceptibility(double omega, const DerivedParams& p);

// u(omega) = (2*sqrt(Gamma*C)/g_y) * chi(omega) * (G*f(omega)/(8C) - i).
// Normalized to (1/2pi) Int |u|^2 domega = 1 when g_y comes from the numeric
// gain integral.
cplx modeshape(double omega, const DerivedParams& p, double g_y,
               const FilterFn& filter);
cplx modeshape(double omega, const DerivedParams& p, double g_y);

ResponseEval evaluate_response(double omega, const DerivedParams& p, double g_y);

}  // namespace fbtransfer
