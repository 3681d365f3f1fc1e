#pragma once

#include <vector>

#include "fbtransfer/gains.hpp"
#include "fbtransfer/params.hpp"
#include "fbtransfer/quadrature.hpp"

namespace fbtransfer {

// Symmetrized spectral densities (variance per unit angular frequency,
// V = (1/2pi) Int S domega, vacuum quadrature variance 1/2).
//
// The signal/mismatch split on Q uses the least-squares projection onto the
// transferred mode, so the component variances are additive, but the split
// spectra differ pointwise from the directly assembled totals by a cross
// density that integrates to zero. qq_total/pp_total carry the direct
// assembly; use those for comparisons against time-domain estimates.
struct SpectrumComponents {
    double omega = 0.0;
    double qq_signal = 0.0;
    double qq_opt_noise = 0.0;  // mode mismatch + detection inefficiency
    double qq_mech = 0.0;
    double pp_signal = 0.0;
    double pp_opt_noise = 0.0;  // detection inefficiency (P has no mismatch)
    double pp_mech = 0.0;
    double pq_cross = 0.0;      // non-signal cross density, symmetrized
    double qq_total = 0.0;
    double pp_total = 0.0;
};

struct VarianceBreakdown {
    double v_x_trans = 0.0;
    double v_q_mech = 0.0;
    double v_q_mismatch = 0.0;
    double v_q_eta = 0.0;
    double v_y_trans = 0.0;
    double v_p_mech = 0.0;
    double v_p_eta = 0.0;
    double v_pq = 0.0;
};

// Covariance of everything on (Q, P) that is not the transferred signal.
struct NoiseCovariance {
    double v11 = 0.0;
    double v12 = 0.0;
    double v22 = 0.0;
};

// Per-frequency decomposition. Validates the supplied gains against the
// params (ContractError when the transferred-mode normalization residual
// exceeds 1e-6).
SpectrumComponents psd_components(double omega, const DerivedParams& p,
                                  const Gains& gains);

// Same decomposition on a frequency table; gains validated once.
std::vector<SpectrumComponents> psd_table(const std::vector<double>& omegas,
                                          const DerivedParams& p,
                                          const Gains& gains);

// Directly assembled total symmetrized density of Q (signal + all noise),
// gain-independent; the reference the trajectory oracle is compared against.
double sqq_total(double omega, const DerivedParams& p);
double spp_total(double omega, const DerivedParams& p);

// Frequency-integrated budget via the panel quadrature.
VarianceBreakdown variance_numeric(const DerivedParams& p, const Gains& gains,
                                   const QuadratureSpec& spec = {});

// High-quality, wide-filter closed forms (uses analytic gains internally):
// v_x_trans = g_x^2/2, v_q_mech = (1/2 + n_th)/(1 + G/2), v_q_mismatch = 0,
// v_q_eta = ((1-eta)/eta) g_x^2/4, v_pq = 0, and Y/P analogues.
VarianceBreakdown variance_analytic(const DerivedParams& p);

// v11 = v_q_mech + v_q_mismatch + v_q_eta; v22 = v_p_mech + v_p_eta;
// v12 = v_pq. Throws ContractError if the assembled matrix is indefinite.
NoiseCovariance noise_covariance(const VarianceBreakdown& b);

}  // namespace fbtransfer
