#pragma once

#include <complex>
#include <string>
#include <vector>

#include "fbtransfer/gains.hpp"
#include "fbtransfer/spectra.hpp"

namespace fbtransfer {

// Uniform rectangular phase-space sampling, row-major with Q as the slow
// index: values[iq * n_p + ip] = W(q_at(iq), p_at(ip)).
struct PhaseSpaceGrid {
    double q_min = -6.0, q_max = 6.0;
    double p_min = -6.0, p_max = 6.0;
    int n_q = 256, n_p = 256;
    std::vector<double> values;

    double dq() const { return (q_max - q_min) / (n_q - 1); }
    double dp() const { return (p_max - p_min) / (n_p - 1); }
    double q_at(int i) const { return q_min + i * dq(); }
    double p_at(int j) const { return p_min + j * dp(); }
    double at(int iq, int ip) const {
        return values[static_cast<size_t>(iq) * n_p + ip];
    }
    double& at(int iq, int ip) {
        return values[static_cast<size_t>(iq) * n_p + ip];
    }
    bool same_geometry(const PhaseSpaceGrid& o) const {
        return q_min == o.q_min && q_max == o.q_max && p_min == o.p_min &&
               p_max == o.p_max && n_q == o.n_q && n_p == o.n_p;
    }
};

enum class StateKind { coherent, fock1, cat };

struct StateSpec {
    StateKind kind = StateKind::coherent;
    std::complex<double> alpha{0.0, 0.0};  // ignored for fock1
};

std::string state_name(const StateSpec& spec);

// Empty symmetric grid (values unset). Throws ConfigError for n < 64.
PhaseSpaceGrid make_grid(double extent, int n);

// Default +-6 window at 256x256, automatically enlarged once |alpha| > 2.5.
PhaseSpaceGrid default_grid_for(const StateSpec& spec);

// Sample the closed-form Wigner function (quadrature variance 1/2; vacuum
// W = exp(-Q^2-P^2)/pi). Throws CoverageError when the grid cannot hold the
// state's 1e-3 normalization.
PhaseSpaceGrid wigner_state(const StateSpec& spec, const PhaseSpaceGrid& geometry);

// Normalized bivariate Gaussian density of the given covariance, sampled on
// the grid. Semidefinite covariances get a diagonal jitter of
// 1e-12 * max(v11, v22); indefinite ones raise ContractError.
PhaseSpaceGrid noise_kernel(const NoiseCovariance& cov, const PhaseSpaceGrid& geometry);

// W'(Q, P) = W(Q/g_x, P/g_y) / (g_x g_y), bilinearly interpolated.
// Throws CoverageError when the rescaled state loses more than 1e-3 of its
// normalization off the grid edge.
PhaseSpaceGrid gain_transform(const PhaseSpaceGrid& w, const Gains& gains);

// Linear convolution with the Gaussian noise kernel (spectral domain,
// zero-padded, exact Fourier-space Gaussian).
PhaseSpaceGrid convolve(const PhaseSpaceGrid& w, const NoiseCovariance& cov);

// gain_transform then convolve; set apply_gain_transform = false for the
// raw overlap variant (the CLI flag --no-gain-transform).
PhaseSpaceGrid transfer_wigner(const StateSpec& spec, const NoiseCovariance& cov,
                               const Gains& gains, const PhaseSpaceGrid& geometry,
                               bool apply_gain_transform = true);

struct FidelityResult {
    double value = 0.0;  // clipped to [0, 1 + 1e-3]
    double raw = 0.0;
    bool flagged = false;  // raw exceeded 1
};

// 2*pi * Int W_a W_b dQ dP by trapezoid. ContractError on grid mismatch.
FidelityResult fidelity_detail(const PhaseSpaceGrid& a, const PhaseSpaceGrid& b);
double fidelity(const PhaseSpaceGrid& a, const PhaseSpaceGrid& b);

struct MinLocation {
    double value = 0.0;
    double q = 0.0;
    double p = 0.0;
};
MinLocation min_wigner(const PhaseSpaceGrid& w);

// Trapezoidal Int W dQ dP.
double grid_integral(const PhaseSpaceGrid& w);

// Closed-form oracle: the single-excitation Wigner function convolved with an
// isotropic Gaussian of per-axis variance v, evaluated at radius r. Negative
// at the origin iff v < 1/2.
double fock1_isotropic_conv(double r, double v);

// Closed-form overlap of two Gaussian states (means, covariances).
double gaussian_overlap(double mq_a, double mp_a, const NoiseCovariance& cov_a,
                        double mq_b, double mp_b, const NoiseCovariance& cov_b);

}  // namespace fbtransfer
