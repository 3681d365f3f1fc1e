#include "fbtransfer/spectra.hpp"

#include <cmath>

#include "fbtransfer/constants.hpp"
#include "fbtransfer/errors.hpp"
#include "fbtransfer/response.hpp"

namespace fbtransfer {

namespace {

// Shared per-frequency ingredients of the steady-state solutions
//   Q = sqrt(Gamma) chi [ Q_in + phi P_in - 2 sqrt(C) phi X_in
//                         + (G f phi / 4 sqrt(C)) (Y_in - sqrt(rho) Y_v) ]
//   P = sqrt(Gamma) chi [ P_in - (G Gamma f / 2 Omega + 1) phi Q_in
//                         - 2 sqrt(C) X_in + (G f / 4 sqrt(C)) (Y_in - sqrt(rho) Y_v) ]
// with white inputs <Q_in Q_in> = <P_in P_in> = (n_th + 1/2) delta and
// <X_in X_in> = <Y_in Y_in> = <Y_v Y_v> = delta / 2.
struct Pieces {
    double chi2;    // |chi|^2
    double f2;      // |f|^2
    double phi2;    // |phi|^2
    cplx phi;
    cplx f;
    double big_n;   // n_th + 1/2
    double rho;     // (1 - eta)/eta
    double a;       // G / 8C
    double gamma;
    double c;
    double big_g;
};

Pieces make_pieces(double omega, const DerivedParams& p) {
    Pieces z;
    z.phi = phi_response(omega, p);
    z.f = lorentzian_filter(omega, p);
    z.chi2 = std::norm(loop_susceptibility(omega, p));
    z.f2 = std::norm(z.f);
    z.phi2 = std::norm(z.phi);
    z.big_n = p.n_th + 0.5;
    z.rho = p.measurement_rho();
    z.a = p.feedback_gain / (8.0 * p.cooperativity);
    z.gamma = p.gamma_m;
    z.c = p.cooperativity;
    z.big_g = p.feedback_gain;
    return z;
}

double qq_signal_at(const Pieces& z, double r) {
    return r * r * 2.0 * z.gamma * z.c * z.chi2 * (z.a * z.a * z.f2 + 1.0);
}

double qq_mech_at(const Pieces& z) {
    return z.gamma * z.chi2 * (1.0 + z.phi2) * z.big_n;
}

double qq_mismatch_at(const Pieces& z, double r) {
    const cplx t1 = z.phi + r * z.a * z.f;
    const cplx t2 = z.a * z.f * z.phi - r;
    return 2.0 * z.gamma * z.c * z.chi2 * (std::norm(t1) + std::norm(t2));
}

double qq_eta_at(const Pieces& z) {
    return z.rho * z.gamma * z.big_g * z.big_g / (32.0 * z.c) * z.chi2 * z.f2 *
           z.phi2;
}

double pp_signal_at(const Pieces& z) {
    return 2.0 * z.gamma * z.c * z.chi2 * (1.0 + z.a * z.a * z.f2);
}

double pq_cross_at(const Pieces& z, const DerivedParams& p) {
    const cplx fb = z.big_g * z.gamma * z.f / (2.0 * p.omega_m);
    const double mech = -z.gamma * z.chi2 * z.big_n * (fb * z.phi).real();
    const double eta = z.rho * z.gamma * z.big_g * z.big_g / (32.0 * z.c) *
                       z.chi2 * z.f2 * z.phi.real();
    return mech + eta;
}

}  // namespace

SpectrumComponents psd_components(double omega, const DerivedParams& p,
                                  const Gains& gains) {
    require_consistent_gains(gains, p);
    const double r = gains.squeeze;
    SpectrumComponents s;
    s.omega = omega;
    const Pieces z = make_pieces(omega, p);

    s.qq_signal = qq_signal_at(z, r);
    s.qq_mech = qq_mech_at(z);
    s.qq_opt_noise = qq_mismatch_at(z, r) + qq_eta_at(z);

    const cplx fbphi = (z.big_g * z.gamma * z.f / (2.0 * p.omega_m) + 1.0) * z.phi;
    s.pp_signal = pp_signal_at(z);
    s.pp_mech = z.gamma * z.chi2 * (1.0 + std::norm(fbphi)) * z.big_n;
    s.pp_opt_noise = z.rho * z.gamma * z.big_g * z.big_g / (32.0 * z.c) * z.chi2 * z.f2;

    s.pq_cross = pq_cross_at(z, p);
    s.qq_total = sqq_total(omega, p);
    s.pp_total = s.pp_signal + s.pp_opt_noise + s.pp_mech;  // exactly additive on P
    return s;
}

std::vector<SpectrumComponents> psd_table(const std::vector<double>& omegas,
                                          const DerivedParams& p,
                                          const Gains& gains) {
    require_consistent_gains(gains, p);
    Gains trusted = gains;
    trusted.params_tag = params_tag(p);
    trusted.norm_residual = 0.0;
    std::vector<SpectrumComponents> out;
    out.reserve(omegas.size());
    for (double w : omegas) {
        out.push_back(psd_components(w, p, trusted));
    }
    return out;
}

double sqq_total(double omega, const DerivedParams& p) {
    const Pieces z = make_pieces(omega, p);
    return z.gamma * z.chi2 *
           (z.big_n * (1.0 + z.phi2) + 2.0 * z.c * z.phi2 +
            z.big_g * z.big_g / (32.0 * z.c) * z.f2 * z.phi2 * (1.0 + z.rho));
}

double spp_total(double omega, const DerivedParams& p) {
    const Pieces z = make_pieces(omega, p);
    const cplx fbphi = (z.big_g * z.gamma * z.f / (2.0 * p.omega_m) + 1.0) * z.phi;
    return z.gamma * z.chi2 *
           (z.big_n * (1.0 + std::norm(fbphi)) + 2.0 * z.c +
            z.big_g * z.big_g / (32.0 * z.c) * z.f2 * (1.0 + z.rho));
}

VarianceBreakdown variance_numeric(const DerivedParams& p, const Gains& gains,
                                   const QuadratureSpec& spec) {
    require_consistent_gains(gains, p);
    const double r = gains.squeeze;
    const auto integrate = [&](auto&& density) {
        return integrate_spectrum(density, p, spec) / two_pi;
    };

    VarianceBreakdown b;
    b.v_x_trans = integrate(
        [&](double w) { return qq_signal_at(make_pieces(w, p), r); });
    b.v_q_mech =
        integrate([&](double w) { return qq_mech_at(make_pieces(w, p)); });
    b.v_q_mismatch = integrate(
        [&](double w) { return qq_mismatch_at(make_pieces(w, p), r); });
    b.v_q_eta =
        integrate([&](double w) { return qq_eta_at(make_pieces(w, p)); });
    b.v_y_trans =
        integrate([&](double w) { return pp_signal_at(make_pieces(w, p)); });
    b.v_p_mech = integrate([&](double w) {
        const Pieces z = make_pieces(w, p);
        const cplx fbphi =
            (z.big_g * z.gamma * z.f / (2.0 * p.omega_m) + 1.0) * z.phi;
        return z.gamma * z.chi2 * (1.0 + std::norm(fbphi)) * z.big_n;
    });
    b.v_p_eta = integrate([&](double w) {
        const Pieces z = make_pieces(w, p);
        return z.rho * z.gamma * z.big_g * z.big_g / (32.0 * z.c) * z.chi2 * z.f2;
    });
    b.v_pq =
        integrate([&](double w) { return pq_cross_at(make_pieces(w, p), p); });
    return b;
}

VarianceBreakdown variance_analytic(const DerivedParams& p) {
    const Gains g = gains_analytic(p);
    const double rho = p.measurement_rho();
    VarianceBreakdown b;
    b.v_x_trans = g.g_x * g.g_x / 2.0;
    b.v_q_mech = (0.5 + p.n_th) / (1.0 + p.feedback_gain / 2.0);
    b.v_q_mismatch = 0.0;
    b.v_q_eta = rho * g.g_x * g.g_x / 4.0;
    b.v_y_trans = g.g_y * g.g_y / 2.0;
    b.v_p_mech = b.v_q_mech;
    b.v_p_eta = rho * g.g_y * g.g_y / 4.0;
    b.v_pq = 0.0;
    return b;
}

NoiseCovariance noise_covariance(const VarianceBreakdown& b) {
    NoiseCovariance c;
    c.v11 = b.v_q_mech + b.v_q_mismatch + b.v_q_eta;
    c.v22 = b.v_p_mech + b.v_p_eta;
    c.v12 = b.v_pq;
    if (!(c.v11 > 0.0) || !(c.v22 > 0.0) ||
        c.v11 * c.v22 - c.v12 * c.v12 < 0.0) {
        throw ContractError(
            "noise covariance is not positive semidefinite; upstream spectra "
            "are inconsistent");
    }
    return c;
}

}  // namespace fbtransfer
