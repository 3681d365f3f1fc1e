// Acceptance gate: every release criterion evaluated at its stated tolerance.
// Each criterion prints one [PASS]/[FAIL] line per check and closes with a
// single "criterion N: PASS|FAIL" verdict. The process exits with the number
// of failed criteria, so a clean release run exits 0.
//
// Usage: fbtransfer_acceptance [--criterion N]   (N = 1..8; default runs all)

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <string>
#include <vector>

#include "fbtransfer/constants.hpp"
#include "fbtransfer/errors.hpp"
#include "fbtransfer/fft.hpp"
#include "fbtransfer/gains.hpp"
#include "fbtransfer/langevin.hpp"
#include "fbtransfer/params.hpp"
#include "fbtransfer/quadrature.hpp"
#include "fbtransfer/response.hpp"
#include "fbtransfer/spectra.hpp"
#include "fbtransfer/sweep.hpp"
#include "fbtransfer/wigner.hpp"

namespace {

using namespace fbtransfer;

std::string fmt(const char* f, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof(buf), f, ap);
    va_end(ap);
    return buf;
}

double rel_dev(double value, double reference) {
    return std::abs(value - reference) / std::abs(reference);
}

struct Gate {
    int failed = 0;
    void check(bool ok, const std::string& what) {
        std::printf("  [%s] %s\n", ok ? "PASS" : "FAIL", what.c_str());
        if (!ok) ++failed;
    }
};

// ---------------------------------------------------------------------------
// 1. The matched gain policy equalizes the two transfer gains, keeps their
//    geometric mean at unity, and the numeric gain integrals track the
//    closed forms to 1% over five decades of loop gain.
// ---------------------------------------------------------------------------
bool criterion_1() {
    Gate g;

    const DerivedParams canon = derive(SystemConfig{});
    const Gains matched = gains_numeric(canon);
    g.check(std::abs(matched.squeeze - 1.0) <= 0.01,
            fmt("matched-gain ratio g_x/g_y = %.6f (1.00 +- 0.01)", matched.squeeze));
    g.check(matched.overall >= 0.999 && matched.overall <= 1.001,
            fmt("matched-gain geometric mean sqrt(g_x g_y) = %.6f (within [0.999, 1.001])",
                matched.overall));

    const SystemConfig small_c = with_cooperativity(SystemConfig{}, 10.0);
    double worst = 0.0;
    double worst_ratio = 0.0;
    const int n = 13;
    for (int i = 0; i < n; ++i) {
        const double ratio = 1.0e-2 * std::pow(10.0, 5.0 * i / (n - 1.0));
        SystemConfig cfg = small_c;
        cfg.gain_policy = GainPolicy::fixed(ratio * 10.0);
        const DerivedParams p = derive(cfg);
        const Gains num = gains_numeric(p);
        const Gains ana = gains_analytic(p);
        const double dev = std::max({rel_dev(num.g_x, ana.g_x), rel_dev(num.g_y, ana.g_y),
                                     rel_dev(num.overall, ana.overall)});
        if (dev > worst) {
            worst = dev;
            worst_ratio = ratio;
        }
    }
    g.check(worst <= 0.01,
            fmt("numeric vs closed-form gains over G/C in [1e-2, 1e3]: "
                "max relative deviation %.3e at G/C = %.3g (<= 0.01)",
                worst, worst_ratio));
    return g.failed == 0;
}

// ---------------------------------------------------------------------------
// 2. Stationary noise budget asymptotics: the transferred quadrature noise
//    approaches half a quantum, the detection-inefficiency channel approaches
//    (1 - eta)/(4 eta), the mechanical residual follows
//    (1/2 + n_th)/(1 + G/2) at the matched gain, and that residual crosses
//    half a quantum at C = n_th/2.
// ---------------------------------------------------------------------------
bool criterion_2() {
    Gate g;
    const SystemConfig base{};

    for (const double c_target : {100.0, 6241.0}) {
        const DerivedParams p = derive(with_cooperativity(base, c_target));
        const VarianceBreakdown b = variance_numeric(p, gains_numeric(p));
        g.check(std::abs(b.v_x_trans - 0.5) <= 0.01,
                fmt("transferred Q noise at C = %.0f: v_x_trans = %.6f (0.5 +- 2%%)",
                    c_target, b.v_x_trans));
    }

    // (1-eta)/(4 eta) is the large-C asymptote inside the narrowband regime;
    // the residual deviation scales with the broadened linewidth over the
    // resonance frequency (0.6% at C = 1000, 4% by C = 6241 where
    // Gamma_eff/Omega reaches 0.025), so the asymptote is probed at C = 1000
    // where C >> 1 while the closed form still applies.
    for (const double eta : {0.5, 0.75, 0.9}) {
        SystemConfig cfg = with_cooperativity(base, 1000.0);
        cfg.eta = eta;
        const DerivedParams p = derive(cfg);
        const VarianceBreakdown b = variance_numeric(p, gains_numeric(p));
        const double expected = (1.0 - eta) / (4.0 * eta);
        g.check(rel_dev(b.v_q_eta, expected) <= 0.02,
                fmt("inefficiency noise at eta = %.2f, C = 1000: v_q_eta = %.6f vs "
                    "(1-eta)/(4 eta) = %.6f (+- 2%%)",
                    eta, b.v_q_eta, expected));
    }

    const DerivedParams canon = derive(base);
    const VarianceBreakdown b = variance_numeric(canon, gains_numeric(canon));
    const double mech_expected =
        (0.5 + canon.n_th) / (1.0 + 0.5 * canon.feedback_gain);
    g.check(rel_dev(b.v_q_mech, mech_expected) <= 0.02,
            fmt("mechanical residual at the matched gain: v_q_mech = %.6f vs "
                "(1/2 + n_th)/(1 + G/2) = %.6f (+- 2%%)",
                b.v_q_mech, mech_expected));

    const auto mech_var = [&](double c) {
        const DerivedParams p = derive(with_cooperativity(base, c));
        return variance_numeric(p, gains_numeric(p)).v_q_mech;
    };
    double lo = 100.0;
    double hi = 1000.0;
    const bool bracketed = mech_var(lo) > 0.5 && mech_var(hi) < 0.5;
    double crossing = std::nan("");
    if (bracketed) {
        for (int iter = 0; iter < 20; ++iter) {
            const double mid = std::sqrt(lo * hi);
            (mech_var(mid) > 0.5 ? lo : hi) = mid;
        }
        crossing = std::sqrt(lo * hi);
    }
    g.check(bracketed && rel_dev(crossing, 0.5 * canon.n_th) <= 0.05,
            fmt("half-quantum crossing of v_q_mech at C = %.3f vs n_th/2 = %.3f (+- 5%%)",
                crossing, 0.5 * canon.n_th));
    return g.failed == 0;
}

// ---------------------------------------------------------------------------
// 3. Fidelity benchmarks over the measurement-strength sweep: the coherent
//    curve crosses 1/2 at C/n_th = 0.25 and 2/3 at C/n_th = 0.50 (each
//    +- 10%), and the peak fidelities land at 0.98 (coherent), 0.93 (fock1),
//    and 0.82 (cat), each +- 0.02.
// ---------------------------------------------------------------------------
bool criterion_3() {
    Gate g;

    SweepSpec spec;
    spec.axis = SweepAxis::cooperativity_ratio;
    spec.grid = log_grid(1.0e-2, 1.0e2, 41);
    spec.states = {StateSpec{StateKind::coherent, {2.0, 0.0}},
                   StateSpec{StateKind::fock1, {0.0, 0.0}},
                   StateSpec{StateKind::cat, {2.0, 0.0}}};
    const SweepReport report = run_sweep(SystemConfig{}, spec, 12345, 1);

    int bad = 0;
    for (const auto& row : report.rows) bad += row.ok ? 0 : 1;
    g.check(bad == 0,
            fmt("all %zu sweep points evaluated (%d failed)", report.rows.size(), bad));

    const auto fidelity_at = [&](std::size_t i, std::size_t s) {
        const auto& row = report.rows[i];
        return (row.ok && s < row.fidelities.size()) ? row.fidelities[s]
                                                     : std::nan("");
    };
    const auto crossing_of = [&](double level) {
        for (std::size_t i = 0; i + 1 < report.rows.size(); ++i) {
            const double f0 = fidelity_at(i, 0);
            const double f1 = fidelity_at(i + 1, 0);
            if (!(f0 < level) || !(f1 >= level)) continue;
            const double x0 = std::log(report.rows[i].sweep_value);
            const double x1 = std::log(report.rows[i + 1].sweep_value);
            return std::exp(x0 + (level - f0) / (f1 - f0) * (x1 - x0));
        }
        return std::nan("");
    };

    const double x_half = crossing_of(0.5);
    g.check(std::isfinite(x_half) && rel_dev(x_half, 0.25) <= 0.10,
            fmt("coherent fidelity crosses 1/2 at C/n_th = %.4f (0.25 +- 10%%)", x_half));
    const double x_two_thirds = crossing_of(2.0 / 3.0);
    g.check(std::isfinite(x_two_thirds) && rel_dev(x_two_thirds, 0.50) <= 0.10,
            fmt("coherent fidelity crosses 2/3 at C/n_th = %.4f (0.50 +- 10%%)",
                x_two_thirds));

    const char* names[] = {"coherent", "fock1", "cat"};
    const double targets[] = {0.98, 0.93, 0.82};
    for (std::size_t s = 0; s < 3; ++s) {
        double best = -1.0;
        for (std::size_t i = 0; i < report.rows.size(); ++i) {
            const double f = fidelity_at(i, s);
            if (std::isfinite(f)) best = std::max(best, f);
        }
        g.check(std::abs(best - targets[s]) <= 0.02,
                fmt("peak %s fidelity over the sweep = %.4f (%.2f +- 0.02)", names[s],
                    best, targets[s]));
    }
    return g.failed == 0;
}

// ---------------------------------------------------------------------------
// 4. With the measurement strength pinned at C/n_th = 10 but only 20% of the
//    optical signal detected, the coherent-state transfer must stay above
//    the F = 1/2 benchmark.
// ---------------------------------------------------------------------------
bool criterion_4() {
    Gate g;

    SystemConfig cfg = with_cooperativity_ratio(SystemConfig{}, 10.0);
    cfg.eta = 0.2;
    const DerivedParams p = derive(cfg);
    const Gains gains = gains_numeric(p);
    const NoiseCovariance cov = noise_covariance(variance_numeric(p, gains));

    const StateSpec state{StateKind::coherent, {2.0, 0.0}};
    const PhaseSpaceGrid geometry = default_grid_for(state);
    const PhaseSpaceGrid target = wigner_state(state, geometry);
    const PhaseSpaceGrid moved = transfer_wigner(state, cov, gains, geometry, true);
    const double f = fidelity(target, moved);
    g.check(f > 0.5,
            fmt("coherent fidelity at C/n_th = 10, eta = 0.2: F = %.5f (> 0.5 required)",
                f));
    return g.failed == 0;
}

// ---------------------------------------------------------------------------
// 5. Nonclassical structure survives a strong measurement and is erased by a
//    weak one: at C/n_th = 10 the transferred fock1 and cat states keep
//    negative Wigner regions, while at C/n_th = 0.1 the fock1 output is
//    non-negative everywhere.
// ---------------------------------------------------------------------------
bool criterion_5() {
    Gate g;

    const auto transferred_min = [](double ratio, StateKind kind) {
        const SystemConfig cfg = with_cooperativity_ratio(SystemConfig{}, ratio);
        const DerivedParams p = derive(cfg);
        const Gains gains = gains_numeric(p);
        const NoiseCovariance cov = noise_covariance(variance_numeric(p, gains));
        StateSpec state{kind, {2.0, 0.0}};
        if (kind == StateKind::fock1) state.alpha = {0.0, 0.0};
        const PhaseSpaceGrid geometry = default_grid_for(state);
        return min_wigner(transfer_wigner(state, cov, gains, geometry, true)).value;
    };

    const double fock_strong = transferred_min(10.0, StateKind::fock1);
    g.check(fock_strong < 0.0,
            fmt("transferred fock1 min W at C/n_th = 10: %.5f (< 0)", fock_strong));
    const double cat_strong = transferred_min(10.0, StateKind::cat);
    g.check(cat_strong < 0.0,
            fmt("transferred cat min W at C/n_th = 10: %.5f (< 0)", cat_strong));
    const double fock_weak = transferred_min(0.1, StateKind::fock1);
    g.check(fock_weak >= -1.0e-9,
            fmt("transferred fock1 min W at C/n_th = 0.1: %.3e (>= 0 within 1e-9)",
                fock_weak));
    return g.failed == 0;
}

// ---------------------------------------------------------------------------
// 6. The transferred mode lives on a single sideband at the matched gain and
//    its spectral amplitude is normalized.
// ---------------------------------------------------------------------------
bool criterion_6() {
    Gate g;

    const DerivedParams p = derive(SystemConfig{});
    const Gains gains = gains_numeric(p);
    const double upper = std::abs(modeshape(p.omega_m, p, gains.g_y));
    const double lower = std::abs(modeshape(-p.omega_m, p, gains.g_y));
    const double leakage = lower / upper;
    g.check(leakage <= 1.0e-3,
            fmt("sideband leakage |u(-Omega)|/|u(+Omega)| = %.3e (<= 1e-3)", leakage));

    const double norm =
        integrate_spectrum(
            [&](double w) { return std::norm(modeshape(w, p, gains.g_y)); }, p) /
        two_pi;
    g.check(std::abs(norm - 1.0) <= 1.0e-6,
            fmt("mode normalization (1/2pi) Int |u|^2 domega = %.9f (1 +- 1e-6)", norm));
    return g.failed == 0;
}

// ---------------------------------------------------------------------------
// 7. Monte Carlo spectra of the simulated loop reproduce the analytic
//    densities across the resonance band at a strong (C/n_th = 10) and a weak
//    (C/n_th = 0.01) measurement, and the sampled stationary variances agree
//    with the quadrature integrals within three standard errors.
// ---------------------------------------------------------------------------
void mc_point(Gate& g, double ratio, double dt, int segment, int n_traj, double burn,
              double duration) {
    const SystemConfig cfg = with_cooperativity_ratio(SystemConfig{}, ratio);
    const DerivedParams p = derive(cfg);
    const double half_band = 20.0 * p.gamma_eff();
    const double d_omega = two_pi / (static_cast<double>(segment) * dt);
    const int k_min =
        std::max(1, static_cast<int>(std::floor((p.omega_m - half_band) / d_omega)));
    const int k_max = static_cast<int>(std::ceil((p.omega_m + half_band) / d_omega));

    TrajectoryConfig traj;
    traj.dt = dt;
    traj.duration = duration;
    traj.burn_in = burn;
    traj.n_traj = n_traj;
    traj.seed = 20260819;
    traj.scheme = Scheme::exact;

    WelchAccumulator welch(segment, dt, k_min, k_max);
    VarianceAccumulator var;
    for (int t = 0; t < n_traj; ++t) {
        const TraceRecord trace = simulate(p, traj, t);
        welch.add_trace(trace);
        var.add_trace(trace);
    }
    const PsdEstimate psd = welch.estimate();
    const VarianceEstimate ve = var.estimate();

    const auto ref_q = hann_expected_psd(
        [&](double w) { return sqq_total(w, p); }, psd.omega, segment, dt);
    const auto ref_p = hann_expected_psd(
        [&](double w) { return spp_total(w, p); }, psd.omega, segment, dt);

    int n_band = 0, miss_q = 0, miss_p = 0;
    double int_q = 0.0, int_p = 0.0, int_ref_q = 0.0, int_ref_p = 0.0;
    for (std::size_t i = 0; i < psd.omega.size(); ++i) {
        const double w = psd.omega[i];
        if (w < p.omega_m - half_band || w > p.omega_m + half_band) continue;
        ++n_band;
        if (std::abs(psd.s_qq[i] - ref_q[i]) >
            std::max(0.05 * ref_q[i], 3.0 * psd.se_qq[i]))
            ++miss_q;
        if (std::abs(psd.s_pp[i] - ref_p[i]) >
            std::max(0.05 * ref_p[i], 3.0 * psd.se_pp[i]))
            ++miss_p;
        int_q += psd.s_qq[i];
        int_p += psd.s_pp[i];
        int_ref_q += ref_q[i];
        int_ref_p += ref_p[i];
    }
    // A 3-sigma per-bin gate trips by chance ~0.3% of the time; allow a
    // handful of statistical outliers, never a systematic band.
    const int allowed = std::max(2, n_band / 50);
    g.check(n_band >= 100,
            fmt("C/n_th = %g: %d Welch bins resolve the +-20 Gamma_eff band "
                "(%d segments of %d traces)",
                ratio, n_band, psd.segments_per_trace * psd.n_traces, psd.n_traces));
    g.check(miss_q <= allowed,
            fmt("C/n_th = %g: S_QQ bins outside max(5%%, 3 sigma): %d of %d (allow %d)",
                ratio, miss_q, n_band, allowed));
    g.check(miss_p <= allowed,
            fmt("C/n_th = %g: S_PP bins outside max(5%%, 3 sigma): %d of %d (allow %d)",
                ratio, miss_p, n_band, allowed));
    g.check(rel_dev(int_q, int_ref_q) <= 0.05,
            fmt("C/n_th = %g: band-integrated S_QQ deviation %.2f%% (<= 5%%)", ratio,
                100.0 * rel_dev(int_q, int_ref_q)));
    g.check(rel_dev(int_p, int_ref_p) <= 0.05,
            fmt("C/n_th = %g: band-integrated S_PP deviation %.2f%% (<= 5%%)", ratio,
                100.0 * rel_dev(int_p, int_ref_p)));

    const double var_q_ref =
        integrate_spectrum([&](double w) { return sqq_total(w, p); }, p) / two_pi;
    const double var_p_ref =
        integrate_spectrum([&](double w) { return spp_total(w, p); }, p) / two_pi;
    g.check(std::abs(ve.var_q - var_q_ref) <= 3.0 * ve.se_var_q,
            fmt("C/n_th = %g: Var(Q) = %.4f vs quadrature %.4f (3 se = %.4f)", ratio,
                ve.var_q, var_q_ref, 3.0 * ve.se_var_q));
    g.check(std::abs(ve.var_p - var_p_ref) <= 3.0 * ve.se_var_p,
            fmt("C/n_th = %g: Var(P) = %.4f vs quadrature %.4f (3 se = %.4f)", ratio,
                ve.var_p, var_p_ref, 3.0 * ve.se_var_p));
}

bool criterion_7() {
    Gate g;
    mc_point(g, 10.0, 2.5e-8, 12800, 32, 6.5e-5, 3.84e-3);
    mc_point(g, 0.01, 2.0e-7, 1536000, 32, 0.066, 0.682);
    return g.failed == 0;
}

// ---------------------------------------------------------------------------
// 8. Structural properties: conjugate symmetry of the frequency responses,
//    causality of the feedback kernel, Wigner normalization, self-fidelity,
//    agreement with the closed-form Gaussian overlap, and bit-exact
//    determinism of the stochastic integrator.
// ---------------------------------------------------------------------------
bool criterion_8() {
    Gate g;
    const DerivedParams p = derive(SystemConfig{});

    // (a) Real kernels: h(-w) = conj(h(w)) for every response.
    double sym_worst = 0.0;
    for (int i = 0; i < 25; ++i) {
        const double w = 1.0e3 * std::pow(10.0, 5.0 * i / 24.0);
        const auto dev = [&](cplx minus, cplx plus) {
            return std::abs(minus - std::conj(plus)) / (1.0 + std::abs(plus));
        };
        sym_worst = std::max(
            {sym_worst, dev(phi_response(-w, p), phi_response(w, p)),
             dev(lorentzian_filter(-w, p), lorentzian_filter(w, p)),
             dev(loop_susceptibility(-w, p) * p.omega_m,
                 loop_susceptibility(w, p) * p.omega_m)});
    }
    g.check(sym_worst <= 1.0e-12,
            fmt("conjugate symmetry over five decades: max deviation %.2e (<= 1e-12)",
                sym_worst));

    // (b) The feedback kernel is causal: its inverse transform vanishes for
    // t < 0 outside a short truncation-ringing buffer.
    {
        const std::size_t n = 1u << 20;
        const double span = 4.0e10;
        const double d_omega = 2.0 * span / static_cast<double>(n);
        const double dt = two_pi / (static_cast<double>(n) * d_omega);
        std::vector<cplx> data(n);
        for (std::size_t k = 0; k < n; ++k) {
            const double w =
                (static_cast<double>(k) - static_cast<double>(n) / 2.0) * d_omega;
            data[k] = lorentzian_filter(w, p);
        }
        dft_1d(data, false);
        double peak = 0.0;
        for (std::size_t idx = 0; idx < n; ++idx) {
            peak = std::max(peak, std::abs(data[idx].real()) * d_omega / two_pi);
        }
        double max_acausal = 0.0;
        for (std::size_t idx = n / 2 + 1; idx < n; ++idx) {
            const double t = (static_cast<double>(idx) - static_cast<double>(n)) * dt;
            if (t > -5.0e-8) continue;
            max_acausal =
                std::max(max_acausal, std::abs(data[idx].real()) * d_omega / two_pi);
        }
        g.check(max_acausal <= 1.0e-6 * peak,
                fmt("feedback kernel causality: acausal mass %.2e of peak (<= 1e-6)",
                    max_acausal / peak));
    }

    // (c, d) Wigner normalization and self-fidelity for the benchmark states
    // at a strong measurement point.
    {
        const SystemConfig cfg = with_cooperativity_ratio(SystemConfig{}, 10.0);
        const DerivedParams pr = derive(cfg);
        const Gains gains = gains_numeric(pr);
        const NoiseCovariance cov = noise_covariance(variance_numeric(pr, gains));
        const StateSpec states[] = {StateSpec{StateKind::coherent, {2.0, 0.0}},
                                    StateSpec{StateKind::fock1, {0.0, 0.0}},
                                    StateSpec{StateKind::cat, {2.0, 0.0}}};
        double norm_target = 0.0, norm_moved = 0.0, self_dev = 0.0;
        for (const auto& state : states) {
            const PhaseSpaceGrid geometry = default_grid_for(state);
            const PhaseSpaceGrid target = wigner_state(state, geometry);
            const PhaseSpaceGrid moved = transfer_wigner(state, cov, gains, geometry);
            norm_target = std::max(norm_target, std::abs(grid_integral(target) - 1.0));
            norm_moved = std::max(norm_moved, std::abs(grid_integral(moved) - 1.0));
            self_dev = std::max(self_dev, std::abs(fidelity(target, target) - 1.0));
        }
        g.check(norm_target <= 1.0e-3,
                fmt("target Wigner normalization: max |Int W - 1| = %.2e (<= 1e-3)",
                    norm_target));
        g.check(norm_moved <= 1.0e-3,
                fmt("transferred Wigner normalization: max |Int W - 1| = %.2e (<= 1e-3)",
                    norm_moved));
        g.check(self_dev <= 1.0e-3,
                fmt("self-fidelity: max |F(W, W) - 1| = %.2e (<= 1e-3)", self_dev));
    }

    // (e) Grid fidelity agrees with the closed-form Gaussian overlap.
    {
        const StateSpec broad{StateKind::coherent, {0.5, 0.3}};
        const NoiseCovariance extra{0.2, 0.03, 0.15};
        const StateSpec narrow{StateKind::coherent, {1.2, 0.0}};
        const PhaseSpaceGrid geometry = default_grid_for(narrow);
        const PhaseSpaceGrid a = convolve(wigner_state(broad, geometry), extra);
        const PhaseSpaceGrid b = wigner_state(narrow, geometry);
        const double grid_f = fidelity(b, a);
        const double root2 = std::sqrt(2.0);
        const NoiseCovariance cov_a{0.5 + extra.v11, extra.v12, 0.5 + extra.v22};
        const NoiseCovariance cov_b{0.5, 0.0, 0.5};
        const double closed_f = gaussian_overlap(root2 * 0.5, root2 * 0.3, cov_a,
                                                 root2 * 1.2, 0.0, cov_b);
        g.check(std::abs(grid_f - closed_f) <= 1.0e-3,
                fmt("Gaussian overlap: grid %.6f vs closed form %.6f (+- 1e-3)", grid_f,
                    closed_f));
    }

    // (f) Stochastic determinism: identical inputs reproduce every sample,
    // different seeds do not, and thread count never changes the ensemble.
    {
        SystemConfig slow{};
        slow.omega_m_cyc = 100.0;
        slow.gamma_m_cyc = 5.0;
        slow.gamma_f_cyc = 159.0;
        slow.kappa_cyc = 1.0e4;
        slow.g_om_cyc = 0.5;
        slow.temperature = 0.0;
        const DerivedParams ps = derive(slow);
        TrajectoryConfig traj;
        traj.dt = 1.0e-4;
        traj.duration = 0.5;
        traj.burn_in = 0.1;
        traj.seed = 99;
        const TraceRecord r1 = simulate(ps, traj, 3);
        const TraceRecord r2 = simulate(ps, traj, 3);
        const bool identical = r1.q == r2.q && r1.p == r2.p;
        g.check(identical, fmt("repeat of (seed, index) reproduces all %zu samples",
                               r1.q.size()));

        TrajectoryConfig other = traj;
        other.seed = 100;
        const TraceRecord r3 = simulate(ps, other, 3);
        g.check(r3.q != r1.q, "a different seed produces a different realization");

        traj.n_traj = 4;
        const auto serial = simulate_ensemble(ps, traj, 1);
        const auto threaded = simulate_ensemble(ps, traj, 3);
        bool ensembles_match = serial.size() == threaded.size();
        for (std::size_t i = 0; ensembles_match && i < serial.size(); ++i) {
            ensembles_match = serial[i].q == threaded[i].q && serial[i].p == threaded[i].p;
        }
        g.check(ensembles_match, "ensemble is identical for 1 and 3 worker threads");
    }
    return g.failed == 0;
}

struct Criterion {
    int id;
    const char* title;
    bool (*run)();
};

constexpr Criterion criteria[] = {
    {1, "transfer gain matching and closed-form agreement", criterion_1},
    {2, "stationary noise budget asymptotics", criterion_2},
    {3, "fidelity benchmarks across measurement strength", criterion_3},
    {4, "fidelity at 20% detection efficiency", criterion_4},
    {5, "Wigner negativity survival and loss", criterion_5},
    {6, "single-sideband mode selection", criterion_6},
    {7, "stochastic spectra against analytic densities", criterion_7},
    {8, "structural property suite", criterion_8},
};

}  // namespace

int main(int argc, char** argv) {
    int selected = 0;
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        if (arg == "--criterion" && i + 1 < argc) {
            selected = std::atoi(argv[++i]);
        } else if (arg.rfind("--criterion=", 0) == 0) {
            selected = std::atoi(arg.c_str() + 12);
        } else {
            std::fprintf(stderr, "usage: %s [--criterion N]  (N = 1..8)\n", argv[0]);
            return 64;
        }
    }
    if (selected < 0 || selected > 8) {
        std::fprintf(stderr, "usage: %s [--criterion N]  (N = 1..8)\n", argv[0]);
        return 64;
    }

    int failures = 0;
    int ran = 0;
    for (const auto& c : criteria) {
        if (selected != 0 && selected != c.id) continue;
        std::printf("== criterion %d: %s ==\n", c.id, c.title);
        bool ok = false;
        try {
            ok = c.run();
        } catch (const std::exception& e) {
            std::printf("  [FAIL] unexpected error: %s\n", e.what());
        }
        std::printf("criterion %d: %s\n", c.id, ok ? "PASS" : "FAIL");
        failures += ok ? 0 : 1;
        ++ran;
    }
    if (ran > 1) std::printf("acceptance: %d of %d criteria failed\n", failures, ran);
    return failures;
}
