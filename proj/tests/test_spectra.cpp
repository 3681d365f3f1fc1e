#include <cmath>
#include <limits>
#include <vector>

#include "doctest.h"
#include "fbtransfer/constants.hpp"
#include "fbtransfer/errors.hpp"
#include "fbtransfer/gains.hpp"
#include "fbtransfer/params.hpp"
#include "fbtransfer/quadrature.hpp"
#include "fbtransfer/spectra.hpp"
#include "support.hpp"

using namespace fbtransfer;
using namespace fbtransfer::test;

namespace {

double total_q(const VarianceBreakdown& b) {
    return b.v_x_trans + b.v_q_mech + b.v_q_mismatch + b.v_q_eta;
}

double total_p(const VarianceBreakdown& b) {
    return b.v_y_trans + b.v_p_mech + b.v_p_eta;
}

double integrated_variance(double (*density)(double, const DerivedParams&),
                           const DerivedParams& p) {
    return integrate_spectrum([&](double w) { return density(w, p); }, p) / two_pi;
}

}  // namespace

TEST_SUITE("spectra") {

TEST_CASE("canonical variance budget matches the frozen breakdown") {
    const DerivedParams p = canonical_params();
    const VarianceBreakdown b = variance_numeric(p, gains_numeric(p));

    CHECK(close_rel(b.v_x_trans, 0.496085077645, 1e-6));
    CHECK(close_rel(b.v_q_mech, 0.0254605992913, 1e-6));
    CHECK(close_rel(b.v_q_mismatch, 0.0183153172542, 1e-6));
    CHECK(b.v_q_eta == 0.0);
    CHECK(close_rel(b.v_y_trans, 0.503904812272, 1e-6));
    CHECK(close_rel(b.v_p_mech, 0.0254524675012, 1e-6));
    CHECK(b.v_p_eta == 0.0);
    CHECK(close_rel(b.v_pq, -3.12786556742e-4, 1e-5));

    CHECK(close_rel(total_q(b), 0.539861, 1e-4));
    CHECK(close_rel(total_p(b), 0.529357, 1e-4));
}

TEST_CASE("component split is additive against the directly assembled totals") {
    const DerivedParams p = canonical_params();
    const VarianceBreakdown b = variance_numeric(p, gains_numeric(p));

    const double var_q = integrated_variance(&sqq_total, p);
    const double var_p = integrated_variance(&spp_total, p);
    CHECK(close_rel(total_q(b), var_q, 1e-6));
    CHECK(close_rel(total_p(b), var_p, 1e-6));
}

TEST_CASE("closed-form budget and its regime of validity") {
    const DerivedParams p = canonical_params();
    const Gains a = gains_analytic(p);
    const VarianceBreakdown b = variance_analytic(p);

    CHECK(close_rel(b.v_x_trans, 0.5 * a.g_x * a.g_x, 1e-13));
    CHECK(close_rel(b.v_y_trans, 0.5 * a.g_y * a.g_y, 1e-13));
    CHECK(close_rel(b.v_q_mech, (0.5 + p.n_th) / (1.0 + 0.5 * p.feedback_gain), 1e-13));
    CHECK(b.v_q_mismatch == 0.0);
    CHECK(b.v_q_eta == 0.0);
    CHECK(b.v_pq == 0.0);

    const VarianceBreakdown num = variance_numeric(p, gains_numeric(p));
    CHECK(close_rel(num.v_q_mech, b.v_q_mech, 0.02));
    CHECK(close_rel(num.v_p_mech, b.v_p_mech, 0.02));
    CHECK(close_rel(num.v_x_trans, 0.5, 0.02));
    CHECK(close_rel(num.v_y_trans, 0.5, 0.02));
}

TEST_CASE("detection inefficiency adds its own noise channel") {
    SystemConfig cfg = canonical_config();
    cfg.eta = 0.5;
    const double n_th = canonical_params().n_th;
    const DerivedParams p = derive(with_cooperativity(cfg, 2.0 * n_th));
    const VarianceBreakdown b = variance_numeric(p, gains_numeric(p));

    CHECK(close_rel(b.v_q_eta, 0.2519540, 1e-4));
    CHECK(b.v_p_eta > 0.0);

    const Gains a = gains_analytic(p);
    const double rho = p.measurement_rho();
    CHECK(close_rel(b.v_q_eta, rho * a.g_x * a.g_x / 4.0, 0.02));
    CHECK(close_rel(b.v_p_eta, rho * a.g_y * a.g_y / 4.0, 0.02));
}

TEST_CASE("mechanical noise crosses half a quantum at half the thermal occupation") {
    const SystemConfig base = canonical_config();
    const double n_th = canonical_params().n_th;

    const auto mech_var = [&](double c) {
        const DerivedParams p = derive(with_cooperativity(base, c));
        return variance_numeric(p, gains_numeric(p)).v_q_mech;
    };

    double lo = 100.0;
    double hi = 1000.0;
    REQUIRE(mech_var(lo) > 0.5);
    REQUIRE(mech_var(hi) < 0.5);
    for (int iter = 0; iter < 40; ++iter) {
        const double mid = std::sqrt(lo * hi);
        (mech_var(mid) > 0.5 ? lo : hi) = mid;
    }
    const double crossing = std::sqrt(lo * hi);

    CHECK(close_rel(crossing, 312.796, 1e-3));
    CHECK(close_rel(crossing, 0.5 * n_th, 0.05));
}

TEST_CASE("mode-mismatch noise scales near-linearly with cooperativity") {
    std::vector<double> log_c;
    std::vector<double> log_v;
    for (const double ratio : {10.0, 17.783, 31.623, 56.234, 100.0}) {
        const DerivedParams p = ratio_params(ratio);
        const VarianceBreakdown b = variance_numeric(p, gains_numeric(p));
        log_c.push_back(std::log(p.cooperativity));
        log_v.push_back(std::log(b.v_q_mismatch));
    }
    double mean_x = 0.0, mean_y = 0.0;
    for (std::size_t i = 0; i < log_c.size(); ++i) {
        mean_x += log_c[i];
        mean_y += log_v[i];
    }
    mean_x /= static_cast<double>(log_c.size());
    mean_y /= static_cast<double>(log_c.size());
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < log_c.size(); ++i) {
        sxx += (log_c[i] - mean_x) * (log_c[i] - mean_x);
        sxy += (log_c[i] - mean_x) * (log_v[i] - mean_y);
    }
    const double slope = sxy / sxx;
    CHECK(slope > 0.8);
    CHECK(slope < 1.2);
}

TEST_CASE("total added noise falls as the measurement gets stronger") {
    double previous = std::numeric_limits<double>::infinity();
    for (const double ratio : {0.01, 0.1, 1.0, 10.0}) {
        CAPTURE(ratio);
        const DerivedParams p = ratio_params(ratio);
        const double var_q = total_q(variance_numeric(p, gains_numeric(p)));
        CHECK(var_q < previous);
        previous = var_q;
    }
}

TEST_CASE("weak-measurement limit recovers the thermal variance") {
    SystemConfig cfg = with_cooperativity(canonical_config(), 1e-6);
    cfg.gain_policy = GainPolicy::fixed(0.0);
    const DerivedParams p = derive(cfg);
    const VarianceBreakdown b = variance_numeric(p, gains_numeric(p));
    CHECK(close_rel(total_q(b), p.n_th + 0.5, 5e-3));
    CHECK(close_rel(total_p(b), p.n_th + 0.5, 5e-3));
    CHECK(b.v_x_trans <= 1e-12);
}

TEST_CASE("noise-dominated fixture reproduces its frozen totals") {
    const DerivedParams p = ratio_params(0.01);
    const VarianceBreakdown b = variance_numeric(p, gains_numeric(p));
    CHECK(close_rel(total_q(b), 24.5388, 1e-4));
}

TEST_CASE("spectral decomposition at single frequencies") {
    const DerivedParams p = canonical_params();
    const Gains g = gains_numeric(p);

    SUBCASE("direct totals agree between entry points") {
        for (const double w : {0.0, 0.3 * p.omega_m, p.omega_m, -p.omega_m,
                               2.7 * p.omega_m}) {
            CAPTURE(w);
            const SpectrumComponents c = psd_components(w, p, g);
            CHECK(close_rel(c.qq_total, sqq_total(w, p), 1e-12));
            CHECK(close_rel(c.pp_total, spp_total(w, p), 1e-12));
            CHECK(close_rel(c.pp_total, c.pp_signal + c.pp_opt_noise + c.pp_mech,
                            1e-12));
            CHECK(c.qq_signal >= 0.0);
            CHECK(c.qq_opt_noise >= 0.0);
            CHECK(c.qq_mech >= 0.0);
        }
    }

    SUBCASE("the transferred signal dominates on resonance") {
        const SpectrumComponents c = psd_components(p.omega_m, p, g);
        CHECK(c.qq_signal > 0.9 * c.qq_total);
        CHECK(c.pp_signal > 0.9 * c.pp_total);
    }

    SUBCASE("densities are symmetric in frequency") {
        const SpectrumComponents plus = psd_components(0.8 * p.omega_m, p, g);
        const SpectrumComponents minus = psd_components(-0.8 * p.omega_m, p, g);
        CHECK(close_rel(plus.qq_total, minus.qq_total, 1e-12));
        CHECK(close_rel(plus.pp_total, minus.pp_total, 1e-12));
    }

    SUBCASE("tables match pointwise evaluation") {
        const std::vector<double> omegas = {0.0, 0.5 * p.omega_m, p.omega_m};
        const auto rows = psd_table(omegas, p, g);
        REQUIRE(rows.size() == omegas.size());
        for (std::size_t i = 0; i < rows.size(); ++i) {
            CHECK(rows[i].omega == omegas[i]);
            CHECK(rows[i].qq_total == psd_components(omegas[i], p, g).qq_total);
        }
    }

    SUBCASE("inaccurate gains are rejected at the spectral entry point") {
        CHECK_THROWS_AS(psd_components(p.omega_m, p, gains_analytic(p)),
                        ContractError);
    }
}

TEST_CASE("noise covariance assembly") {
    const DerivedParams p = canonical_params();
    const VarianceBreakdown b = variance_numeric(p, gains_numeric(p));
    const NoiseCovariance v = noise_covariance(b);

    CHECK(v.v11 == b.v_q_mech + b.v_q_mismatch + b.v_q_eta);
    CHECK(v.v22 == b.v_p_mech + b.v_p_eta);
    CHECK(v.v12 == b.v_pq);

    CHECK(close_rel(v.v11, 0.0437759165455, 1e-6));
    CHECK(close_rel(v.v22, 0.0254524675012, 1e-6));
    CHECK(close_rel(v.v12, -3.12786556742e-4, 1e-5));

    VarianceBreakdown indefinite;
    indefinite.v_q_mech = 1.0;
    indefinite.v_p_mech = 1.0;
    indefinite.v_pq = 2.0;
    CHECK_THROWS_AS(noise_covariance(indefinite), ContractError);
}

}  // TEST_SUITE("spectra")

TEST_SUITE("properties") {

TEST_CASE("integrated totals equal the component budget at random operating points") {
    PropertyRng rng(515151u);
    for (int trial = 0; trial < 4; ++trial) {
        SystemConfig cfg = canonical_config();
        cfg.g_om_cyc = rng.log_uniform(3e4, 8e5);
        cfg.eta = rng.uniform(0.4, 1.0);
        const DerivedParams p = derive(cfg);
        const VarianceBreakdown b = variance_numeric(p, gains_numeric(p));
        const double var_q =
            integrate_spectrum([&](double w) { return sqq_total(w, p); }, p) / two_pi;
        CAPTURE(trial);
        CHECK(close_rel(b.v_x_trans + b.v_q_mech + b.v_q_mismatch + b.v_q_eta, var_q,
                        1e-6));
        const NoiseCovariance v = noise_covariance(b);
        CHECK(v.v11 > 0.0);
        CHECK(v.v22 > 0.0);
        CHECK(v.v11 * v.v22 >= v.v12 * v.v12);
    }
}

}  // TEST_SUITE("properties")
