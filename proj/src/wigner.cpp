#include "fbtransfer/wigner.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "fbtransfer/constants.hpp"
#include "fbtransfer/errors.hpp"
#include "fbtransfer/fft.hpp"

namespace fbtransfer {

namespace {

// Keeps the default +-6 window exact up to |alpha| = 2.5, then grows it so
// the displaced Gaussian keeps the same edge margin.
constexpr double grid_margin = 6.0 - 2.5 * 1.4142135623730951;

double sqr(double x) { return x * x; }

void check_norm(const PhaseSpaceGrid& g, const char* what) {
    const double total = grid_integral(g);
    if (std::abs(total - 1.0) > 1.0e-3) {
        throw CoverageError(std::string(what) +
                            ": grid normalization off by " +
                            std::to_string(total - 1.0) +
                            "; enlarge the grid");
    }
}

}  // namespace

std::string state_name(const StateSpec& spec) {
    switch (spec.kind) {
        case StateKind::coherent: return "coherent";
        case StateKind::fock1: return "fock1";
        case StateKind::cat: return "cat";
    }
    return "unknown";
}

PhaseSpaceGrid make_grid(double extent, int n) {
    if (n < 64) throw ConfigError("phase-space grids need at least 64 samples per axis");
    if (!(extent > 0.0)) throw ConfigError("phase-space grid extent must be positive");
    PhaseSpaceGrid g;
    g.q_min = g.p_min = -extent;
    g.q_max = g.p_max = extent;
    g.n_q = g.n_p = n;
    return g;
}

PhaseSpaceGrid default_grid_for(const StateSpec& spec) {
    double extent = 6.0;
    if (spec.kind != StateKind::fock1) {
        const double amp = std::abs(spec.alpha);
        if (amp > 2.5) {
            extent = std::sqrt(2.0) * amp + grid_margin;
        }
    }
    return make_grid(extent, 256);
}

PhaseSpaceGrid wigner_state(const StateSpec& spec, const PhaseSpaceGrid& geometry) {
    PhaseSpaceGrid g = geometry;
    g.values.assign(static_cast<size_t>(g.n_q) * g.n_p, 0.0);

    const double x0 = std::sqrt(2.0) * spec.alpha.real();
    const double y0 = std::sqrt(2.0) * spec.alpha.imag();
    if (spec.kind != StateKind::fock1) {
        const double reach = std::hypot(x0, y0) + 2.0;
        if (reach > g.q_max || reach > g.p_max || -reach < g.q_min ||
            -reach < g.p_min) {
            throw CoverageError("state displacement " + std::to_string(std::hypot(x0, y0)) +
                                " does not fit the grid extents");
        }
    }

    switch (spec.kind) {
        case StateKind::coherent:
            for (int i = 0; i < g.n_q; ++i) {
                const double q = g.q_at(i);
                for (int j = 0; j < g.n_p; ++j) {
                    const double p = g.p_at(j);
                    g.at(i, j) = std::exp(-sqr(q - x0) - sqr(p - y0)) / pi;
                }
            }
            break;
        case StateKind::fock1:
            for (int i = 0; i < g.n_q; ++i) {
                const double q = g.q_at(i);
                for (int j = 0; j < g.n_p; ++j) {
                    const double p = g.p_at(j);
                    const double r2 = q * q + p * p;
                    g.at(i, j) = (2.0 * r2 - 1.0) * std::exp(-r2) / pi;
                }
            }
            break;
        case StateKind::cat: {
            const double r02 = x0 * x0 + y0 * y0;
            const double norm = 2.0 * pi * (1.0 + std::exp(-r02));
            for (int i = 0; i < g.n_q; ++i) {
                const double q = g.q_at(i);
                for (int j = 0; j < g.n_p; ++j) {
                    const double p = g.p_at(j);
                    const double lobes = std::exp(-sqr(q - x0) - sqr(p - y0)) +
                                         std::exp(-sqr(q + x0) - sqr(p + y0));
                    const double fringe = 2.0 * std::exp(-q * q - p * p) *
                                          std::cos(2.0 * (p * x0 - q * y0));
                    g.at(i, j) = (lobes + fringe) / norm;
                }
            }
            break;
        }
    }
    check_norm(g, "wigner_state");
    return g;
}

PhaseSpaceGrid noise_kernel(const NoiseCovariance& cov, const PhaseSpaceGrid& geometry) {
    double v11 = cov.v11, v22 = cov.v22, v12 = cov.v12;
    double det = v11 * v22 - v12 * v12;
    if (det < 0.0 || v11 < 0.0 || v22 < 0.0) {
        throw ContractError("noise kernel covariance is indefinite");
    }
    if (det <= 0.0 || v11 == 0.0 || v22 == 0.0) {
        const double jitter = 1.0e-12 * std::max(v11, v22);
        if (jitter == 0.0) {
            throw ContractError("noise kernel covariance is zero");
        }
        v11 += jitter;
        v22 += jitter;
        det = v11 * v22 - v12 * v12;
    }
    const double i11 = v22 / det, i22 = v11 / det, i12 = -v12 / det;
    const double amp = 1.0 / (two_pi * std::sqrt(det));

    PhaseSpaceGrid g = geometry;
    g.values.assign(static_cast<size_t>(g.n_q) * g.n_p, 0.0);
    for (int i = 0; i < g.n_q; ++i) {
        const double q = g.q_at(i);
        for (int j = 0; j < g.n_p; ++j) {
            const double p = g.p_at(j);
            g.at(i, j) = amp * std::exp(-0.5 * (i11 * q * q +
                                                2.0 * i12 * q * p +
                                                i22 * p * p));
        }
    }
    return g;
}

namespace {

// Catmull-Rom weights for a fractional offset t in [0, 1]; they sum to one,
// and the resampled integral is fourth-order accurate, so oscillatory
// fringes keep their mass where a bilinear stencil would drift it.
std::array<double, 4> catmull_rom_weights(double t) {
    const double t2 = t * t;
    const double t3 = t2 * t;
    return {0.5 * (-t3 + 2.0 * t2 - t), 0.5 * (3.0 * t3 - 5.0 * t2 + 2.0),
            0.5 * (-3.0 * t3 + 4.0 * t2 + t), 0.5 * (t3 - t2)};
}

}  // namespace

PhaseSpaceGrid gain_transform(const PhaseSpaceGrid& w, const Gains& gains) {
    if (!(gains.g_x > 0.0) || !(gains.g_y > 0.0) || !std::isfinite(gains.g_x) ||
        !std::isfinite(gains.g_y)) {
        throw ContractError("gain_transform requires finite positive gains");
    }
    const double before = grid_integral(w);
    PhaseSpaceGrid out = w;
    const double scale = 1.0 / (gains.g_x * gains.g_y);
    const double dq = w.dq(), dp = w.dp();
    const auto clamp_q = [&](int i) { return std::clamp(i, 0, w.n_q - 1); };
    const auto clamp_p = [&](int j) { return std::clamp(j, 0, w.n_p - 1); };
    for (int i = 0; i < out.n_q; ++i) {
        const double qs = out.q_at(i) / gains.g_x;
        const double ti = (qs - w.q_min) / dq;
        for (int j = 0; j < out.n_p; ++j) {
            const double ps = out.p_at(j) / gains.g_y;
            const double tj = (ps - w.p_min) / dp;
            double val = 0.0;
            if (ti >= 0.0 && ti <= w.n_q - 1 && tj >= 0.0 && tj <= w.n_p - 1) {
                const int i0 = std::min(static_cast<int>(ti), w.n_q - 2);
                const int j0 = std::min(static_cast<int>(tj), w.n_p - 2);
                const auto wi = catmull_rom_weights(ti - i0);
                const auto wj = catmull_rom_weights(tj - j0);
                for (int a = 0; a < 4; ++a) {
                    const int ia = clamp_q(i0 - 1 + a);
                    double row = 0.0;
                    for (int b = 0; b < 4; ++b) {
                        row += wj[b] * w.at(ia, clamp_p(j0 - 1 + b));
                    }
                    val += wi[a] * row;
                }
            }
            out.at(i, j) = scale * val;
        }
    }
    const double after = grid_integral(out);
    if (std::abs(after - before) > 1.0e-3) {
        throw CoverageError("gain_transform lost " + std::to_string(before - after) +
                            " of the state normalization off the grid");
    }
    return out;
}

PhaseSpaceGrid convolve(const PhaseSpaceGrid& w, const NoiseCovariance& cov) {
    if (cov.v11 < 0.0 || cov.v22 < 0.0 ||
        cov.v11 * cov.v22 - cov.v12 * cov.v12 < 0.0) {
        throw ContractError("convolution covariance is indefinite");
    }
    PhaseSpaceGrid out = w;
    gaussian_convolve_2d(out.values, out.n_q, out.n_p, out.dq(), out.dp(),
                         cov.v11, cov.v12, cov.v22);
    return out;
}

PhaseSpaceGrid transfer_wigner(const StateSpec& spec, const NoiseCovariance& cov,
                               const Gains& gains, const PhaseSpaceGrid& geometry,
                               bool apply_gain_transform) {
    PhaseSpaceGrid w = wigner_state(spec, geometry);
    if (apply_gain_transform) {
        w = gain_transform(w, gains);
    }
    return convolve(w, cov);
}

FidelityResult fidelity_detail(const PhaseSpaceGrid& a, const PhaseSpaceGrid& b) {
    if (!a.same_geometry(b)) {
        throw ContractError("fidelity requires identical grids");
    }
    double sum = 0.0;
    for (int i = 0; i < a.n_q; ++i) {
        const double wi = (i == 0 || i == a.n_q - 1) ? 0.5 : 1.0;
        double row = 0.0;
        for (int j = 0; j < a.n_p; ++j) {
            const double wj = (j == 0 || j == a.n_p - 1) ? 0.5 : 1.0;
            row += wj * a.at(i, j) * b.at(i, j);
        }
        sum += wi * row;
    }
    FidelityResult r;
    r.raw = two_pi * sum * a.dq() * a.dp();
    r.flagged = r.raw > 1.0;
    r.value = std::clamp(r.raw, 0.0, 1.0 + 1.0e-3);
    return r;
}

double fidelity(const PhaseSpaceGrid& a, const PhaseSpaceGrid& b) {
    return fidelity_detail(a, b).value;
}

MinLocation min_wigner(const PhaseSpaceGrid& w) {
    MinLocation m;
    m.value = w.at(0, 0);
    m.q = w.q_at(0);
    m.p = w.p_at(0);
    for (int i = 0; i < w.n_q; ++i) {
        for (int j = 0; j < w.n_p; ++j) {
            if (w.at(i, j) < m.value) {
                m.value = w.at(i, j);
                m.q = w.q_at(i);
                m.p = w.p_at(j);
            }
        }
    }
    return m;
}

double grid_integral(const PhaseSpaceGrid& w) {
    double sum = 0.0;
    for (int i = 0; i < w.n_q; ++i) {
        const double wi = (i == 0 || i == w.n_q - 1) ? 0.5 : 1.0;
        double row = 0.0;
        for (int j = 0; j < w.n_p; ++j) {
            const double wj = (j == 0 || j == w.n_p - 1) ? 0.5 : 1.0;
            row += wj * w.at(i, j);
        }
        sum += wi * row;
    }
    return sum * w.dq() * w.dp();
}

double fock1_isotropic_conv(double r, double v) {
    const double b = 2.0 * v + 1.0;
    return std::exp(-r * r / b) / (pi * b) *
           ((2.0 * v - 1.0) / b + 2.0 * r * r / (b * b));
}

double gaussian_overlap(double mq_a, double mp_a, const NoiseCovariance& cov_a,
                        double mq_b, double mp_b, const NoiseCovariance& cov_b) {
    const double s11 = cov_a.v11 + cov_b.v11;
    const double s12 = cov_a.v12 + cov_b.v12;
    const double s22 = cov_a.v22 + cov_b.v22;
    const double det = s11 * s22 - s12 * s12;
    const double dq = mq_a - mq_b;
    const double dp = mp_a - mp_b;
    const double quad = (s22 * dq * dq - 2.0 * s12 * dq * dp + s11 * dp * dp) / det;
    return std::exp(-0.5 * quad) / std::sqrt(det);
}

}  // namespace fbtransfer
