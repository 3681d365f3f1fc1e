#include "fbtransfer/fft.hpp"

#include <cmath>
#include <mutex>
#include <stdexcept>

#include <fftw3.h>

#include "fbtransfer/constants.hpp"

namespace fbtransfer {

namespace {

std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

struct PlanGuard {
    fftw_plan plan;
    explicit PlanGuard(fftw_plan p) : plan(p) {}
    ~PlanGuard() {
        std::lock_guard<std::mutex> lock(planner_mutex());
        fftw_destroy_plan(plan);
    }
};

double fft_freq(int index, int n, double spacing) {
    const int k = index <= n / 2 - 1 + (n & 1) ? index : index - n;
    return two_pi * k / (n * spacing);
}

}  // namespace

void dft_1d(std::vector<std::complex<double>>& data, bool inverse) {
    const int n = static_cast<int>(data.size());
    auto* raw = reinterpret_cast<fftw_complex*>(data.data());
    fftw_plan plan;
    {
        std::lock_guard<std::mutex> lock(planner_mutex());
        plan = fftw_plan_dft_1d(n, raw, raw,
                                inverse ? FFTW_BACKWARD : FFTW_FORWARD,
                                FFTW_ESTIMATE);
    }
    if (!plan) throw std::runtime_error("fftw plan creation failed");
    PlanGuard guard(plan);
    fftw_execute(plan);
}

void gaussian_convolve_2d(std::vector<double>& data, int n_rows, int n_cols,
                          double d_row, double d_col, double v11, double v12,
                          double v22) {
    const int nr = 2 * n_rows;
    const int nc = 2 * n_cols;
    const int nc_half = nc / 2 + 1;

    double* padded = fftw_alloc_real(static_cast<size_t>(nr) * nc);
    fftw_complex* spec = fftw_alloc_complex(static_cast<size_t>(nr) * nc_half);
    if (!padded || !spec) {
        fftw_free(padded);
        fftw_free(spec);
        throw std::bad_alloc();
    }

    for (size_t i = 0; i < static_cast<size_t>(nr) * nc; ++i) padded[i] = 0.0;
    for (int r = 0; r < n_rows; ++r) {
        for (int c = 0; c < n_cols; ++c) {
            padded[static_cast<size_t>(r) * nc + c] =
                data[static_cast<size_t>(r) * n_cols + c];
        }
    }

    fftw_plan fwd, bwd;
    {
        std::lock_guard<std::mutex> lock(planner_mutex());
        fwd = fftw_plan_dft_r2c_2d(nr, nc, padded, spec, FFTW_ESTIMATE);
        bwd = fftw_plan_dft_c2r_2d(nr, nc, spec, padded, FFTW_ESTIMATE);
    }
    if (!fwd || !bwd) {
        fftw_free(padded);
        fftw_free(spec);
        throw std::runtime_error("fftw plan creation failed");
    }
    fftw_execute(fwd);

    // Zero-phase Gaussian response: no shift, exact in the spectral domain.
    const double norm = 1.0 / (static_cast<double>(nr) * nc);
    for (int r = 0; r < nr; ++r) {
        const double kr = fft_freq(r, nr, d_row);
        for (int c = 0; c < nc_half; ++c) {
            const double kc = fft_freq(c, nc, d_col);
            const double response =
                std::exp(-0.5 * (v11 * kr * kr + 2.0 * v12 * kr * kc +
                                 v22 * kc * kc)) *
                norm;
            spec[static_cast<size_t>(r) * nc_half + c][0] *= response;
            spec[static_cast<size_t>(r) * nc_half + c][1] *= response;
        }
    }

    fftw_execute(bwd);
    for (int r = 0; r < n_rows; ++r) {
        for (int c = 0; c < n_cols; ++c) {
            data[static_cast<size_t>(r) * n_cols + c] =
                padded[static_cast<size_t>(r) * nc + c];
        }
    }

    {
        std::lock_guard<std::mutex> lock(planner_mutex());
        fftw_destroy_plan(fwd);
        fftw_destroy_plan(bwd);
    }
    fftw_free(padded);
    fftw_free(spec);
}

}  // namespace fbtransfer
