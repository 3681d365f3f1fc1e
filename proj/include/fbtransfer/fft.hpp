#pragma once

#include <complex>
#include <vector>

namespace fbtransfer {

// In-place 1D complex DFT, sign -1 (exponent e^{-2pi i jk/N}), unnormalized.
// Thread-safe (FFTW planning is serialized internally; plans use
// FFTW_ESTIMATE so results are run-to-run deterministic).
void dft_1d(std::vector<std::complex<double>>& data, bool inverse);

// Convolve a real n_rows x n_cols array (row-major) with a bivariate
// Gaussian of covariance (v11, v12, v22) acting on (row-axis, col-axis)
// coordinates with sample spacings (d_row, d_col). Linear (non-circular):
// the array is zero-padded to double size; the kernel is applied as its
// exact Fourier transform exp(-(v11 k_r^2 + 2 v12 k_r k_c + v22 k_c^2)/2),
// which avoids sampling error for narrow kernels.
void gaussian_convolve_2d(std::vector<double>& data, int n_rows, int n_cols,
                          double d_row, double d_col, double v11, double v12,
                          double v22);

}  // namespace fbtransfer
