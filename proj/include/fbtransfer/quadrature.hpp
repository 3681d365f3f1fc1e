#pragma once

#include <functional>

#include "fbtransfer/params.hpp"

namespace fbtransfer {

struct QuadratureSpec {
    double rel_tol = 1.0e-8;
    unsigned max_splits = 2000;  // refinement budget per panel
    double lambda_scale = 1.0;   // multiplies the core cutoff; used by convergence tests
};

// Integrate a spectral-density-like integrand over the whole real line.
// The integrands handled here are smooth apart from peaks of width
// ~Gamma_eff at +-Omega and a low-pass shoulder around 0, and decay like
// 1/omega^2; the panel layout brackets the peaks and semi-infinite tail
// panels capture the slow decay. Throws NumericError (with the achieved
// tolerance attached) if the adaptive rule cannot converge.
double integrate_spectrum(const std::function<double(double)>& integrand,
                          const DerivedParams& params,
                          const QuadratureSpec& spec = {});

}  // namespace fbtransfer
