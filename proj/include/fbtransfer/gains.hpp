#pragma once

#include <cstdint>

#include "fbtransfer/params.hpp"
#include "fbtransfer/quadrature.hpp"
#include "fbtransfer/response.hpp"

namespace fbtransfer {

struct Gains {
    double g_x = 0.0;
    double g_y = 0.0;
    double overall = 0.0;  // sqrt(g_x * g_y)
    double squeeze = 0.0;  // g_x / g_y

    // Provenance of numerically computed gains: fingerprint of the params the
    // integrals were evaluated for, and the residual of the transferred-mode
    // normalization they achieve. Lets downstream modules verify consistency
    // without re-running quadrature.
    std::uint64_t params_tag = 0;
    double norm_residual = 0.0;
};

// FNV-1a fingerprint over the derived-parameter bytes (bitwise semantics).
std::uint64_t params_tag(const DerivedParams& p);

// g_y^2 = (4*Gamma*C/2pi) Int |chi|^2 ((G/8C)^2 |f|^2 + 1) domega.
// The (G/8C)^2 weight keeps the transferred mode commutator-normalized at
// every gain, which is what makes (1/2pi) Int |u|^2 = 1 exact; at G = 8C it
// coincides with the unit-weight form.
double gain_y_numeric(const DerivedParams& p, const FilterFn& filter,
                      const QuadratureSpec& spec = {});
double gain_y_numeric(const DerivedParams& p, const QuadratureSpec& spec = {});

// g_x = -(Gamma*G/(2pi*g_y)) Int |chi|^2 Im(phi) Im(f) domega.
// This is the least-squares projection of the in-loop optical drive onto the
// transferred mode, so the signal/mismatch variance split is additive.
double gain_x_numeric(const DerivedParams& p, double g_y, const FilterFn& filter,
                      const QuadratureSpec& spec = {});
double gain_x_numeric(const DerivedParams& p, double g_y,
                      const QuadratureSpec& spec = {});

Gains gains_numeric(const DerivedParams& p, const QuadratureSpec& spec = {});

// High-quality, wide-filter closed forms:
//   g_y = 2*sqrt(C*(1 + G^2/(64C^2)) / (2 + G)),   g_x = 1/(g_y*(1 + 2/G)),
// with g_x -> 0 as G -> 0.
Gains gains_analytic(const DerivedParams& p);

// Contract check used by the spectral module: the gains must reproduce the
// transferred-mode normalization for these params to 1e-6. Recomputes the
// normalization integral when the provenance tag does not match. Throws
// ContractError on violation.
void require_consistent_gains(const Gains& gains, const DerivedParams& p);

}  // namespace fbtransfer
