#include "fbtransfer/quadrature.hpp"

#include <cstdio>

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "fbtransfer/errors.hpp"

namespace fbtransfer {

namespace {

using rule = boost::math::quadrature::gauss_kronrod<double, 31>;

struct Segment {
    double a = 0.0, b = 0.0;
    double val = 0.0, err = 0.0, l1 = 0.0;
    bool operator<(const Segment& o) const { return err < o.err; }
};

// Single non-adaptive Gauss-Kronrod shot. The library reports the
// Gauss-vs-Kronrod discrepancy on the [-1, 1] reference interval (its L1
// output is rescaled, the error is not), so the half-width factor is
// applied here to obtain an absolute error.
Segment gk_segment(const std::function<double(double)>& f, double a, double b) {
    Segment s;
    s.a = a;
    s.b = b;
    double err = 0.0, l1 = 0.0;
    s.val = rule::integrate(f, a, b, 0, 0.0, &err, &l1);
    s.err = err * 0.5 * (b - a);
    s.l1 = l1;
    return s;
}

// Globally adaptive refinement of one panel: bisect the segment with the
// largest absolute error until the panel error drops below rel_tol of its
// L1 mass, the refinement budget runs out, or the worst segment is
// roundoff-limited.
void refine_panel(const std::function<double(double)>& f, double a, double b,
                  const QuadratureSpec& spec, double& total, double& err_total,
                  double& l1_total) {
    constexpr double eps = std::numeric_limits<double>::epsilon();
    std::priority_queue<Segment> heap;
    heap.push(gk_segment(f, a, b));
    double sum_err = heap.top().err;
    double sum_l1 = heap.top().l1;
    const double min_width = 32.0 * eps * (b - a);

    for (unsigned splits = 0;
         splits < spec.max_splits && sum_err > spec.rel_tol * sum_l1; ++splits) {
        const Segment worst = heap.top();
        const double width = worst.b - worst.a;
        if (width < min_width || worst.err <= 8.0 * eps * worst.l1) {
            break;
        }
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        const Segment left = gk_segment(f, worst.a, mid);
        const Segment right = gk_segment(f, mid, worst.b);
        sum_err += left.err + right.err - worst.err;
        sum_l1 += left.l1 + right.l1 - worst.l1;
        heap.push(left);
        heap.push(right);
    }

    double val = 0.0, err = 0.0, l1 = 0.0;
    while (!heap.empty()) {
        val += heap.top().val;
        err += heap.top().err;
        l1 += heap.top().l1;
        heap.pop();
    }
    total += val;
    err_total += err;
    l1_total += l1;
}

}  // namespace

double integrate_spectrum(const std::function<double(double)>& integrand,
                          const DerivedParams& params,
                          const QuadratureSpec& spec) {
    const double omega = params.omega_m;
    const double geff = params.gamma_eff();
    // Peak panels of half-width W around +-Omega. The natural choice
    // 1e3*Gamma_eff can exceed Omega itself once the feedback broadening is
    // large, so it is clamped to keep the panel edges ordered.
    const double w = std::min(std::max(1.0e3 * geff, 1.0e-2 * omega), 0.5 * omega);
    // Origin panel around the bare thermal response pole of width gamma_m/2,
    // which otherwise hides inside the wide central panel and starves the
    // refinement budget.
    const double w0 = std::min(std::max(1.0e3 * params.gamma_m, 1.0e-9 * omega),
                               0.5 * (omega - w));
    const double lambda =
        spec.lambda_scale * std::max(20.0 * omega, 10.0 * params.gamma_f);

    const double edges[] = {-lambda, -omega - w, -omega + w, -w0, w0,
                            omega - w, omega + w, lambda};
    const int n_edges = static_cast<int>(sizeof(edges) / sizeof(edges[0]));

    double total = 0.0;
    double err_total = 0.0;
    double l1_total = 0.0;
    for (int i = 0; i + 1 < n_edges; ++i) {
        refine_panel(integrand, edges[i], edges[i + 1], spec, total, err_total,
                     l1_total);
    }
    // 1/omega^2 tails out to infinity, mapped onto (0, 1/lambda] via u = 1/omega
    // so the transformed integrand is bounded and the error estimate stays honest.
    for (double sign : {1.0, -1.0}) {
        auto tail = [&](double u) {
            const double x = sign / u;
            return integrand(x) / (u * u);
        };
        refine_panel(tail, 0.0, 1.0 / lambda, spec, total, err_total, l1_total);
    }

    // Panels that hit the refinement budget or the roundoff floor leave
    // their residual in err_total; the gate flags genuinely unresolved
    // structure while leaving room for the floor.
    const double scale = std::max(std::abs(total), l1_total);
    if (!std::isfinite(total) ||
        (scale > 0.0 && err_total > 1.0e2 * spec.rel_tol * scale)) {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%.3g",
                      scale > 0.0 ? err_total / scale : err_total);
        throw NumericError(
            std::string("spectral quadrature failed to converge "
                        "(achieved relative error ") + buf + ")",
            scale > 0.0 ? err_total / scale : err_total);
    }
    return total;
}

}  // namespace fbtransfer
