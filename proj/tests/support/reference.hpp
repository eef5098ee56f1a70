#pragma once

// Test-side reference oracles, kept independent of the library's
// implementation paths: erf/erfc from a Maclaurin series and a Lentz
// continued fraction in long double, and interval Gaussian moments from
// composite Gauss-Legendre quadrature. Used to freeze expected values and
// to cross-check the production code; nothing here calls into epmgp's
// special-function or moment routines.

#include <cstddef>
#include <vector>

namespace refmath {

long double erf_ref(long double x);
long double erfc_ref(long double x);

// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1].
struct GaussLegendre {
    std::vector<long double> nodes;
    std::vector<long double> weights;
    explicit GaussLegendre(std::size_t n);
};

// integral of f over [a, b] with the 24-point rule on panels of width <= 0.5.
template <typename F>
long double integrate_panels(F&& f, long double a, long double b) {
    static const GaussLegendre rule(24);
    const std::size_t panels =
        static_cast<std::size_t>((b - a) / 0.5L) + 1;
    const long double h = (b - a) / panels;
    long double total = 0.0L;
    for (std::size_t p = 0; p < panels; ++p) {
        const long double lo = a + p * h;
        const long double mid = lo + 0.5L * h;
        long double s = 0.0L;
        for (std::size_t i = 0; i < rule.nodes.size(); ++i)
            s += rule.weights[i] * f(mid + 0.5L * h * rule.nodes[i]);
        total += 0.5L * h * s;
    }
    return total;
}

struct IntervalMoments {
    long double mass;      // integral of the normal density over [l, u]
    long double mean;
    long double variance;
};

// Moments of N(mu, sig2) on [l, u] by quadrature (bounds may be +-inf;
// they are clipped at 43 cavity standard deviations, far below long double
// underflow). Two-pass: the variance integrates (t - mean)^2 so it never
// forms the large-cancellation difference of raw moments.
IntervalMoments truncated_moments_quadrature(double mu, double sig2, double l, double u);

}  // namespace refmath
