#include "reference.hpp"

#include <cmath>
#include <limits>

namespace refmath {

namespace {
constexpr long double kSqrtPi = 1.772453850905516027298L;
constexpr long double kInvSqrt2Pi = 0.3989422804014326779399L;
}  // namespace

long double erf_ref(long double x) {
    if (x < 0.0L) return -erf_ref(-x);
    if (x <= 2.0L) {
        // Maclaurin series; alternating terms peak near n = x^2 so long
        // double headroom holds the cancellation to ~1e-17 at x = 3.
        long double term = x;
        long double sum = x;
        for (int n = 1; n < 200; ++n) {
            term *= -x * x / n;
            const long double add = term / (2 * n + 1);
            sum += add;
            if (std::fabs(add) < 1e-25L * std::fabs(sum)) break;
        }
        return 2.0L / kSqrtPi * sum;
    }
    return 1.0L - erfc_ref(x);
}

long double erfc_ref(long double x) {
    if (x < 0.0L) return 2.0L - erfc_ref(-x);
    // Below x = 2 the series complement keeps full relative accuracy for
    // erfc (the series' absolute error is ~1e-19 against erfc ~ 5e-3);
    // above, the continued fraction converges quickly and avoids the
    // 1 - erf cancellation.
    if (x <= 2.0L) return 1.0L - erf_ref(x);
    // Modified Lentz on the classic continued fraction
    // erfc(x) = exp(-x^2)/sqrt(pi) * 1/(x + (1/2)/(x + 1/(x + (3/2)/(x + ...)))).
    const long double tiny = 1e-4000L;
    long double c = x;
    long double d = 0.0L;
    long double h = x;
    if (h == 0.0L) h = tiny;
    for (int n = 1; n < 500; ++n) {
        const long double an = n * 0.5L;
        d = x + an * d;
        if (d == 0.0L) d = tiny;
        c = x + an / c;
        if (c == 0.0L) c = tiny;
        d = 1.0L / d;
        const long double mult = c * d;
        h *= mult;
        if (std::fabs(mult - 1.0L) < 1e-22L) break;
    }
    return std::exp(-x * x) / kSqrtPi / h;
}

GaussLegendre::GaussLegendre(std::size_t n) : nodes(n), weights(n) {
    // Newton iteration on P_n from the three-term recurrence.
    for (std::size_t i = 0; i < n; ++i) {
        long double x = std::cos(M_PIl * (i + 0.75L) / (n + 0.5L));
        for (int it = 0; it < 100; ++it) {
            long double p0 = 1.0L, p1 = x;
            for (std::size_t k = 2; k <= n; ++k) {
                const long double p2 = ((2.0L * k - 1.0L) * x * p1 - (k - 1.0L) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            const long double dp = n * (x * p1 - p0) / (x * x - 1.0L);
            const long double step = p1 / dp;
            x -= step;
            if (std::fabs(step) < 1e-21L) break;
        }
        long double p0 = 1.0L, p1 = x;
        for (std::size_t k = 2; k <= n; ++k) {
            const long double p2 = ((2.0L * k - 1.0L) * x * p1 - (k - 1.0L) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        const long double dp = n * (x * p1 - p0) / (x * x - 1.0L);
        nodes[i] = x;
        weights[i] = 2.0L / ((1.0L - x * x) * dp * dp);
    }
}

IntervalMoments truncated_moments_quadrature(double mu, double sig2, double l, double u) {
    const long double sig = std::sqrt(static_cast<long double>(sig2));
    long double a = (static_cast<long double>(l) - mu) / sig;
    long double b = (static_cast<long double>(u) - mu) / sig;
    a = std::max(a, -43.0L);
    b = std::min(b, 43.0L);

    const auto phi = [](long double t) { return kInvSqrt2Pi * std::exp(-0.5L * t * t); };
    const long double mass = integrate_panels(phi, a, b);
    const long double m1 =
        integrate_panels([&](long double t) { return t * phi(t); }, a, b) / mass;
    const long double var = integrate_panels(
                                [&](long double t) { return (t - m1) * (t - m1) * phi(t); }, a,
                                b) /
                            mass;
    return {mass, static_cast<long double>(mu) + sig * m1, sig * sig * var};
}

}  // namespace refmath
