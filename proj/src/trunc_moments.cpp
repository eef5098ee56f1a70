#include "epmgp/trunc_moments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "epmgp/errors.hpp"
#include "epmgp/special.hpp"

namespace epmgp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kSqrt2 = 1.4142135623730950488;
constexpr double kSqrt2OverPi = 0.79788456080286535588;  // sqrt(2/pi)
// Switch to the scaled-erfc path once both standardized bounds are past
// 4 * sqrt(2) sigma on the same side (alpha, beta > 4 in half-width units).
constexpr double kTailSwitch = 4.0 * kSqrt2;
constexpr double kLogUnderflow = -690.77552789821371;  // log(1e-300)

struct StdMoments {
    double log_z;
    double z;
    double r1;   // phi(a) / Z, 0 when a = -inf
    double r2;   // phi(b) / Z, 0 when b = +inf
    double ar1;  // a * r1 with the a = -inf limit taken as 0
    double br2;  // b * r2 with the b = +inf limit taken as 0
};

// Moments of the standard normal restricted to (a, b) with a < b and the
// interval not entirely in the left tail (that case is mirrored away).
StdMoments standardized_moments(double a, double b) {
    StdMoments m{};
    if (a >= kTailSwitch) {
        // Both bounds far right: carry exp(-alpha^2) symbolically so the
        // ratios r1, r2 stay finite long after Z itself underflows.
        const double alpha = a / kSqrt2;
        const double d = (b == kInf) ? kInf : 0.5 * (b - a) * (b + a);
        const double ed = (d == kInf) ? 0.0 : std::exp(-d);
        const double denom = erfcx(alpha) - (b == kInf ? 0.0 : erfcx(b / kSqrt2) * ed);
        m.log_z = -alpha * alpha + std::log(0.5 * denom);
        m.z = std::exp(m.log_z);
        m.r1 = kSqrt2OverPi / denom;
        m.r2 = m.r1 * ed;
        m.ar1 = a * m.r1;
        m.br2 = (b == kInf) ? 0.0 : b * m.r2;
        return m;
    }
    const double z = normal_interval_prob(a, b);
    m.z = z;
    m.log_z = std::log(z);
    const double pa = (a == -kInf) ? 0.0 : normal_pdf(a);
    const double pb = (b == kInf) ? 0.0 : normal_pdf(b);
    m.r1 = pa / z;
    m.r2 = pb / z;
    m.ar1 = (a == -kInf) ? 0.0 : a * m.r1;
    m.br2 = (b == kInf) ? 0.0 : b * m.r2;
    return m;
}

}  // namespace

TruncatedMoments truncated_moments(double mu_cav, double sig2_cav, double l, double u) {
    if (!(sig2_cav > 0.0) || !std::isfinite(sig2_cav))
        throw ValidationError("sig2_cav", "cavity variance must be positive and finite");
    if (std::isnan(l) || std::isnan(u) || !(l < u))
        throw ValidationError("l", "interval must satisfy l < u");
    if (!std::isfinite(mu_cav)) throw ValidationError("mu_cav", "cavity mean must be finite");

    const double sig = std::sqrt(sig2_cav);
    const double a = (l == -kInf) ? -kInf : (l - mu_cav) / sig;
    const double b = (u == kInf) ? kInf : (u - mu_cav) / sig;

    StdMoments sm;
    if (b != kInf && b <= -kTailSwitch) {
        // Entirely in the left tail: mirror, then map the pieces back.
        // r's swap; a*r1 - b*r2 is invariant under the reflection.
        sm = standardized_moments(-b, (a == -kInf) ? kInf : -a);
        std::swap(sm.r1, sm.r2);
        const double ar1 = -sm.br2;
        const double br2 = -sm.ar1;
        sm.ar1 = ar1;
        sm.br2 = br2;
    } else {
        sm = standardized_moments(a, b);
    }

    if (!(sm.log_z >= kLogUnderflow))
        throw TailUnderflow("interval mass below 1e-300; region unreachably far in the tail");

    const double diff = sm.r1 - sm.r2;
    double muhat = mu_cav + sig * diff;
    double sighat2 = sig2_cav * (1.0 + sm.ar1 - sm.br2 - diff * diff);

    muhat = std::clamp(muhat, l, u);
    if (!(sighat2 > 0.0)) sighat2 = sig2_cav * 1e-300;

    return {std::min(sm.z, 1.0), muhat, sighat2, std::min(sm.log_z, 0.0)};
}

}  // namespace epmgp
