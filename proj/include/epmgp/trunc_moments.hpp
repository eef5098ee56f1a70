#pragma once

namespace epmgp {

// Zeroth, first and second moments of a univariate Gaussian N(mu, sig2)
// restricted to the interval (l, u).
struct TruncatedMoments {
    double zhat;      // interval mass, in [0, 1]
    double muhat;     // mean of the restriction, in [l, u]
    double sighat2;   // variance of the restriction, <= sig2
    double log_zhat;  // log of the mass, valid even when zhat underflows
};

// Exact interval moments via the error function. Bounds may be +-inf (the
// corresponding terms vanish; they are never replaced by large finite
// stand-ins). When both standardized bounds are more than 4 sigma out on
// the same side, the computation switches to scaled complementary error
// functions with the shared exponential factor carried symbolically, so
// the moment ratios survive far into the tails where the direct forms
// cancel catastrophically. Throws TailUnderflow once the mass drops below
// 1e-300 even on that path.
TruncatedMoments truncated_moments(double mu_cav, double sig2_cav, double l, double u);

}  // namespace epmgp
