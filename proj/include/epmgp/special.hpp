#pragma once

namespace epmgp {

// Error function family. Rational approximations from W. J. Cody,
// "Rational Chebyshev approximation for the error function",
// Math. Comp. 23 (1969) 631-637, as organized in the SPECFUN CALERF
// routine; relative error below ~1.2e-16 on the representable range.
// All three accept +-inf and saturate instead of raising.
double erf(double x);
double erfc(double x);
// exp(x^2) * erfc(x); overflows to +inf for x < ~-26.6.
double erfcx(double x);

// Standard normal density and cdf.
double normal_pdf(double x);
double normal_cdf(double x);
// log Phi(x), computed through erfcx for x < 0 so it is accurate far into
// the lower tail (absolute error ~1e-13 down to x = -37 and beyond).
double log_normal_cdf(double x);

// Inverse standard normal cdf. Wichura's algorithm AS 241 (PPND16),
// Applied Statistics 37 (1988) 477-484; accurate to ~1 part in 1e16.
// Returns -+inf for p <= 0 / p >= 1.
double inverse_normal_cdf(double p);

// P(a <= Z <= b) for standard normal Z, a < b, bounds may be +-inf.
// Uses erfc differences on same-sign intervals so far tails do not cancel.
double normal_interval_prob(double a, double b);

}  // namespace epmgp
