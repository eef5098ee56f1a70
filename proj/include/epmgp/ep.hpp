#pragma once

#include <cstddef>
#include <vector>

#include "epmgp/gaussian.hpp"
#include "epmgp/linalg.hpp"
#include "epmgp/trunc_moments.hpp"

namespace epmgp {

// Univariate approximate factor along its constraint direction, in natural
// parameters: nu = mu_tilde / sig2_tilde, tau = 1 / sig2_tilde. tau >= 0
// always (truncation never increases variance); tau == 0 is the unit
// factor and forces nu == 0. The remaining fields are bookkeeping from the
// factor's most recent update, used to assemble the log partition:
// log_zhat is the tilted zeroth moment, (nu_cav, tau_cav) the cavity at
// that update (tau_cav == 0 marks a factor that was never processed), and
// log_ztilde the factor's scalar mass in the standard-EP parameterization.
struct SiteFactor {
    double nu = 0.0;
    double tau = 0.0;
    double log_zhat = 0.0;
    double nu_cav = 0.0;
    double tau_cav = 0.0;
    double log_ztilde = 0.0;
};

struct EpConfig {
    double tol = 1e-10;
    int max_sweeps = 200;
    double damping = 1.0;              // in (0, 1]; 1 = undamped
    std::vector<double> alphas;        // per-factor powers; empty = all 1
    bool sequential_refresh = false;   // refresh (mu, Sigma) after every factor
};

struct EpState {
    Vector mu;
    Matrix sigma;
    std::vector<SiteFactor> sites;
    double log_z = 0.0;
    int sweeps = 0;
    bool converged = false;
    double max_delta = 0.0;   // largest site natural-parameter change, last sweep
    int skipped = 0;          // factor updates skipped on negative cavity variance
    int clamped = 0;          // sites clamped at tau = 0
    bool oscillated = false;  // max_delta stopped decreasing for 50 sweeps (alpha != 1)
};

struct CavityResult {
    double mean;
    double variance;
    double log_partition;  // univariate Gaussian log partition at the cavity
};

// Gaussian log partition over natural parameters,
// log integral exp(nu x - tau x^2 / 2) dx; tau > 0.
double gaussian_log_partition_1d(double nu, double tau);

// Cavity along factor i: the 1-D marginal of state with alpha_i times the
// site's natural parameters removed. Throws NegativeCavityVariance when
// the remaining precision is not positive (callers inside a sweep skip the
// factor instead).
CavityResult cavity(const EpState& state, const PolyhedralRegion& region, std::size_t i,
                    double alpha_i);

struct SiteUpdateResult {
    SiteFactor site;
    bool clamped = false;
};

// Moment-matching site update with fractional power alpha and damping in
// natural-parameter space. `marginal_tau/nu` are the current 1-D marginal
// natural parameters (cavity + alpha * old site).
SiteUpdateResult site_update(const CavityResult& cav, const TruncatedMoments& moments,
                             const SiteFactor& old_site, double alpha_i, double damping);

// (mu, Sigma) from prior and sites: Sigma^{-1} = K^{-1} + sum tau_i c_i c_i^T,
// mu = Sigma (K^{-1} m + sum nu_i c_i). Solves through a factorization of
// the precision; Sigma itself is never inverted.
void update_posterior(const Gaussian& prior, const PolyhedralRegion& region,
                      const std::vector<SiteFactor>& sites, Vector& mu, Matrix& sigma);

// Log partition of the approximation. With all alphas = 1 this is the
// classic three-part EP normalisation (prior + per-site + full
// approximation); for general alpha each site contributes
// (1/alpha_i) [log zhat_i + Phi1(cavity) - Phi1(cavity + alpha_i * site)].
// Throws NonFinite if any term is NaN or infinite.
double log_partition(const Gaussian& prior, const std::vector<SiteFactor>& sites,
                     const Vector& mu, const Matrix& sigma,
                     const std::vector<double>& alphas);

// Fixed-point iteration: sweep the factors (cavity -> interval moments ->
// site update), refresh the posterior once per sweep (or per factor with
// config.sequential_refresh), stop when site parameters and log Z move
// less than config.tol or max_sweeps is hit.
EpState run_epmgp(const Gaussian& prior, const PolyhedralRegion& region,
                  const EpConfig& config = {});

// Same loop with per-factor powers taken from config.alphas; reduces
// exactly to run_epmgp when all powers are 1.
EpState run_power_ep(const Gaussian& prior, const PolyhedralRegion& region,
                     const EpConfig& config);

}  // namespace epmgp
