#include "epmgp/ep.hpp"

#include <cmath>
#include <limits>

#include "epmgp/errors.hpp"

namespace epmgp {

namespace {

constexpr double kLog2Pi = 1.8378770664093454836;

// Cached prior quantities reused every sweep.
struct PriorContext {
    Matrix k_inv;
    Vector k_inv_m;
    double log_det_k;
    double m_k_inv_m;

    explicit PriorContext(const Gaussian& prior) {
        const Matrix& l = prior.chol_lower();
        k_inv = invert_from_cholesky(l);
        k_inv_m = solve_cholesky(l, prior.mean());
        log_det_k = log_det_from_cholesky(l);
        m_k_inv_m = dot(prior.mean(), k_inv_m);
    }
};

struct PosteriorRefresh {
    Vector mu;
    Matrix sigma;
    double log_det_sigma;
    double mu_prec_mu;  // mu^T Sigma^{-1} mu
};

PosteriorRefresh refresh_posterior(const PriorContext& ctx, const PolyhedralRegion& region,
                                   const std::vector<SiteFactor>& sites) {
    const std::size_t n = ctx.k_inv.rows();
    Matrix prec = ctx.k_inv;
    Vector h = ctx.k_inv_m;
    for (std::size_t i = 0; i < sites.size(); ++i) {
        const double tau = sites[i].tau;
        const double nu = sites[i].nu;
        if (tau == 0.0 && nu == 0.0) continue;
        const Vector& c = region[i].direction();
        for (std::size_t r = 0; r < n; ++r) {
            if (c[r] == 0.0) continue;
            for (std::size_t s = 0; s < n; ++s) prec(r, s) += tau * c[r] * c[s];
            h[r] += nu * c[r];
        }
    }
    symmetrize(prec);
    Matrix l = prec;
    if (!cholesky_in_place(l))
        throw NotPositiveDefinite("posterior precision lost definiteness (internal)");
    PosteriorRefresh out;
    out.mu = solve_cholesky(l, h);
    out.sigma = invert_from_cholesky(l);
    out.log_det_sigma = -log_det_from_cholesky(l);
    out.mu_prec_mu = dot(h, out.mu);
    return out;
}

double site_contribution(const SiteFactor& s, double alpha) {
    if (s.tau_cav == 0.0) return 0.0;  // never processed
    const double phi_cav = gaussian_log_partition_1d(s.nu_cav, s.tau_cav);
    const double phi_full =
        gaussian_log_partition_1d(s.nu_cav + alpha * s.nu, s.tau_cav + alpha * s.tau);
    return (s.log_zhat + phi_cav - phi_full) / alpha;
}

std::vector<double> resolve_alphas(const EpConfig& config, std::size_t m) {
    if (config.alphas.empty()) return std::vector<double>(m, 1.0);
    if (config.alphas.size() != m)
        throw ValidationError("alphas", "alphas length must match the number of constraints");
    for (double a : config.alphas)
        if (!(a > 0.0)) throw ValidationError("alphas", "alphas must all be positive");
    return config.alphas;
}

}  // namespace

double gaussian_log_partition_1d(double nu, double tau) {
    return 0.5 * (kLog2Pi - std::log(tau) + nu * nu / tau);
}

CavityResult cavity(const EpState& state, const PolyhedralRegion& region, std::size_t i,
                    double alpha_i) {
    const Vector& c = region[i].direction();
    const Vector w = matvec(state.sigma, c);
    const double s = dot(c, w);
    const double tau_m = 1.0 / s;
    const double nu_m = dot(c, state.mu) * tau_m;
    const double tau_cav = tau_m - alpha_i * state.sites[i].tau;
    const double nu_cav = nu_m - alpha_i * state.sites[i].nu;
    if (!(tau_cav > 0.0))
        throw NegativeCavityVariance("cavity precision non-positive for factor " +
                                     std::to_string(i));
    return {nu_cav / tau_cav, 1.0 / tau_cav, gaussian_log_partition_1d(nu_cav, tau_cav)};
}

SiteUpdateResult site_update(const CavityResult& cav, const TruncatedMoments& moments,
                             const SiteFactor& old_site, double alpha_i, double damping) {
    const double tau_cav = 1.0 / cav.variance;
    const double nu_cav = cav.mean * tau_cav;
    const double tau_m = tau_cav + alpha_i * old_site.tau;
    const double nu_m = nu_cav + alpha_i * old_site.nu;

    const double tau_hat = 1.0 / moments.sighat2;
    const double nu_hat = moments.muhat * tau_hat;

    double tau_u = old_site.tau + (tau_hat - tau_m) / alpha_i;
    double nu_u = old_site.nu + (nu_hat - nu_m) / alpha_i;

    SiteUpdateResult out;
    if (tau_u < 0.0) {
        // Possible only through floating-point noise; a box factor cannot
        // widen the marginal.
        out.clamped = tau_u < -1e-12;
        tau_u = 0.0;
        nu_u = 0.0;
    }

    SiteFactor next = old_site;
    next.tau = (1.0 - damping) * old_site.tau + damping * tau_u;
    next.nu = (1.0 - damping) * old_site.nu + damping * nu_u;
    next.log_zhat = moments.log_zhat;
    next.nu_cav = nu_cav;
    next.tau_cav = tau_cav;
    // Scalar site mass in the standard-EP parameterization (undamped update).
    next.log_ztilde =
        tau_u > 0.0
            ? (moments.log_zhat + cav.log_partition -
               gaussian_log_partition_1d(nu_cav + alpha_i * nu_u, tau_cav + alpha_i * tau_u)) /
                      alpha_i +
                  gaussian_log_partition_1d(nu_u, tau_u)
            : 0.0;
    out.site = next;
    return out;
}

void update_posterior(const Gaussian& prior, const PolyhedralRegion& region,
                      const std::vector<SiteFactor>& sites, Vector& mu, Matrix& sigma) {
    PriorContext ctx(prior);
    PosteriorRefresh r = refresh_posterior(ctx, region, sites);
    mu = std::move(r.mu);
    sigma = std::move(r.sigma);
}

double log_partition(const Gaussian& prior, const std::vector<SiteFactor>& sites,
                     const Vector& mu, const Matrix& sigma,
                     const std::vector<double>& alphas) {
    PriorContext ctx(prior);
    Matrix l = sigma;
    if (!cholesky_in_place(l))
        throw NotPositiveDefinite("sigma not positive definite in log_partition");
    const Vector prec_mu = solve_cholesky(l, mu);
    double value = -0.5 * (ctx.m_k_inv_m + ctx.log_det_k) +
                   0.5 * (dot(mu, prec_mu) + log_det_from_cholesky(l));
    for (std::size_t i = 0; i < sites.size(); ++i)
        value += site_contribution(sites[i], alphas.empty() ? 1.0 : alphas[i]);
    if (!std::isfinite(value)) throw NonFinite("log partition is not finite");
    return value;
}

EpState run_power_ep(const Gaussian& prior, const PolyhedralRegion& region,
                     const EpConfig& config) {
    if (region.dim() != prior.dim())
        throw ValidationError("constraints", "region dimension does not match the Gaussian");
    if (!(config.tol > 0.0)) throw ValidationError("tol", "tol must be positive");
    if (!(config.damping > 0.0 && config.damping <= 1.0))
        throw ValidationError("damping", "damping must lie in (0, 1]");

    const std::size_t n = prior.dim();
    const std::size_t m = region.size();
    const std::vector<double> alphas = resolve_alphas(config, m);
    bool nonunit_alpha = false;
    for (double a : alphas) nonunit_alpha |= (a != 1.0);

    const PriorContext ctx(prior);

    EpState state;
    state.mu = prior.mean();
    state.sigma = prior.cov();
    state.sites.assign(m, SiteFactor{});
    state.log_z = 0.0;

    double best_delta = std::numeric_limits<double>::infinity();
    int stalled = 0;

    for (int sweep = 0; sweep < config.max_sweeps; ++sweep) {
        double max_delta = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            const BoxConstraint& box = region[i];
            const Vector& c = box.direction();
            const Vector w = matvec(state.sigma, c);
            const double s = dot(c, w);
            const double tau_m = 1.0 / s;
            const double nu_m = dot(c, state.mu) * tau_m;
            const double tau_cav = tau_m - alphas[i] * state.sites[i].tau;
            if (!(tau_cav > 0.0) || !std::isfinite(tau_cav)) {
                ++state.skipped;
                continue;
            }
            const double nu_cav = nu_m - alphas[i] * state.sites[i].nu;
            const CavityResult cav{nu_cav / tau_cav, 1.0 / tau_cav,
                                   gaussian_log_partition_1d(nu_cav, tau_cav)};
            const TruncatedMoments moments =
                truncated_moments(cav.mean, cav.variance, box.lower(), box.upper());
            SiteUpdateResult upd =
                site_update(cav, moments, state.sites[i], alphas[i], config.damping);
            if (upd.clamped) ++state.clamped;

            const double d_tau = upd.site.tau - state.sites[i].tau;
            const double d_nu = upd.site.nu - state.sites[i].nu;
            max_delta = std::max({max_delta, std::fabs(d_tau), std::fabs(d_nu)});
            state.sites[i] = upd.site;

            if (config.sequential_refresh) {
                // Sherman-Morrison rank-one refresh; O(n^2) per factor.
                const double denom = 1.0 + d_tau * s;
                if (denom > 0.0) {
                    const double k = d_tau / denom;
                    const double step = (d_nu - d_tau * dot(c, state.mu)) / denom;
                    for (std::size_t r = 0; r < n; ++r) {
                        for (std::size_t t = 0; t < n; ++t)
                            state.sigma(r, t) -= k * w[r] * w[t];
                        state.mu[r] += step * w[r];
                    }
                }
            }
        }

        PosteriorRefresh post = refresh_posterior(ctx, region, state.sites);
        state.mu = std::move(post.mu);
        state.sigma = std::move(post.sigma);

        double log_z = -0.5 * (ctx.m_k_inv_m + ctx.log_det_k) +
                       0.5 * (post.mu_prec_mu + post.log_det_sigma);
        for (std::size_t i = 0; i < m; ++i)
            log_z += site_contribution(state.sites[i], alphas[i]);
        if (!std::isfinite(log_z)) throw NonFinite("log partition diverged during sweeps");

        const double d_log_z = std::fabs(log_z - state.log_z);
        state.log_z = log_z;
        state.max_delta = max_delta;
        state.sweeps = sweep + 1;

        if (std::max(max_delta, d_log_z) < config.tol) {
            state.converged = true;
            break;
        }
        if (nonunit_alpha) {
            if (max_delta < best_delta) {
                best_delta = max_delta;
                stalled = 0;
            } else if (++stalled >= 50) {
                state.oscillated = true;
                break;
            }
        }
    }
    return state;
}

EpState run_epmgp(const Gaussian& prior, const PolyhedralRegion& region,
                  const EpConfig& config) {
    EpConfig plain = config;
    plain.alphas.assign(region.size(), 1.0);
    return run_power_ep(prior, region, plain);
}

}  // namespace epmgp
