#pragma once

#include <cstdint>
#include <string>

#include "epmgp/gaussian.hpp"
#include "epmgp/rng.hpp"

namespace epmgp {

enum class OracleMethod { mc, qmc, orthant, univariate };

const char* to_string(OracleMethod m);

struct OracleEstimate {
    double value = 0.0;       // probability estimate in [0, 1]
    double std_error = 0.0;   // 0 for exact oracles
    OracleMethod method = OracleMethod::mc;
    long long samples = 0;    // total integrand evaluations / draws
};

// Rejection sampling from the prior: draw x = m + L z, count the fraction
// landing inside the region. Unbiased for any region.
OracleEstimate mc_rejection(const Gaussian& prior, const PolyhedralRegion& region,
                            long long n_samples, uint64_t seed);

// Rectangle probability by the separation-of-variables transform
// (sequential conditioning through the Cholesky factor, variables ordered
// smallest conditional mass first) integrated with a randomly-shifted
// rank-1 lattice rule under the baker transform. Regions with m <= n and
// full-rank constraint matrix are first reduced to an m-dimensional
// rectangle under covariance C^T K C; otherwise throws NotReducible and
// the caller falls back to mc_rejection. n_points snaps to the nearest
// tabulated lattice size (see lattice_table.cpp); std_error is the sample
// error over the random shifts.
OracleEstimate genz_qmc(const Gaussian& prior, const PolyhedralRegion& region,
                        long long n_points, int n_shifts, uint64_t seed,
                        bool reorder_variables = true);

// Closed-form positive-orthant probability of a zero-mean Gaussian with
// the given correlation matrix; n = 2 or 3 only.
OracleEstimate orthant_analytic(const Matrix& correlations);

// Phi((u - mu)/sigma) - Phi((l - mu)/sigma) through tail-stable forms.
OracleEstimate univariate_exact(double mu, double sig2, double l, double u);

// Identity of the embedded lattice rule, recorded in output metadata.
std::string lattice_rule_id();

}  // namespace epmgp
