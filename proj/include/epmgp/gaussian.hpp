#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "epmgp/linalg.hpp"

namespace epmgp {

// Lower-triangular Cholesky factor with positive diagonal.
struct CholeskyFactor {
    Matrix lower;
};

// Cholesky of a symmetric positive definite matrix. On a failed pivot the
// factorization is retried once with 1e-10 * trace / n added to the
// diagonal; a second failure throws NotPositiveDefinite. This tolerates
// rounding in user-supplied covariances without masking genuinely
// indefinite inputs.
CholeskyFactor cholesky(const Matrix& cov);

// A multivariate Gaussian N(mean, cov). The covariance is symmetrized on
// ingestion (rejecting asymmetry beyond 1e-12 relative) and must be
// positive definite; the factorization is cached.
class Gaussian {
public:
    Gaussian(Vector mean, Matrix cov);

    static Gaussian standard(std::size_t n);

    std::size_t dim() const { return mean_.size(); }
    const Vector& mean() const { return mean_; }
    const Matrix& cov() const { return cov_; }
    const Matrix& chol_lower() const { return chol_.lower; }

private:
    Vector mean_;
    Matrix cov_;
    CholeskyFactor chol_;
};

// One box factor: lower < c^T x < upper along a unit direction c. Non-unit
// directions are normalized on ingestion with the bounds rescaled by the
// same factor, so the constraint set is unchanged. Infinite bounds are
// IEEE +-inf; at least one bound must be finite and lower < upper.
class BoxConstraint {
public:
    BoxConstraint(Vector direction, double lower, double upper);

    std::size_t dim() const { return direction_.size(); }
    const Vector& direction() const { return direction_; }
    double lower() const { return lower_; }
    double upper() const { return upper_; }

private:
    Vector direction_;
    double lower_;
    double upper_;
};

// Intersection of m box factors; m may be below, equal to, or above the
// dimension.
class PolyhedralRegion {
public:
    explicit PolyhedralRegion(std::vector<BoxConstraint> constraints);

    std::size_t dim() const { return constraints_.front().dim(); }
    std::size_t size() const { return constraints_.size(); }
    const BoxConstraint& operator[](std::size_t i) const { return constraints_[i]; }
    const std::vector<BoxConstraint>& constraints() const { return constraints_; }

    bool contains(const Vector& x) const;

private:
    std::vector<BoxConstraint> constraints_;
};

// Change of variables y = L^{-1}(x - m) mapping the problem onto N(0, I).
// Directions become L^T c_i (re-normalized, bounds shifted by c_i^T m and
// rescaled); the region probability is unchanged.
std::pair<Gaussian, PolyhedralRegion> whiten(const Gaussian& dist,
                                             const PolyhedralRegion& region);

// Geometric conditioning of the whitened problem. C' has columns L^T c_i.
struct RegionMetrics {
    double cond_k;        // extreme eigenvalue ratio of the covariance
    double cond_cprime;   // extreme singular value ratio of C' (inf if rank deficient)
    double gram_fro;      // Frobenius norm of (1/n) C'^T C'
    double gram_l1;       // induced 1-norm (max abs column sum) of the same
};

RegionMetrics region_metrics(const Gaussian& dist, const PolyhedralRegion& region);

}  // namespace epmgp
