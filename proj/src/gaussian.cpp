#include "epmgp/gaussian.hpp"

#include <cmath>
#include <limits>

#include "epmgp/errors.hpp"

namespace epmgp {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

bool all_finite(const Vector& v) {
    for (double x : v)
        if (!std::isfinite(x)) return false;
    return true;
}
}  // namespace

CholeskyFactor cholesky(const Matrix& cov) {
    Matrix l = cov;
    if (cholesky_in_place(l)) return {std::move(l)};
    double trace = 0.0;
    for (std::size_t i = 0; i < cov.rows(); ++i) trace += cov(i, i);
    const double jitter = 1e-10 * trace / static_cast<double>(cov.rows());
    l = cov;
    for (std::size_t i = 0; i < cov.rows(); ++i) l(i, i) += jitter;
    if (cholesky_in_place(l)) return {std::move(l)};
    throw NotPositiveDefinite("covariance is not positive definite (jitter retry failed)");
}

Gaussian::Gaussian(Vector mean, Matrix cov) : mean_(std::move(mean)), cov_(std::move(cov)) {
    if (!cov_.square() || cov_.rows() != mean_.size())
        throw ValidationError("cov", "cov must be n x n matching the mean length");
    if (!all_finite(mean_)) throw ValidationError("mean", "mean has non-finite entries");
    if (!all_finite(cov_.data())) throw ValidationError("cov", "cov has non-finite entries");
    if (asymmetry(cov_) > 1e-12)
        throw ValidationError("cov", "cov is asymmetric beyond 1e-12 relative tolerance");
    symmetrize(cov_);
    chol_ = cholesky(cov_);
}

Gaussian Gaussian::standard(std::size_t n) {
    return Gaussian(Vector(n, 0.0), Matrix::identity(n));
}

BoxConstraint::BoxConstraint(Vector direction, double lower, double upper)
    : direction_(std::move(direction)), lower_(lower), upper_(upper) {
    if (direction_.empty()) throw ValidationError("direction", "direction is empty");
    for (double v : direction_)
        if (!std::isfinite(v)) throw ValidationError("direction", "direction has non-finite entries");
    const double r = norm2(direction_);
    if (!(r > 0.0)) throw ValidationError("direction", "direction has zero norm");
    if (r != 1.0) {
        for (double& v : direction_) v /= r;
        lower_ /= r;
        upper_ /= r;
    }
    if (std::isnan(lower_) || std::isnan(upper_))
        throw ValidationError("lower", "bounds must not be NaN");
    if (!(lower_ < upper_)) throw ValidationError("lower", "lower must be strictly below upper");
    if (lower_ == -kInf && upper_ == kInf)
        throw ValidationError("lower", "at least one bound must be finite");
}

PolyhedralRegion::PolyhedralRegion(std::vector<BoxConstraint> constraints)
    : constraints_(std::move(constraints)) {
    if (constraints_.empty())
        throw ValidationError("constraints", "a region needs at least one constraint");
    const std::size_t n = constraints_.front().dim();
    for (const auto& c : constraints_)
        if (c.dim() != n)
            throw ValidationError("constraints", "constraints disagree on dimension");
}

bool PolyhedralRegion::contains(const Vector& x) const {
    for (const auto& c : constraints_) {
        const double t = dot(c.direction(), x);
        if (t < c.lower() || t > c.upper()) return false;
    }
    return true;
}

std::pair<Gaussian, PolyhedralRegion> whiten(const Gaussian& dist,
                                             const PolyhedralRegion& region) {
    const Matrix& l = dist.chol_lower();
    std::vector<BoxConstraint> out;
    out.reserve(region.size());
    for (const auto& c : region.constraints()) {
        const double shift = dot(c.direction(), dist.mean());
        Vector d = matvec_transposed(l, c.direction());
        // BoxConstraint renormalizes d and rescales the shifted bounds.
        out.emplace_back(std::move(d), c.lower() - shift, c.upper() - shift);
    }
    return {Gaussian::standard(dist.dim()), PolyhedralRegion(std::move(out))};
}

RegionMetrics region_metrics(const Gaussian& dist, const PolyhedralRegion& region) {
    const std::size_t n = dist.dim();
    const std::size_t m = region.size();

    const std::vector<double> eig = symmetric_eigenvalues(dist.cov());
    const double cond_k = eig.back() / eig.front();

    Matrix cprime(n, m);
    for (std::size_t j = 0; j < m; ++j) {
        const Vector col = matvec_transposed(dist.chol_lower(), region[j].direction());
        for (std::size_t i = 0; i < n; ++i) cprime(i, j) = col[i];
    }

    const std::vector<double> sv = singular_values(cprime);
    const double smax = sv.back();
    const double smin = sv.front();
    const double cond_cprime = (smin < 1e-12 * smax) ? kInf : smax / smin;

    Matrix gram(m, m, 0.0);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) {
            double s = 0.0;
            for (std::size_t k = 0; k < n; ++k) s += cprime(k, i) * cprime(k, j);
            gram(i, j) = s / static_cast<double>(n);
        }
    double fro = 0.0, l1 = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
        double colsum = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            fro += gram(i, j) * gram(i, j);
            colsum += std::fabs(gram(i, j));
        }
        l1 = std::max(l1, colsum);
    }
    return {cond_k, cond_cprime, std::sqrt(fro), l1};
}

}  // namespace epmgp
