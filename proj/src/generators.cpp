#include "epmgp/generators.hpp"

#include <cmath>


namespace epmgp {

namespace {


// Haar-uniform orthonormal basis: modified Gram-Schmidt on a standard
// normal matrix with one re-orthogonalization pass. The column norms are
// positive by construction, which fixes the triangular factor's sign
// convention.
Matrix haar_basis(std::size_t n, RngStream& stream) {
    Matrix q(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        Vector v = stream.normal_vector(n);
        for (int pass = 0; pass < 2; ++pass)
            for (std::size_t t = 0; t < j; ++t) {
                double proj = 0.0;
                for (std::size_t i = 0; i < n; ++i) proj += q(i, t) * v[i];
                for (std::size_t i = 0; i < n; ++i) v[i] -= proj * q(i, t);
            }
        double r = norm2(v);
        while (!(r > 1e-10)) {  // vanishing leftover: redraw the column
            v = stream.normal_vector(n);
            r = norm2(v);
        }
        for (std::size_t i = 0; i < n; ++i) q(i, j) = v[i] / r;
    }
    return q;
}

Vector draw_anchor(const Gaussian& dist, RngStream& stream) {
    const Vector z = stream.normal_vector(dist.dim());
    Vector x = dist.mean();
    const Matrix& l = dist.chol_lower();
    for (std::size_t i = 0; i < dist.dim(); ++i)
        for (std::size_t j = 0; j <= i; ++j) x[i] += l(i, j) * z[j];
    return x;
}

BoxConstraint anchored_constraint(Vector direction, const Vector& anchor, std::size_t n,
                                  double scale, RngStream& stream) {
    const double center = dot(direction, anchor);
    const double up = scale * std::sqrt(static_cast<double>(n)) * stream.uniform();
    const double down = scale * std::sqrt(static_cast<double>(n)) * stream.uniform();
    return BoxConstraint(std::move(direction), center - down, center + up);
}

}  // namespace

Gaussian gen_gaussian(std::size_t n, RngStream& stream) {
    Vector lambda(n);
    for (double& v : lambda) v = stream.exponential();
    const Matrix q = haar_basis(n, stream);
    Matrix k(n, n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
            double s = 0.0;
            for (std::size_t t = 0; t < n; ++t) s += q(i, t) * lambda[t] * q(j, t);
            k(i, j) = s;
            k(j, i) = s;
        }
    return Gaussian(Vector(n, 0.0), std::move(k));
}

PolyhedralRegion gen_rect_region(const Gaussian& dist, RngStream& stream, double scale) {
    const std::size_t n = dist.dim();
    const Vector anchor = draw_anchor(dist, stream);
    std::vector<BoxConstraint> cs;
    cs.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        Vector e(n, 0.0);
        e[i] = 1.0;
        cs.push_back(anchored_constraint(std::move(e), anchor, n, scale, stream));
    }
    return PolyhedralRegion(std::move(cs));
}

PolyhedralRegion gen_poly_region(const Gaussian& dist, std::size_t m, RngStream& stream,
                                 double scale) {
    const std::size_t n = dist.dim();
    const Vector anchor = draw_anchor(dist, stream);
    std::vector<BoxConstraint> cs;
    cs.reserve(m);
    for (std::size_t i = 0; i < m; ++i)
        cs.push_back(anchored_constraint(stream.unit_vector(n), anchor, n, scale, stream));
    return PolyhedralRegion(std::move(cs));
}

}  // namespace epmgp
