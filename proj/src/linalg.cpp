#include "epmgp/linalg.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>

namespace epmgp {

Vector matvec(const Matrix& a, const Vector& x) {
    assert(a.cols() == x.size());
    Vector y(a.rows(), 0.0);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < a.cols(); ++j) s += a(i, j) * x[j];
        y[i] = s;
    }
    return y;
}

Vector matvec_transposed(const Matrix& a, const Vector& x) {
    assert(a.rows() == x.size());
    Vector y(a.cols(), 0.0);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        const double xi = x[i];
        for (std::size_t j = 0; j < a.cols(); ++j) y[j] += a(i, j) * xi;
    }
    return y;
}

Matrix matmul(const Matrix& a, const Matrix& b) {
    assert(a.cols() == b.rows());
    Matrix c(a.rows(), b.cols(), 0.0);
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const double aik = a(i, k);
            if (aik == 0.0) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
        }
    return c;
}

Matrix transpose(const Matrix& a) {
    Matrix t(a.cols(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
    return t;
}

double dot(const Vector& a, const Vector& b) {
    assert(a.size() == b.size());
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm2(const Vector& a) { return std::sqrt(dot(a, a)); }

void symmetrize(Matrix& a) {
    assert(a.square());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = i + 1; j < a.cols(); ++j) {
            const double v = 0.5 * (a(i, j) + a(j, i));
            a(i, j) = v;
            a(j, i) = v;
        }
}

double asymmetry(const Matrix& a) {
    assert(a.square());
    double worst = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) {
            scale = std::max(scale, std::fabs(a(i, j)));
            worst = std::max(worst, std::fabs(a(i, j) - a(j, i)));
        }
    return scale > 0.0 ? worst / scale : 0.0;
}

bool cholesky_in_place(Matrix& a) {
    assert(a.square());
    const std::size_t n = a.rows();
    for (std::size_t j = 0; j < n; ++j) {
        double d = a(j, j);
        for (std::size_t k = 0; k < j; ++k) d -= a(j, k) * a(j, k);
        if (!(d > 0.0)) return false;
        const double ljj = std::sqrt(d);
        a(j, j) = ljj;
        for (std::size_t i = j + 1; i < n; ++i) {
            double s = a(i, j);
            for (std::size_t k = 0; k < j; ++k) s -= a(i, k) * a(j, k);
            a(i, j) = s / ljj;
        }
        for (std::size_t i = 0; i < j; ++i) a(i, j) = 0.0;
    }
    return true;
}

Vector solve_lower(const Matrix& l, const Vector& b) {
    assert(l.square() && l.rows() == b.size());
    const std::size_t n = b.size();
    Vector y(n);
    for (std::size_t i = 0; i < n; ++i) {
        double s = b[i];
        for (std::size_t k = 0; k < i; ++k) s -= l(i, k) * y[k];
        y[i] = s / l(i, i);
    }
    return y;
}

Vector solve_lower_transposed(const Matrix& l, const Vector& b) {
    assert(l.square() && l.rows() == b.size());
    const std::size_t n = b.size();
    Vector x(n);
    for (std::size_t ii = n; ii-- > 0;) {
        double s = b[ii];
        for (std::size_t k = ii + 1; k < n; ++k) s -= l(k, ii) * x[k];
        x[ii] = s / l(ii, ii);
    }
    return x;
}

Vector solve_cholesky(const Matrix& l, const Vector& b) {
    return solve_lower_transposed(l, solve_lower(l, b));
}

Matrix invert_from_cholesky(const Matrix& l) {
    const std::size_t n = l.rows();
    Matrix inv(n, n);
    Vector e(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        e[j] = 1.0;
        Vector col = solve_cholesky(l, e);
        for (std::size_t i = 0; i < n; ++i) inv(i, j) = col[i];
        e[j] = 0.0;
    }
    symmetrize(inv);
    return inv;
}

double log_det_from_cholesky(const Matrix& l) {
    double s = 0.0;
    for (std::size_t i = 0; i < l.rows(); ++i) s += std::log(l(i, i));
    return 2.0 * s;
}

namespace {

double off_diagonal_norm(const Matrix& a) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = i + 1; j < a.cols(); ++j) s += 2.0 * a(i, j) * a(i, j);
    return std::sqrt(s);
}

double frobenius_norm(const Matrix& a) {
    double s = 0.0;
    for (double v : a.data()) s += v * v;
    return std::sqrt(s);
}

}  // namespace

std::vector<double> symmetric_eigenvalues(Matrix a) {
    assert(a.square());
    const std::size_t n = a.rows();
    if (n == 0) return {};
    if (n == 1) return {a(0, 0)};
    const double total = frobenius_norm(a);
    const double tol = 1e-12 * (total > 0.0 ? total : 1.0);
    for (int sweep = 0; sweep < 100 && off_diagonal_norm(a) > tol; ++sweep) {
        for (std::size_t p = 0; p < n - 1; ++p)
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (std::fabs(apq) <= 1e-300) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                // Stable tangent of the rotation angle (Golub & Van Loan 8.4).
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::fabs(theta) + std::sqrt(1.0 + theta * theta));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = a(k, p), akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = a(p, k), aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
            }
    }
    std::vector<double> eig(n);
    for (std::size_t i = 0; i < n; ++i) eig[i] = a(i, i);
    std::sort(eig.begin(), eig.end());
    return eig;
}

std::vector<double> singular_values(const Matrix& a) {
    const bool tall = a.rows() >= a.cols();
    const Matrix& g = tall ? a : transpose(a);
    // Gram matrix of the smaller side: g^T g is cols x cols.
    Matrix gram(g.cols(), g.cols(), 0.0);
    for (std::size_t i = 0; i < g.cols(); ++i)
        for (std::size_t j = i; j < g.cols(); ++j) {
            double s = 0.0;
            for (std::size_t k = 0; k < g.rows(); ++k) s += g(k, i) * g(k, j);
            gram(i, j) = s;
            gram(j, i) = s;
        }
    std::vector<double> eig = symmetric_eigenvalues(std::move(gram));
    for (double& v : eig) v = std::sqrt(std::max(v, 0.0));
    return eig;
}

}  // namespace epmgp
