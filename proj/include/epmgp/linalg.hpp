#pragma once

#include <cstddef>
#include <vector>

namespace epmgp {

using Vector = std::vector<double>;

// Dense row-major matrix. Sized for desk-scale problems (n up to a few
// hundred); no attempt at blocking or vectorization beyond what the
// compiler does.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool square() const { return rows_ == cols_; }

    const std::vector<double>& data() const { return data_; }
    std::vector<double>& data() { return data_; }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

Vector matvec(const Matrix& a, const Vector& x);
Vector matvec_transposed(const Matrix& a, const Vector& x);
Matrix matmul(const Matrix& a, const Matrix& b);
Matrix transpose(const Matrix& a);

double dot(const Vector& a, const Vector& b);
double norm2(const Vector& a);

// (A + A^T) / 2 in place.
void symmetrize(Matrix& a);

// Largest |a_ij - a_ji| relative to the largest |a_ij|; 0 for empty.
double asymmetry(const Matrix& a);

// In-place lower Cholesky of a symmetric matrix; upper triangle is zeroed.
// Returns false as soon as a pivot is <= 0 (not positive definite).
bool cholesky_in_place(Matrix& a);

// Solves L y = b and L^T x = y for lower-triangular L.
Vector solve_lower(const Matrix& l, const Vector& b);
Vector solve_lower_transposed(const Matrix& l, const Vector& b);
Vector solve_cholesky(const Matrix& l, const Vector& b);

// A^{-1} from its lower Cholesky factor.
Matrix invert_from_cholesky(const Matrix& l);

// log det A = 2 sum log L_ii.
double log_det_from_cholesky(const Matrix& l);

// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, swept until
// the off-diagonal Frobenius mass falls below 1e-12 of the total; ascending.
std::vector<double> symmetric_eigenvalues(Matrix a);

// Singular values of a general matrix via the Gram matrix of the smaller
// side; ascending, all >= 0.
std::vector<double> singular_values(const Matrix& a);

}  // namespace epmgp
