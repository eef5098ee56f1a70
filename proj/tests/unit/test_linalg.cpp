#include <doctest.h>

#include <cmath>

#include "epmgp/linalg.hpp"
#include "epmgp/rng.hpp"

using namespace epmgp;

namespace {

Matrix random_spd(std::size_t n, RngStream& rng, double cond_target) {
    // Diagonal spectrum spread over the requested condition number in a
    // random orthogonal-ish frame built from Householder-free products.
    Matrix a(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) a(i, j) = rng.normal();
    Matrix g(n, n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const double lam = std::pow(cond_target, static_cast<double>(i) / std::max<std::size_t>(n - 1, 1));
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k) g(j, k) += lam * a(i, j) * a(i, k);
    }
    symmetrize(g);
    return g;
}

double frob_rel_diff(const Matrix& a, const Matrix& b) {
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) {
            num += (a(i, j) - b(i, j)) * (a(i, j) - b(i, j));
            den += b(i, j) * b(i, j);
        }
    return std::sqrt(num / den);
}

}  // namespace

TEST_CASE("cholesky round-trips random SPD matrices") {
    RngStream rng(101);
    for (int rep = 0; rep < 40; ++rep) {
        const std::size_t n = 2 + rep % 9;
        const double cond = std::pow(10.0, (rep % 8));
        Matrix a = random_spd(n, rng, cond);
        Matrix l = a;
        REQUIRE(cholesky_in_place(l));
        Matrix rec(n, n, 0.0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                for (std::size_t k = 0; k <= std::min(i, j); ++k) rec(i, j) += l(i, k) * l(j, k);
        CHECK(frob_rel_diff(rec, a) < 1e-10);
    }
}

TEST_CASE("cholesky rejects indefinite input") {
    Matrix a(2, 2);
    a(0, 0) = 1.0;
    a(1, 1) = -1.0;
    CHECK_FALSE(cholesky_in_place(a));
}

TEST_CASE("solves invert the factorization") {
    RngStream rng(77);
    Matrix a = random_spd(6, rng, 1e4);
    Matrix l = a;
    REQUIRE(cholesky_in_place(l));
    Vector b(6);
    for (double& v : b) v = rng.normal();
    const Vector x = solve_cholesky(l, b);
    const Vector ax = matvec(a, x);
    for (std::size_t i = 0; i < 6; ++i) CHECK(ax[i] == doctest::Approx(b[i]).epsilon(1e-9));

    const Matrix inv = invert_from_cholesky(l);
    const Matrix prod = matmul(a, inv);
    for (std::size_t i = 0; i < 6; ++i)
        for (std::size_t j = 0; j < 6; ++j)
            CHECK(prod(i, j) == doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-9).scale(1.0));
}

TEST_CASE("jacobi eigenvalues match known spectra") {
    Matrix d(3, 3, 0.0);
    d(0, 0) = 3.0;
    d(1, 1) = -1.0;
    d(2, 2) = 0.5;
    const auto eig = symmetric_eigenvalues(d);
    CHECK(eig[0] == doctest::Approx(-1.0));
    CHECK(eig[1] == doctest::Approx(0.5));
    CHECK(eig[2] == doctest::Approx(3.0));

    // trace and determinant invariants on a random SPD matrix
    RngStream rng(5);
    Matrix a = random_spd(5, rng, 1e3);
    const auto ea = symmetric_eigenvalues(a);
    double trace = 0.0, tr_eig = 0.0;
    for (std::size_t i = 0; i < 5; ++i) trace += a(i, i);
    for (double v : ea) tr_eig += v;
    CHECK(tr_eig == doctest::Approx(trace).epsilon(1e-10));
    CHECK(ea.front() > 0.0);
}

TEST_CASE("singular values of orthogonal columns are unit") {
    Matrix a = Matrix::identity(4);
    const auto sv = singular_values(a);
    for (double v : sv) CHECK(v == doctest::Approx(1.0));

    // duplicated column makes the set singular
    Matrix b(2, 2);
    b(0, 0) = b(0, 1) = 1.0;
    b(1, 0) = b(1, 1) = 2.0;
    const auto sb = singular_values(b);
    CHECK(sb.front() == doctest::Approx(0.0).scale(1.0));
    CHECK(sb.back() == doctest::Approx(std::sqrt(10.0)));
}
