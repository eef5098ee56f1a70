#include <doctest.h>

#include <cmath>
#include <limits>

#include "epmgp/errors.hpp"
#include "epmgp/gaussian.hpp"
#include "epmgp/generators.hpp"
#include "epmgp/oracles.hpp"
#include "epmgp/rng.hpp"

using namespace epmgp;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

TEST_CASE("cholesky of simple matrices") {
    CholeskyFactor id = cholesky(Matrix::identity(2));
    CHECK(id.lower(0, 0) == 1.0);
    CHECK(id.lower(1, 1) == 1.0);
    CHECK(id.lower(1, 0) == 0.0);

    Matrix d(2, 2, 0.0);
    d(0, 0) = 4.0;
    d(1, 1) = 9.0;
    CholeskyFactor cd = cholesky(d);
    CHECK(cd.lower(0, 0) == 2.0);
    CHECK(cd.lower(1, 1) == 3.0);

    Matrix a(2, 2);
    a(0, 0) = 2.0;
    a(0, 1) = a(1, 0) = 1.0;
    a(1, 1) = 2.0;
    CholeskyFactor ca = cholesky(a);
    CHECK(ca.lower(0, 0) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
    CHECK(ca.lower(1, 0) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-15));
    CHECK(ca.lower(1, 1) == doctest::Approx(std::sqrt(1.5)).epsilon(1e-15));
    // reconstruction
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j) {
            double s = 0.0;
            for (std::size_t k = 0; k < 2; ++k) s += ca.lower(i, k) * ca.lower(j, k);
            CHECK(s == doctest::Approx(a(i, j)).epsilon(1e-14));
        }
}

TEST_CASE("jitter retry accepts borderline matrices and rejects indefinite ones") {
    // marginally indefinite from rounding: eigenvalue -1e-13 against trace 2
    Matrix b(2, 2);
    b(0, 0) = b(1, 1) = 1.0;
    b(0, 1) = b(1, 0) = 1.0 + 1e-13;
    CHECK_NOTHROW(cholesky(b));

    Matrix c(2, 2);
    c(0, 0) = c(1, 1) = 1.0;
    c(0, 1) = c(1, 0) = 2.0;
    CHECK_THROWS_AS(cholesky(c), NotPositiveDefinite);
}

TEST_CASE("gaussian validation names the offending field") {
    Matrix asym(2, 2);
    asym(0, 0) = asym(1, 1) = 1.0;
    asym(0, 1) = 0.5;
    asym(1, 0) = 0.5 + 1e-6;
    try {
        Gaussian g({0.0, 0.0}, asym);
        FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
        CHECK(e.field() == "cov");
    }
}

TEST_CASE("box constraints normalize directions and rescale bounds") {
    BoxConstraint c({2.0, 0.0}, 0.0, 4.0);
    CHECK(c.direction()[0] == doctest::Approx(1.0));
    CHECK(c.lower() == doctest::Approx(0.0));
    CHECK(c.upper() == doctest::Approx(2.0));

    CHECK_THROWS_AS(BoxConstraint({1.0}, 2.0, 1.0), ValidationError);
    CHECK_THROWS_AS(BoxConstraint({1.0}, -kInf, kInf), ValidationError);
    CHECK_NOTHROW(BoxConstraint({1.0}, -kInf, 0.0));
}

TEST_CASE("whitening is the identity on already-white problems") {
    Gaussian white = Gaussian::standard(3);
    PolyhedralRegion region({BoxConstraint({1.0, 0.0, 0.0}, -1.0, 2.0),
                             BoxConstraint({0.0, 1.0, 0.0}, 0.0, kInf)});
    auto [wd, wr] = whiten(white, region);
    auto close = [](double a, double b) {
        return a == b || std::fabs(a - b) < 1e-12 * std::max(1.0, std::fabs(b));
    };
    for (std::size_t i = 0; i < wr.size(); ++i) {
        for (std::size_t k = 0; k < 3; ++k)
            CHECK(wr[i].direction()[k] == doctest::Approx(region[i].direction()[k]).epsilon(1e-12));
        CHECK(close(wr[i].lower(), region[i].lower()));
        CHECK(close(wr[i].upper(), region[i].upper()));
    }
}

TEST_CASE("whitening a scaled axis problem rescales a zero bound to itself") {
    Matrix k(2, 2, 0.0);
    k(0, 0) = 4.0;
    k(1, 1) = 1.0;
    Gaussian g({0.0, 0.0}, k);
    PolyhedralRegion region({BoxConstraint({1.0, 0.0}, 0.0, kInf)});
    auto [wd, wr] = whiten(g, region);
    CHECK(wr[0].direction()[0] == doctest::Approx(1.0));
    CHECK(wr[0].direction()[1] == doctest::Approx(0.0));
    CHECK(wr[0].lower() == doctest::Approx(0.0));
    CHECK(wr[0].upper() == kInf);
}

TEST_CASE("whitening preserves the region probability (MC both sides)") {
    RngStream rng(303);
    Gaussian g = gen_gaussian(3, rng);
    // shift the mean so the translation path is exercised too
    Matrix cov = g.cov();
    Gaussian shifted({0.3, -0.2, 0.5}, cov);
    PolyhedralRegion region = gen_poly_region(shifted, 4, rng);
    auto [wd, wr] = whiten(shifted, region);

    const OracleEstimate orig = mc_rejection(shifted, region, 400000, 5);
    const OracleEstimate white = mc_rejection(wd, wr, 400000, 6);
    const double se = std::sqrt(orig.std_error * orig.std_error +
                                white.std_error * white.std_error);
    CHECK(std::fabs(orig.value - white.value) < 3.0 * se);
}

TEST_CASE("region metrics on identity problems") {
    Gaussian g = Gaussian::standard(2);
    PolyhedralRegion box({BoxConstraint({1.0, 0.0}, -1.0, 1.0),
                          BoxConstraint({0.0, 1.0}, -1.0, 1.0)});
    const RegionMetrics m = region_metrics(g, box);
    CHECK(m.cond_k == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(m.cond_cprime == doctest::Approx(1.0).epsilon(1e-12));
    // (1/n) C'^T C' = I/2 for the identity problem in n = 2
    CHECK(m.gram_fro == doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));
    CHECK(m.gram_l1 == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("hyperrectangular condition metric is sqrt of covariance condition") {
    RngStream rng(71);
    for (int rep = 0; rep < 100; ++rep) {
        const std::size_t n = (rep % 3 == 0) ? 2 : (rep % 3 == 1 ? 5 : 10);
        Gaussian g = gen_gaussian(n, rng);
        PolyhedralRegion rect = gen_rect_region(g, rng);
        const RegionMetrics m = region_metrics(g, rect);
        CHECK(m.cond_cprime * m.cond_cprime == doctest::Approx(m.cond_k).epsilon(1e-8));
    }
}

TEST_CASE("duplicated constraints are flagged rank deficient") {
    Gaussian g = Gaussian::standard(2);
    PolyhedralRegion dup({BoxConstraint({1.0, 0.0}, -1.0, 1.0),
                          BoxConstraint({1.0, 0.0}, -1.0, 1.0)});
    const RegionMetrics m = region_metrics(g, dup);
    CHECK(std::isinf(m.cond_cprime));
}
