#include <doctest.h>

#include <cmath>
#include <limits>

#include "epmgp/errors.hpp"
#include "epmgp/rng.hpp"
#include "epmgp/trunc_moments.hpp"
#include "../support/reference.hpp"

using namespace epmgp;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

TEST_CASE("no truncation returns the cavity moments exactly") {
    const TruncatedMoments m = truncated_moments(0.0, 1.0, -kInf, kInf);
    CHECK(m.zhat == 1.0);
    CHECK(m.muhat == 0.0);
    CHECK(m.sighat2 == 1.0);
    CHECK(m.log_zhat == 0.0);
}

TEST_CASE("symmetric unit interval, frozen against the quadrature oracle") {
    const TruncatedMoments m = truncated_moments(0.0, 1.0, -1.0, 1.0);
    const auto q = refmath::truncated_moments_quadrature(0.0, 1.0, -1.0, 1.0);
    CHECK(m.zhat == doctest::Approx(static_cast<double>(q.mass)).epsilon(1e-13));
    CHECK(m.muhat == 0.0);  // exactly, by the symmetric formula
    CHECK(m.sighat2 == doctest::Approx(static_cast<double>(q.variance)).epsilon(1e-12));
    // frozen oracle values
    CHECK(m.zhat == doctest::Approx(0.6826894921370859).epsilon(1e-14));
    CHECK(m.sighat2 == doctest::Approx(0.2911250947727932).epsilon(1e-12));
}

TEST_CASE("half line matches the half-normal moments") {
    const TruncatedMoments m = truncated_moments(0.0, 1.0, 0.0, kInf);
    const auto q = refmath::truncated_moments_quadrature(0.0, 1.0, 0.0, 60.0);
    CHECK(m.zhat == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(m.muhat == doctest::Approx(static_cast<double>(q.mean)).epsilon(1e-13));
    CHECK(m.sighat2 == doctest::Approx(static_cast<double>(q.variance)).epsilon(1e-12));
    CHECK(m.muhat == doctest::Approx(0.7978845608028654).epsilon(1e-14));
    CHECK(m.sighat2 == doctest::Approx(0.3633802276324187).epsilon(1e-12));
}

TEST_CASE("random cases against quadrature across the working range") {
    RngStream rng(2024);
    double worst_z = 0.0, worst_mu = 0.0, worst_s2 = 0.0;
    for (int rep = 0; rep < 20000; ++rep) {
        const double mu = 4.0 * (rng.uniform() - 0.5);
        const double sig2 = 0.1 + 4.0 * rng.uniform();
        const double sig = std::sqrt(sig2);
        double a = mu + sig * 16.0 * (rng.uniform() - 0.5);
        double b = mu + sig * 16.0 * (rng.uniform() - 0.5);
        if (a > b) std::swap(a, b);
        if (!(a < b)) continue;
        const int sides = rep % 10;
        const double lo = sides == 7 ? -kInf : a;
        const double hi = sides == 8 ? kInf : b;
        if (lo == -kInf && hi == kInf) continue;

        const TruncatedMoments m = truncated_moments(mu, sig2, lo, hi);
        const auto q = refmath::truncated_moments_quadrature(mu, sig2, lo, hi);
        worst_z = std::max(worst_z,
                           std::fabs(static_cast<double>((m.zhat - q.mass) / q.mass)));
        worst_mu = std::max(worst_mu, std::fabs(m.muhat - static_cast<double>(q.mean)));
        worst_s2 = std::max(worst_s2, std::fabs(m.sighat2 - static_cast<double>(q.variance)));
    }
    CHECK(worst_z < 1e-9);
    CHECK(worst_mu < 1e-8);
    CHECK(worst_s2 < 1e-8);
}

TEST_CASE("deep tail intervals keep finite moments through the scaled path") {
    // (0, 1, 20, 21): zhat ~ 1e-88, ratios survive via erfcx
    const TruncatedMoments m = truncated_moments(0.0, 1.0, 20.0, 21.0);
    const auto q = refmath::truncated_moments_quadrature(0.0, 1.0, 20.0, 21.0);
    CHECK(std::fabs(m.log_zhat - static_cast<double>(logl(q.mass))) < 1e-10);
    CHECK(m.muhat == doctest::Approx(static_cast<double>(q.mean)).epsilon(1e-11));
    CHECK(m.sighat2 == doctest::Approx(static_cast<double>(q.variance)).epsilon(1e-9));
    CHECK(m.muhat >= 20.0);
    CHECK(m.muhat <= 21.0);

    // mirrored
    const TruncatedMoments lm = truncated_moments(0.0, 1.0, -21.0, -20.0);
    CHECK(lm.muhat == doctest::Approx(-m.muhat).epsilon(1e-13));
    CHECK(lm.sighat2 == doctest::Approx(m.sighat2).epsilon(1e-13));
    CHECK(lm.zhat == m.zhat);

    // one-sided far tail
    const TruncatedMoments os = truncated_moments(0.0, 1.0, 25.0, kInf);
    const auto qo = refmath::truncated_moments_quadrature(0.0, 1.0, 25.0, kInf);
    CHECK(os.muhat == doctest::Approx(static_cast<double>(qo.mean)).epsilon(1e-11));
    CHECK(os.sighat2 == doctest::Approx(static_cast<double>(qo.variance)).epsilon(1e-8));
}

TEST_CASE("tail underflow is signalled, not silently zeroed") {
    CHECK_THROWS_AS(truncated_moments(0.0, 1.0, 38.0, 39.0), TailUnderflow);
    CHECK_THROWS_AS(truncated_moments(0.0, 1.0, -39.0, -38.0), TailUnderflow);
    CHECK_NOTHROW(truncated_moments(0.0, 1.0, 25.0, 26.0));
}

TEST_CASE("variance never exceeds the cavity variance") {
    RngStream rng(55);
    for (int rep = 0; rep < 2000; ++rep) {
        const double sig2 = 0.05 + 3.0 * rng.uniform();
        double a = 10.0 * (rng.uniform() - 0.5);
        double b = a + 6.0 * rng.uniform() + 1e-3;
        const TruncatedMoments m = truncated_moments(0.0, sig2, a, b);
        CHECK(m.sighat2 > 0.0);
        CHECK(m.sighat2 < sig2);
        CHECK(m.zhat >= 0.0);
        CHECK(m.zhat <= 1.0);
        CHECK(m.muhat >= a);
        CHECK(m.muhat <= b);
    }
}

TEST_CASE("translation equivariance") {
    const double t = 3.25;
    const TruncatedMoments base = truncated_moments(0.4, 1.7, -0.9, 1.3);
    const TruncatedMoments moved = truncated_moments(0.4 + t, 1.7, -0.9 + t, 1.3 + t);
    CHECK(moved.muhat == doctest::Approx(base.muhat + t).epsilon(1e-12));
    CHECK(moved.zhat == doctest::Approx(base.zhat).epsilon(1e-12));
    CHECK(moved.sighat2 == doctest::Approx(base.sighat2).epsilon(1e-12));
}

TEST_CASE("symmetric intervals produce an exactly centered mean") {
    for (double half : {0.25, 1.0, 2.5, 4.0}) {
        const TruncatedMoments m = truncated_moments(0.0, 2.3, -half, half);
        CHECK(m.muhat == 0.0);
    }
}

TEST_CASE("input validation") {
    CHECK_THROWS_AS(truncated_moments(0.0, -1.0, 0.0, 1.0), ValidationError);
    CHECK_THROWS_AS(truncated_moments(0.0, 1.0, 2.0, 1.0), ValidationError);
    CHECK_THROWS_AS(truncated_moments(0.0, 1.0, kInf, kInf), ValidationError);
}
